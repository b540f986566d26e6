// Copyright 2024 Google LLC.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef NNASHOR_TESTS_TEST_UTIL_H_
#define NNASHOR_TESTS_TEST_UTIL_H_

#include <complex>
#include <cstdint>
#include <map>
#include <string>

#include "gtest/gtest.h"
#include "nnashor/circuit.h"
#include "nnashor/simulator.h"

namespace nnashor {
namespace testing {

// Basis index with each named register holding the given value.
inline uint64_t Pack(const Layout& layout,
                     const std::map<std::string, uint64_t>& values) {
  uint64_t index = 0;
  for (const auto& [name, v] : values) {
    const auto& pos = layout.at(name).positions;
    for (size_t i = 0; i < pos.size(); ++i) {
      if ((v >> i) & 1) index |= uint64_t{1} << pos[i];
    }
  }
  return index;
}

inline uint64_t Unpack(const Layout& layout, const std::string& name,
                       uint64_t index) {
  uint64_t v = 0;
  const auto& pos = layout.at(name).positions;
  for (size_t i = 0; i < pos.size(); ++i) {
    v |= ((index >> pos[i]) & 1) << i;
  }
  return v;
}

inline SparseState RunSparse(const Circuit& c, uint64_t index,
                             uint64_t seed = 1,
                             MeasurementRecord* record = nullptr) {
  absl::StatusOr<SparseState> s = SparseState::Basis(c.width(), index);
  EXPECT_TRUE(s.ok()) << s.status();
  MeasurementRecord local;
  absl::Status st = ApplyCircuit(c, seed, &*s, record ? record : &local);
  EXPECT_TRUE(st.ok()) << st;
  return *std::move(s);
}

inline double Probability(const SparseState& s, uint64_t index) {
  return std::norm(s.Get(index));
}

}  // namespace testing
}  // namespace nnashor

#endif  // NNASHOR_TESTS_TEST_UTIL_H_
