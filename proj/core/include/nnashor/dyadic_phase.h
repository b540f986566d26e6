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

#ifndef NNASHOR_DYADIC_PHASE_H_
#define NNASHOR_DYADIC_PHASE_H_

#include <cstdint>
#include <string>

#include "absl/status/statusor.h"
#include "boost/multiprecision/cpp_int.hpp"

namespace nnashor {

using BigInt = boost::multiprecision::cpp_int;

// A rotation angle 2*pi*num/2^exp, kept exact. After normalization
// 0 <= num < 2^exp, num is odd unless the phase is zero, and exp <= 64.
class DyadicPhase {
 public:
  static constexpr int kMaxExp = 64;

  DyadicPhase() = default;

  // Reduces num modulo 2^exp and normalizes. Requires 0 <= exp <= 64.
  static DyadicPhase Make(__int128 num, int exp);

  // num/2^exp for arbitrary exp. Angles finer than 2^-64 of a turn are
  // rounded to the nearest multiple of 2^-64.
  static DyadicPhase FromBig(const BigInt& num, int exp);

  // Parses "num/den" where den is a power of two written in decimal, or
  // "num/2^exp".
  static absl::StatusOr<DyadicPhase> Parse(const std::string& text);

  uint64_t num() const { return num_; }
  int exp() const { return exp_; }
  bool IsZero() const { return num_ == 0; }

  // Angle as a fraction of a full turn, in [0, 1).
  double Turns() const;

  DyadicPhase operator+(const DyadicPhase& other) const;
  DyadicPhase operator-() const;
  DyadicPhase operator-(const DyadicPhase& other) const {
    return *this + (-other);
  }
  bool operator==(const DyadicPhase& other) const {
    return num_ == other.num_ && exp_ == other.exp_;
  }
  bool operator!=(const DyadicPhase& other) const { return !(*this == other); }

  // "num/2^exp" with the denominator printed in decimal.
  std::string ToString() const;

 private:
  DyadicPhase(uint64_t num, int exp) : num_(num), exp_(exp) {}

  uint64_t num_ = 0;
  int exp_ = 0;
};

}  // namespace nnashor

#endif  // NNASHOR_DYADIC_PHASE_H_
