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

#ifndef NNASHOR_REVERSIBLE_H_
#define NNASHOR_REVERSIBLE_H_

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "nnashor/circuit.h"

namespace nnashor {

// One bit per wire; wire 0 first.
using BitString = std::vector<uint8_t>;

struct ReversibleResult {
  BitString bits;
  std::map<std::string, int> measured;
};

// Runs a circuit made only of classical kinds. A pseudo-Toffoli half opens a
// window on its target; CNOTs into the target inside the window accumulate,
// and the closing half applies them iff the half's control was 1, i.e. the
// pair acts as an exact Toffoli. The -1 phase it carries is not tracked.
absl::StatusOr<ReversibleResult> SimulateReversible(const Circuit& c,
                                                    BitString input);

// Bits [positions] of `bits` read as an integer, positions LSB first.
uint64_t ReadRegister(const BitString& bits, const std::vector<int>& positions);
void WriteRegister(BitString* bits, const std::vector<int>& positions,
                   uint64_t value);

}  // namespace nnashor

#endif  // NNASHOR_REVERSIBLE_H_
