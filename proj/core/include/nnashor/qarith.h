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

// Quantum arithmetic builders: nested controlled adders, the quotient
// estimator, modular multipliers and modular exponentiation.

#ifndef NNASHOR_QARITH_H_
#define NNASHOR_QARITH_H_

#include <optional>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "nnashor/circuit.h"
#include "nnashor/params.h"

namespace nnashor {

// Adds sum_i y_i x_i into Z modulo 2^n. Registers "Y" (controls) above "Z",
// both n bits, Z stored most significant bit first. With constant_z the Z
// input must be zero and `z` is loaded as a constant; otherwise Z may hold
// any value and `z` is ignored. Depth 6n-4, or 4n-1 with constant_z.
absl::StatusOr<Circuit> BuildNestedControlledAdder(const XTable& xs,
                                                   bool constant_z,
                                                   const BigInt& z = 0);

struct QuotientEstimator {
  // "Y" above "Q". On exit Q's low l0 elements ("R") hold a Fourier-form
  // remainder and the top K elements ("S") hold 1 - qhat_{k-1} at bit k-1.
  Circuit circuit;
  // Sum over k of the depth of loop step k (subtract, peel, restore) run on
  // its own.
  int loop_depth = 0;
  // Depth of the whole loop as one schedule; steps overlap, so this is
  // smaller.
  int overlapped_loop_depth = 0;
};
absl::StatusOr<QuotientEstimator> BuildQuotientEstimator(
    const MultiplierParams& p);

// "Y" (controls), "Q", "Z" (zero on entry). On exit Z holds
// (sum_i y_i x_i - qhat m) mod 2^n, which is the residue when the quotient
// estimate is exact, and Q is zero again.
absl::StatusOr<Circuit> BuildModularRepeatedAdder(const MultiplierParams& p);

// Controlled in-place modular multiplier. Registers "QY", "B", "Y", "c",
// "QZ", "Z"; B holds b < m and the rest are zero. On exit B holds a*b mod m
// when c = 1 and b otherwise. Dispatches on p.variant.
absl::StatusOr<Circuit> BuildControlledModMul(const MultiplierParams& p);
absl::StatusOr<Circuit> BuildGeneralModMul(const MultiplierParams& p);

enum class ControlMode { kRecycled, kPreallocated };

struct ExponentiationParams {
  int n = 0;
  BigInt g;
  BigInt m;
  MultiplierOptions mult;  // Window, headroom, z, variant, exact mode, seed.
  bool fixed_z = false;    // Same z for every round.
  ControlMode control_mode = ControlMode::kRecycled;
  // Known exponent: control i is prepared as |e_i> and rounds run in
  // increasing power. Without one, controls are prepared with H, rounds run
  // in decreasing power and each control is measured through a
  // semiclassical inverse QFT; bit "e<j>" then estimates phase bit j+1.
  std::optional<BigInt> exponent;
  // Number of rounds to build; defaults to 2n.
  std::optional<int> rounds;
};

struct RoundInfo {
  int index = 0;
  int power = 0;  // Multiplies by g^(2^power).
  BigInt a;       // Multiplier constant of this round.
  bool mirrored = false;
  std::string measured_bit;  // Classical bit holding this round's control.
  int predicted_depth = 0;
  int depth_end = 0;  // Depth of the circuit up to and including the round.
};

struct Exponentiation {
  // Starts from all zeros and loads W = 1 itself. Register "W" of the output
  // layout holds g^e mod m; classical bits "e<j>" hold the controls.
  Circuit circuit;
  std::vector<RoundInfo> rounds;
  int n = 0;
  int l = 0;
};

absl::StatusOr<Exponentiation> BuildExponentiation(
    const ExponentiationParams& p);

// JSON manifest: per round constant, orientation, measured bit and depths.
std::string RoundManifestJson(const Exponentiation& e);

}  // namespace nnashor

#endif  // NNASHOR_QARITH_H_
