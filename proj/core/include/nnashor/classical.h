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

// Reversible classical arithmetic on a line: ripple-carry blocks, the
// block-nested controlled adder with carry prediction, and the multiplier
// and exponentiator built from them. Every circuit here is a permutation of
// basis states up to phases that cancel in pairs.

#ifndef NNASHOR_CLASSICAL_H_
#define NNASHOR_CLASSICAL_H_

#include <cstdint>
#include <optional>
#include <vector>

#include "absl/status/statusor.h"
#include "nnashor/circuit.h"
#include "nnashor/params.h"
#include "nnashor/qarith.h"

namespace nnashor {

// Addends x_0..x_{N-1} < 2^n cut into k = ceil(n/t) blocks of t bits; the
// top block holds the remaining n - (k-1)t bits.
struct BlockParams {
  int n = 0;
  int t = 0;
  int k = 0;
  std::vector<BigInt> xs;
  std::vector<std::vector<uint64_t>> slices;  // slices[i][j] = X_i^j.

  int num_controls() const { return static_cast<int>(xs.size()); }
  int block_size(int j) const { return j + 1 < k ? t : n - (k - 1) * t; }
  // Rounds run r = 0 .. N + k - 2.
  int num_rounds() const { return num_controls() + k - 1; }
};

absl::StatusOr<BlockParams> MakeBlockParams(int n, int t,
                                            std::vector<BigInt> xs);

// A_r = sum_j y_{r-j} X^j_{r-j} 2^(tj), the number added in round r.
BigInt RoundAddend(const BlockParams& p, int r, const BigInt& y);

// How the high bit h_j is erased after block j has been added to.
enum class EraseMode {
  kAddend,           // h_j ^= [Z_j < addend].
  kAddendPlusCarry,  // h_j ^= [Z_j < addend + carry-in]; erases in order.
};

// Integer model of the nested adder, bit-exact with BuildBlockNestedAdder.
struct NestedAddOutcome {
  BigInt z;                     // Final Z.
  bool exact = true;            // Every prediction right, every h erased.
  int prediction_failures = 0;  // Block steps whose carry-out was mispredicted.
  int dirty_erasures = 0;       // Block steps that left h_j set.
  int erase_mode_disagreements = 0;  // Steps where the two erase rules differ.
};
NestedAddOutcome ModelNestedAdd(const BlockParams& p, const BigInt& y,
                                const BigInt& z, EraseMode erase);

// Wires of one ripple adder. In line order, either direction: [control],
// [carry_in], scratch, block[0], addend[0], ..., block[t-1], addend[t-1],
// [carry_out]. The addend wires and the scratch start and end at zero.
struct RippleWires {
  std::optional<int> control;
  std::optional<int> carry_in;
  int scratch = -1;
  std::vector<int> block;
  std::vector<int> addend;
  std::optional<int> carry_out;
};

// The wires above on 0, 1, 2, ... .
RippleWires DefaultRippleWires(int t, bool control, bool carry_in,
                               bool carry_out);
int RippleWidth(const RippleWires& w);

// block += constant (times the control bit) + carry_in, modulo 2^t;
// carry_out ^= the carry out of the top bit. Layouts "Z", and "y", "cin",
// "cout" when present.
absl::StatusOr<Circuit> BuildRippleAddConst(const RippleWires& w,
                                            uint64_t constant, int width);

struct NestedAdderOptions {
  EraseMode erase = EraseMode::kAddend;
};

// Z += sum_i y_i x_i (mod 2^n) on a line, exact whenever the model reports
// no failure. Layouts "Y" and "Z" in and out; Y ends below Z.
absl::StatusOr<Circuit> BuildBlockNestedAdder(const BlockParams& p,
                                              const NestedAdderOptions& o = {});

struct ClassicalOptions {
  int block = 0;  // Block size; 0 picks ceil(log2 n).
  EraseMode erase = EraseMode::kAddend;
};

int DefaultBlockSize(int n);

// Classical counterpart of BuildControlledModMul: if c, B = a B mod m, with
// the quotient estimated from the top l0 bits the same way. Layouts "B" and
// "c", identical in and out.
absl::StatusOr<Circuit> BuildClassicalModMul(const MultiplierParams& p,
                                             const ClassicalOptions& o = {});

// Chain of classical multiplier rounds for a known exponent. The circuit
// starts from zeros, loads W = 1 and leaves g^e mod m on layout "W". Each
// round's control is set and cleared with X gates.
absl::StatusOr<Exponentiation> BuildClassicalExponentiation(
    const ExponentiationParams& p, const ClassicalOptions& o = {});

}  // namespace nnashor

#endif  // NNASHOR_CLASSICAL_H_
