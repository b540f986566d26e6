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

#ifndef NNASHOR_SRC_CLASSICAL_INTERNAL_H_
#define NNASHOR_SRC_CLASSICAL_INTERNAL_H_

#include <cstdint>
#include <vector>

#include "nnashor/circuit.h"
#include "nnashor/classical.h"

namespace nnashor {
namespace internal {

// Tracks which element sits on which wire of a line and emits gates by
// element. Every two-wire gate must act on neighbors.
class LineBuilder {
 public:
  LineBuilder() = default;

  // Appends a new element at the bottom of the line.
  int Add();
  std::vector<int> AddRegister(int size);

  int pos(int e) const { return pos_[e]; }
  int at(int p) const { return order_[p]; }
  int width() const { return static_cast<int>(order_.size()); }
  const std::vector<int>& order() const { return order_; }
  std::vector<int> Positions(const std::vector<int>& elements) const;

  void X(int e);
  void CNot(int c, int t);
  void Swap(int e, int f);
  // CNOT c->t, then the two trade places.
  void CNotSwap(int c, int t);
  // Any two-wire kind on neighbors a, b (operand order as in Gate::Make).
  void Emit(GateKind kind, int a, int b);
  // v ^= u w as a pseudo-Toffoli; u, v, w must be a contiguous run.
  void Toffoli(int u, int v, int w);
  // Rearranges the elements of the contiguous run [lo, lo + size) into
  // `want` by odd-even transposition: at most `size` layers of swaps.
  void Arrange(int lo, const std::vector<int>& want);

  size_t num_gates() const { return gates_.size(); }
  // The gates so far on a circuit as wide as the line.
  Circuit Take() const;

 private:
  void Exchange(int p, int q);

  std::vector<int> order_;
  std::vector<int> pos_;
  std::vector<Gate> gates_;
};

// One ripple block on the line: s, b0, a0, b1, a1, ..., then h if present.
// b holds the target bits, least significant first; a is the addend
// scratch; s is the carry scratch; h receives the predicted carry.
struct Block {
  int s = -1;
  std::vector<int> b;
  std::vector<int> a;
  int h = -1;
  // Elements in line order, h included.
  std::vector<int> Line() const;
  int size() const { return static_cast<int>(b.size()); }
};

// Carry of b + a + s out of the first `bits` positions.
void ForwardRipple(LineBuilder* L, const Block& blk, int bits);
// Undoes ForwardRipple; with `sum`, b ends holding b + a + s.
void BackwardRipple(LineBuilder* L, const Block& blk, int bits, bool sum);

// In place b += a + s on the first `bits` positions, modulo 2^bits.
void RippleAdd(LineBuilder* L, const Block& blk, int bits);
// h ^= carry(b + a + s) (negated if `negate`); b unchanged.
void RippleCarry(LineBuilder* L, const Block& blk, int bits, bool negate);

// Moves `ctrl` from just above the run `elems` to just below it, or back
// when `up`. Passing a_i with bit i of `value` set applies CNOT ctrl->a_i.
void Traverse(LineBuilder* L, int ctrl, const std::vector<int>& elems,
              const Block& blk, uint64_t value, bool up);

// Uncontrolled load of a constant into the addend scratch.
void LoadConstant(LineBuilder* L, const Block& blk, uint64_t value, int bits);

// Control bit with its per-block constants, slices[j] for target block j.
struct NestedControl {
  int e = -1;
  std::vector<uint64_t> slices;
};

// Block-nested controlled addition. The controls sit stacked directly above
// blocks[0], controls[0] lowest, and leave stacked directly below the last
// block in the same order. `linked[j]` says whether blocks[j] takes its
// carry from blocks[j-1].h. Returns nothing; gates go to L.
void NestedAdd(LineBuilder* L, const std::vector<Block>& blocks,
               const std::vector<bool>& linked,
               const std::vector<NestedControl>& controls, EraseMode erase);

}  // namespace internal
}  // namespace nnashor

#endif  // NNASHOR_SRC_CLASSICAL_INTERNAL_H_
