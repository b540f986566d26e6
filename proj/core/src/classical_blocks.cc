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

// Ripple-carry blocks and the block-nested adder.
//
// The ripple is a majority/unmajority chain in which the carry lands on the
// middle wire of each (carry, b_i, a_i) triple, so every Toffoli has its
// target between its controls. After each step b_i and a_i trade places to
// put the carry next to b_{i+1}. A constant addend cannot be rippled in
// place with a single scratch bit, so each block carries t addend wires
// that the passing control bit loads and later clears.

#include <algorithm>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "absl/strings/str_cat.h"
#include "classical_internal.h"
#include "nnashor/check.h"
#include "nnashor/classical.h"

namespace nnashor {
namespace internal {

int LineBuilder::Add() {
  const int e = static_cast<int>(pos_.size());
  pos_.push_back(static_cast<int>(order_.size()));
  order_.push_back(e);
  return e;
}

std::vector<int> LineBuilder::AddRegister(int size) {
  std::vector<int> r;
  for (int i = 0; i < size; ++i) r.push_back(Add());
  return r;
}

std::vector<int> LineBuilder::Positions(
    const std::vector<int>& elements) const {
  std::vector<int> out;
  for (int e : elements) out.push_back(pos_[e]);
  return out;
}

void LineBuilder::Exchange(int p, int q) {
  std::swap(order_[p], order_[q]);
  pos_[order_[p]] = p;
  pos_[order_[q]] = q;
}

void LineBuilder::X(int e) { gates_.push_back(Gate::X(pos_[e])); }

void LineBuilder::CNot(int c, int t) {
  NNASHOR_CHECK(std::abs(pos_[c] - pos_[t]) == 1);
  gates_.push_back(Gate::CNot(pos_[c], pos_[t]));
}

void LineBuilder::Swap(int e, int f) {
  NNASHOR_CHECK(std::abs(pos_[e] - pos_[f]) == 1);
  gates_.push_back(Gate::Swap(pos_[e], pos_[f]));
  Exchange(pos_[e], pos_[f]);
}

void LineBuilder::CNotSwap(int c, int t) {
  NNASHOR_CHECK(std::abs(pos_[c] - pos_[t]) == 1);
  gates_.push_back(Gate::Fcxs(pos_[c], pos_[t]));
  Exchange(pos_[c], pos_[t]);
}

void LineBuilder::Emit(GateKind kind, int a, int b) {
  NNASHOR_CHECK(std::abs(pos_[a] - pos_[b]) == 1);
  gates_.push_back(Gate::Make(kind, pos_[a], pos_[b]));
  if (SwapsOperands(kind)) Exchange(pos_[a], pos_[b]);
}

void LineBuilder::Toffoli(int u, int v, int w) {
  NNASHOR_CHECK(std::abs(pos_[u] - pos_[v]) == 1 &&
                std::abs(pos_[v] - pos_[w]) == 1 && u != w);
  gates_.push_back(Gate::PtHalfA(pos_[v], pos_[u]));
  gates_.push_back(Gate::CNot(pos_[w], pos_[v]));
  gates_.push_back(Gate::PtHalfB(pos_[v], pos_[u]));
}

void LineBuilder::Arrange(int lo, const std::vector<int>& want) {
  const int size = static_cast<int>(want.size());
  std::vector<int> rank(pos_.size(), -1);
  for (int i = 0; i < size; ++i) rank[want[i]] = i;
  for (int i = 0; i < size; ++i) NNASHOR_CHECK(rank[order_[lo + i]] >= 0);
  for (int round = 0; round < size; ++round) {
    bool moved = false;
    for (int p = lo + round % 2; p + 1 < lo + size; p += 2) {
      if (rank[order_[p]] > rank[order_[p + 1]]) {
        gates_.push_back(Gate::Swap(p, p + 1));
        Exchange(p, p + 1);
        moved = true;
      }
    }
    if (!moved && round > 0) {
      bool sorted = true;
      for (int p = lo; p + 1 < lo + size; ++p) {
        sorted = sorted && rank[order_[p]] < rank[order_[p + 1]];
      }
      if (sorted) break;
    }
  }
}

Circuit LineBuilder::Take() const {
  Circuit c(width());
  for (const Gate& g : gates_) c.Add(g);
  c.set_classical(true);
  return c;
}

std::vector<int> Block::Line() const {
  std::vector<int> out = {s};
  for (size_t i = 0; i < b.size(); ++i) {
    out.push_back(b[i]);
    out.push_back(a[i]);
  }
  if (h >= 0) out.push_back(h);
  return out;
}

void ForwardRipple(LineBuilder* L, const Block& blk, int bits) {
  for (int i = 0; i < bits; ++i) {
    const int c = i == 0 ? blk.s : blk.b[i - 1];
    L->CNot(blk.b[i], c);
    L->CNot(blk.b[i], blk.a[i]);
    L->Toffoli(c, blk.b[i], blk.a[i]);
    L->Swap(blk.b[i], blk.a[i]);
  }
}

void BackwardRipple(LineBuilder* L, const Block& blk, int bits, bool sum) {
  for (int i = bits - 1; i >= 0; --i) {
    const int c = i == 0 ? blk.s : blk.b[i - 1];
    L->Swap(blk.a[i], blk.b[i]);
    L->Toffoli(c, blk.b[i], blk.a[i]);
    L->CNot(blk.b[i], blk.a[i]);
    L->CNot(blk.b[i], c);
    if (sum) {
      L->CNot(blk.a[i], blk.b[i]);
      L->CNot(c, blk.b[i]);
    }
  }
}

void RippleAdd(LineBuilder* L, const Block& blk, int bits) {
  ForwardRipple(L, blk, bits);
  BackwardRipple(L, blk, bits, /*sum=*/true);
}

void RippleCarry(LineBuilder* L, const Block& blk, int bits, bool negate) {
  ForwardRipple(L, blk, bits);
  L->CNot(blk.b[bits - 1], blk.h);
  if (negate) L->X(blk.h);
  BackwardRipple(L, blk, bits, /*sum=*/false);
}

void Traverse(LineBuilder* L, int ctrl, const std::vector<int>& elems,
              const Block& blk, uint64_t value, bool up) {
  auto step = [&](int e) {
    for (int i = 0; i < blk.size(); ++i) {
      if (blk.a[i] == e && ((value >> i) & 1)) {
        L->CNotSwap(ctrl, e);
        return;
      }
    }
    L->Swap(ctrl, e);
  };
  if (up) {
    for (auto it = elems.rbegin(); it != elems.rend(); ++it) step(*it);
  } else {
    for (int e : elems) step(e);
  }
}

void LoadConstant(LineBuilder* L, const Block& blk, uint64_t value, int bits) {
  for (int i = 0; i < bits; ++i) {
    if ((value >> i) & 1) L->X(blk.a[i]);
  }
}

namespace {

// Brings h (bottom of one block) next to s (top of the next) past the one
// element parked between them; returns that element or -1.
int Approach(LineBuilder* L, int h, int s) {
  if (L->pos(h) + 1 == L->pos(s)) return -1;
  const int g = L->at(L->pos(h) + 1);
  L->Swap(h, g);
  NNASHOR_CHECK(L->pos(h) + 1 == L->pos(s));
  return g;
}

void Retreat(LineBuilder* L, int h, int g) {
  if (g >= 0) L->Swap(g, h);
}

void ComplementAddend(LineBuilder* L, const Block& blk) {
  for (int a : blk.a) L->X(a);
}

}  // namespace

void NestedAdd(LineBuilder* L, const std::vector<Block>& blocks,
               const std::vector<bool>& linked,
               const std::vector<NestedControl>& controls, EraseMode erase) {
  const int N = static_cast<int>(controls.size());
  const int kb = static_cast<int>(blocks.size());
  for (int r = 0; r < N + kb; ++r) {
    auto active = [&](int j) {
      return j >= 0 && j < kb && r - j >= 0 && r - j < N;
    };
    // h_j is predicted only where the next block listens for it.
    auto predicts = [&](int j) {
      return active(j) && blocks[j].h >= 0 && j + 1 < kb && linked[j + 1];
    };
    auto carry_in = [&](int j) {
      return j >= 1 && linked[j] && predicts(j - 1);
    };

    // Each control leaves the block it served and loads the next one.
    for (int j = kb; j >= 0; --j) {
      const int i = r - j;
      if (i < 0 || i >= N) continue;
      const NestedControl& c = controls[i];
      if (j >= 1)
        Traverse(L, c.e, blocks[j - 1].Line(), blocks[j - 1], 0, false);
      if (j < kb)
        Traverse(L, c.e, blocks[j].Line(), blocks[j], c.slices[j], false);
    }
    for (int j = 0; j < kb; ++j) {
      if (predicts(j)) RippleCarry(L, blocks[j], blocks[j].size(), false);
    }
    for (int j = 0; j < kb; ++j) {
      const bool cin = carry_in(j);
      if (!active(j) && !cin) continue;
      int g = -1;
      if (cin) {
        g = Approach(L, blocks[j - 1].h, blocks[j].s);
        L->CNot(blocks[j - 1].h, blocks[j].s);
      }
      RippleAdd(L, blocks[j], blocks[j].size());
      if (cin) {
        L->CNot(blocks[j - 1].h, blocks[j].s);
        Retreat(L, blocks[j - 1].h, g);
      }
    }
    // Erase h_j by comparing the new Z_j with what was added. With the
    // carry-in included, h_{j-1} must still be intact, so go top down.
    for (int jj = 0; jj < kb; ++jj) {
      const int j = erase == EraseMode::kAddend ? jj : kb - 1 - jj;
      if (!predicts(j)) continue;
      const Block& blk = blocks[j];
      const bool cin = erase == EraseMode::kAddendPlusCarry && carry_in(j);
      int g = -1;
      if (cin) {
        g = Approach(L, blocks[j - 1].h, blk.s);
        L->CNot(blocks[j - 1].h, blk.s);
      }
      ComplementAddend(L, blk);
      L->X(blk.s);
      RippleCarry(L, blk, blk.size(), /*negate=*/true);
      L->X(blk.s);
      ComplementAddend(L, blk);
      if (cin) {
        L->CNot(blocks[j - 1].h, blk.s);
        Retreat(L, blocks[j - 1].h, g);
      }
    }
    for (int j = 0; j < kb; ++j) {
      if (!active(j)) continue;
      const NestedControl& c = controls[r - j];
      Traverse(L, c.e, blocks[j].Line(), blocks[j], c.slices[j], true);
    }
  }
}

}  // namespace internal

namespace {

uint64_t Mask(int bits) {
  return bits >= 64 ? ~uint64_t{0} : (uint64_t{1} << bits) - 1;
}

uint64_t Slice(const BigInt& x, int lo, int bits) {
  return static_cast<uint64_t>((x >> lo) & BigInt(Mask(bits)));
}

}  // namespace

absl::StatusOr<BlockParams> MakeBlockParams(int n, int t,
                                            std::vector<BigInt> xs) {
  if (n < 1) return absl::InvalidArgumentError("n must be positive");
  if (t < 1 || t > 62) {
    return absl::InvalidArgumentError("block size must be in [1, 62]");
  }
  BlockParams p;
  p.n = n;
  p.t = std::min(t, n);
  p.k = (n + p.t - 1) / p.t;
  for (const BigInt& x : xs) {
    if (x < 0 || x >= (BigInt(1) << n)) {
      return absl::InvalidArgumentError(
          absl::StrCat("addend ", x.str(), " does not fit in ", n, " bits"));
    }
    std::vector<uint64_t> s;
    for (int j = 0; j < p.k; ++j)
      s.push_back(Slice(x, j * p.t, p.block_size(j)));
    p.slices.push_back(std::move(s));
  }
  p.xs = std::move(xs);
  return p;
}

BigInt RoundAddend(const BlockParams& p, int r, const BigInt& y) {
  BigInt sum = 0;
  for (int j = 0; j < p.k; ++j) {
    const int i = r - j;
    if (i < 0 || i >= p.num_controls() || !bit_test(y, i)) continue;
    sum += BigInt(p.slices[i][j]) << (p.t * j);
  }
  return sum;
}

NestedAddOutcome ModelNestedAdd(const BlockParams& p, const BigInt& y,
                                const BigInt& z, EraseMode erase) {
  const int N = p.num_controls();
  const int k = p.k;
  std::vector<uint64_t> Z(k), h(k, 0);
  for (int j = 0; j < k; ++j) Z[j] = Slice(z, j * p.t, p.block_size(j));
  NestedAddOutcome out;
  for (int r = 0; r < N + k - 1; ++r) {
    auto active = [&](int j) {
      return j >= 0 && j < k && r - j >= 0 && r - j < N;
    };
    auto predicts = [&](int j) { return active(j) && j + 1 < k; };
    std::vector<uint64_t> A(k, 0), cin(k, 0);
    for (int j = 0; j < k; ++j) {
      if (active(j) && bit_test(y, r - j)) A[j] = p.slices[r - j][j];
    }
    for (int j = 0; j < k; ++j) {
      if (predicts(j)) h[j] ^= (Z[j] + A[j]) >> p.block_size(j);
    }
    for (int j = 0; j < k; ++j) {
      const bool has_cin = j >= 1 && predicts(j - 1);
      if (!active(j) && !has_cin) continue;
      cin[j] = has_cin ? h[j - 1] : 0;
      const int bits = p.block_size(j);
      const uint64_t total = Z[j] + A[j] + cin[j];
      Z[j] = total & Mask(bits);
      if (j + 1 < k) {
        const uint64_t used = predicts(j) ? h[j] : 0;
        if (used != (total >> bits)) ++out.prediction_failures;
      }
    }
    for (int j = 0; j < k; ++j) {
      if (!predicts(j)) continue;
      const uint64_t by_addend = Z[j] < A[j];
      const uint64_t by_both = Z[j] < A[j] + cin[j];
      if (by_addend != by_both) ++out.erase_mode_disagreements;
      h[j] ^= erase == EraseMode::kAddend ? by_addend : by_both;
      if (h[j] != 0) ++out.dirty_erasures;
    }
  }
  out.z = 0;
  for (int j = 0; j < k; ++j) out.z += BigInt(Z[j]) << (p.t * j);
  out.exact = out.prediction_failures == 0 && out.dirty_erasures == 0;
  return out;
}

RippleWires DefaultRippleWires(int t, bool control, bool carry_in,
                               bool carry_out) {
  RippleWires w;
  int next = 0;
  if (control) w.control = next++;
  if (carry_in) w.carry_in = next++;
  w.scratch = next++;
  for (int i = 0; i < t; ++i) {
    w.block.push_back(next++);
    w.addend.push_back(next++);
  }
  if (carry_out) w.carry_out = next++;
  return w;
}

namespace {

std::vector<int> RippleOrder(const RippleWires& w) {
  std::vector<int> order;
  if (w.control) order.push_back(*w.control);
  if (w.carry_in) order.push_back(*w.carry_in);
  order.push_back(w.scratch);
  for (size_t i = 0; i < w.block.size() && i < w.addend.size(); ++i) {
    order.push_back(w.block[i]);
    order.push_back(w.addend[i]);
  }
  if (w.carry_out) order.push_back(*w.carry_out);
  return order;
}

}  // namespace

int RippleWidth(const RippleWires& w) {
  const std::vector<int> order = RippleOrder(w);
  return *std::max_element(order.begin(), order.end()) + 1;
}

absl::StatusOr<Circuit> BuildRippleAddConst(const RippleWires& w,
                                            uint64_t constant, int width) {
  const int t = static_cast<int>(w.block.size());
  if (t < 1 || t > 62 || w.addend.size() != w.block.size()) {
    return absl::InvalidArgumentError(
        "need 1..62 block wires and as many addend wires");
  }
  if (constant > Mask(t)) {
    return absl::InvalidArgumentError("constant does not fit in the block");
  }
  const std::vector<int> order = RippleOrder(w);
  const int dir = order.size() > 1 && order[1] < order[0] ? -1 : 1;
  for (size_t i = 0; i < order.size(); ++i) {
    if (order[i] != order[0] + dir * static_cast<int>(i)) {
      return absl::InvalidArgumentError(absl::StrCat(
          "ripple wires are not adjacent in line order at wire ", order[i]));
    }
  }
  for (int wire : order) {
    if (wire < 0 || wire >= width) {
      return absl::InvalidArgumentError(
          absl::StrCat("wire ", wire, " outside width ", width));
    }
  }

  internal::LineBuilder L;
  const int y = w.control ? L.Add() : -1;
  const int cin = w.carry_in ? L.Add() : -1;
  internal::Block blk;
  blk.s = L.Add();
  for (int i = 0; i < t; ++i) {
    blk.b.push_back(L.Add());
    blk.a.push_back(L.Add());
  }
  blk.h = w.carry_out ? L.Add() : -1;
  std::vector<int> passed = blk.Line();
  if (cin >= 0) passed.insert(passed.begin(), cin);

  if (y >= 0) {
    internal::Traverse(&L, y, passed, blk, constant, false);
  } else {
    internal::LoadConstant(&L, blk, constant, t);
  }
  if (cin >= 0) L.CNot(cin, blk.s);
  internal::ForwardRipple(&L, blk, t);
  if (blk.h >= 0) L.CNot(blk.b[t - 1], blk.h);
  internal::BackwardRipple(&L, blk, t, /*sum=*/true);
  if (cin >= 0) L.CNot(cin, blk.s);
  if (y >= 0) {
    internal::Traverse(&L, y, passed, blk, constant, true);
  } else {
    internal::LoadConstant(&L, blk, constant, t);
  }

  const Circuit local = L.Take();
  Circuit c(width);
  for (Gate g : local.gates()) {
    g.a = order[0] + dir * g.a;
    if (g.b >= 0) g.b = order[0] + dir * g.b;
    c.Add(g);
  }
  c.set_classical(true);
  Layout layout = {{"Z", MakeLayout(w.block)}};
  if (w.control) layout["y"] = MakeLayout({*w.control});
  if (w.carry_in) layout["cin"] = MakeLayout({*w.carry_in});
  if (w.carry_out) layout["cout"] = MakeLayout({*w.carry_out});
  NNASHOR_RETURN_IF_ERROR(c.SetLayoutIn(layout));
  NNASHOR_RETURN_IF_ERROR(c.SetLayoutOut(layout));
  return c;
}

absl::StatusOr<Circuit> BuildBlockNestedAdder(const BlockParams& p,
                                              const NestedAdderOptions& o) {
  if (p.num_controls() < 1) {
    return absl::InvalidArgumentError("need at least one addend");
  }
  internal::LineBuilder L;
  const int N = p.num_controls();
  std::vector<int> Y(N);
  for (int i = N - 1; i >= 0; --i) Y[i] = L.Add();
  std::vector<internal::Block> blocks(p.k);
  std::vector<bool> linked(p.k);
  std::vector<int> Z;
  for (int j = 0; j < p.k; ++j) {
    internal::Block& b = blocks[j];
    b.s = L.Add();
    for (int i = 0; i < p.block_size(j); ++i) {
      b.b.push_back(L.Add());
      b.a.push_back(L.Add());
    }
    if (j + 1 < p.k) b.h = L.Add();
    linked[j] = j > 0;
    Z.insert(Z.end(), b.b.begin(), b.b.end());
  }
  std::vector<internal::NestedControl> controls;
  for (int i = 0; i < N; ++i) controls.push_back({Y[i], p.slices[i]});
  const Layout in = {{"Y", MakeLayout(L.Positions(Y))},
                     {"Z", MakeLayout(L.Positions(Z))}};
  internal::NestedAdd(&L, blocks, linked, controls, o.erase);
  Circuit c = L.Take();
  NNASHOR_RETURN_IF_ERROR(c.SetLayoutIn(in));
  NNASHOR_RETURN_IF_ERROR(c.SetLayoutOut(
      {{"Y", MakeLayout(L.Positions(Y))}, {"Z", MakeLayout(L.Positions(Z))}}));
  return c;
}

}  // namespace nnashor
