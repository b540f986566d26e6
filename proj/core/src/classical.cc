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

// Classical modular multiplier and exponentiator.
//
// The modular adder mirrors the quantum one. The controls cross a quotient
// block Q (accumulating z_top + sum y_i x_top_i) and then the target blocks
// in one nested addition. Q runs the same restoring division as the quantum
// loop; the quotient bits then cross the target blocks subtracting
// 2^k m each. Q moves back below the targets, the division is undone, and
// the controls return up through Q to clear it. The multiplier erases Y
// with the same adder for a^-1 run in subtract mode, which computes the
// same quotient as the quantum inverse.

#include "nnashor/classical.h"

#include <algorithm>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "absl/status/status.h"
#include "classical_internal.h"
#include "nnashor/check.h"
#include "qarith_internal.h"

namespace nnashor {
namespace {

using internal::Block;
using internal::LineBuilder;
using internal::NestedControl;

// x mod 2^bits, for any sign of x.
BigInt Wrap(const BigInt& x, int bits) {
  const BigInt mod = BigInt(1) << bits;
  BigInt r = x % mod;
  if (r < 0) r += mod;
  return r;
}

uint64_t Wrap64(const BigInt& x, int bits) {
  return static_cast<uint64_t>(Wrap(x, bits));
}

// Elements of the multiplier line. The two adders share the scratch of the
// target blocks; only the b wires differ.
struct Wires {
  int c = -1;
  std::vector<int> B, Y, Z;
  Block q;
  std::vector<Block> zblocks, yblocks;
  std::vector<int> initial;  // Line order at the start and end of a round.
};

Wires MakeWires(LineBuilder* L, int n, int l, const BlockParams& bp) {
  Wires w;
  w.c = L->Add();
  for (int i = 0; i < n; ++i) {
    w.B.push_back(L->Add());
    w.Y.push_back(L->Add());
  }
  w.q.s = L->Add();
  for (int i = 0; i < l; ++i) {
    w.q.b.push_back(L->Add());
    w.q.a.push_back(L->Add());
  }
  for (int j = 0; j < bp.k; ++j) {
    Block z;
    z.s = L->Add();
    for (int i = 0; i < bp.block_size(j); ++i) {
      const int e = L->Add();
      z.b.push_back(e);
      w.Z.push_back(e);
      z.a.push_back(L->Add());
    }
    if (j + 1 < bp.k) z.h = L->Add();
    w.zblocks.push_back(z);
  }
  w.yblocks = w.zblocks;
  int i = 0;
  for (Block& y : w.yblocks) {
    for (int& e : y.b) e = w.Y[i++];
  }
  w.initial = L->order();
  return w;
}

std::vector<int> Concat(const std::vector<Block>& blocks) {
  std::vector<int> out;
  for (const Block& b : blocks) {
    std::vector<int> line = b.Line();
    out.insert(out.end(), line.begin(), line.end());
  }
  return out;
}

// The first 1 + 2 bits wires of q: s and the (b, a) pairs below it.
std::vector<int> Prefix(const Block& q, int bits) {
  std::vector<int> line = q.Line();
  return std::vector<int>(line.begin(), line.begin() + 1 + 2 * bits);
}

void AddConstant(LineBuilder* L, const Block& q, uint64_t value, int bits) {
  internal::LoadConstant(L, q, value, bits);
  internal::RippleAdd(L, q, bits);
  internal::LoadConstant(L, q, value, bits);
}

// Q[0, bits) += value (times the bit sitting just below Q[bits - 1]).
void ControlledAdd(LineBuilder* L, const Block& q, int ctrl, uint64_t value,
                   int bits) {
  const std::vector<int> run = Prefix(q, bits);
  internal::Traverse(L, ctrl, run, q, value, /*up=*/true);
  internal::RippleAdd(L, q, bits);
  internal::Traverse(L, ctrl, run, q, value, /*up=*/false);
}

// Step k of the division on the low L = l0 + k bits of Q: subtract
// 2^(k-1) m_top, keep the sign, add back on L - 1 bits if negative.
void DivisionStep(LineBuilder* L, const Block& q, int bits, const BigInt& sub,
                  bool inverse) {
  const int sign = q.b[bits - 1];
  if (!inverse) {
    AddConstant(L, q, Wrap64(-sub, bits), bits);
    ControlledAdd(L, q, sign, Wrap64(sub, bits - 1), bits - 1);
  } else {
    ControlledAdd(L, q, sign, Wrap64(-sub, bits - 1), bits - 1);
    AddConstant(L, q, Wrap64(sub, bits), bits);
  }
}

// T += sum_i C_i x_i - qhat m (mod 2^n), or minus that when `subtract`.
// Before: controls stacked directly above q (C[0] lowest), q directly above
// T. After: T on top, then the controls in the same order, then q.
void ModAdd(LineBuilder* L, const std::vector<int>& C, const Block& q,
            const std::vector<Block>& T, const internal::AdderConstants& k,
            int t, bool subtract, EraseMode erase) {
  const int n = k.n;
  const int l = k.l0 + k.K;
  std::vector<BigInt> xs;
  for (const BigInt& x : k.x) xs.push_back(Wrap(subtract ? -x : x, n));
  std::vector<BigInt> ms;
  for (int i = 0; i < k.K; ++i) {
    const BigInt v = k.m << i;
    ms.push_back(Wrap(subtract ? v : -v, n));
  }
  absl::StatusOr<BlockParams> xp = MakeBlockParams(n, t, xs);
  NNASHOR_CHECK(xp.ok());

  const uint64_t z_top = static_cast<uint64_t>(k.z_top);
  for (int i = 0; i < l; ++i) {
    if ((z_top >> i) & 1) L->X(q.b[i]);
  }

  std::vector<Block> blocks = {q};
  blocks.insert(blocks.end(), T.begin(), T.end());
  std::vector<bool> linked(blocks.size(), true);
  linked[0] = linked[1] = false;
  std::vector<NestedControl> controls;
  for (size_t i = 0; i < C.size(); ++i) {
    NestedControl nc{C[i], {static_cast<uint64_t>(k.x_top[i])}};
    nc.slices.insert(nc.slices.end(), xp->slices[i].begin(),
                     xp->slices[i].end());
    controls.push_back(nc);
  }
  internal::NestedAdd(L, blocks, linked, controls, erase);

  for (int kk = k.K; kk >= 1; --kk) {
    DivisionStep(L, q, k.l0 + kk, k.m_top << (kk - 1), /*inverse=*/false);
  }
  // The signs become the quotient bits, stacked at the bottom of q with
  // qhat_0 lowest.
  std::vector<int> qhat(q.b.begin() + k.l0, q.b.end());
  for (int e : qhat) L->X(e);
  std::vector<int> rest = {q.s};
  for (int i = 0; i < l; ++i) {
    if (i < k.l0) rest.push_back(q.b[i]);
    rest.push_back(q.a[i]);
  }
  std::vector<int> want = rest;
  want.insert(want.end(), qhat.rbegin(), qhat.rend());
  L->Arrange(L->pos(q.s), want);

  if (k.K > 0) {
    absl::StatusOr<BlockParams> mp = MakeBlockParams(n, t, ms);
    NNASHOR_CHECK(mp.ok());
    std::vector<bool> tlinked(T.size(), true);
    tlinked[0] = false;
    std::vector<NestedControl> qc;
    for (int i = 0; i < k.K; ++i) qc.push_back({qhat[i], mp->slices[i]});
    internal::NestedAdd(L, T, tlinked, qc, erase);
  }

  // q back together below T.
  const int lo = L->pos(rest[0]);
  want = Concat(T);
  const std::vector<int> qline = q.Line();
  want.insert(want.end(), qline.begin(), qline.end());
  L->Arrange(lo, want);
  for (int e : qhat) L->X(e);

  for (int kk = 1; kk <= k.K; ++kk) {
    DivisionStep(L, q, k.l0 + kk, k.m_top << (kk - 1), /*inverse=*/true);
  }
  // Each control climbs back through q taking its x_top out.
  for (int i = static_cast<int>(C.size()) - 1; i >= 0; --i) {
    const uint64_t v = Wrap64(-k.x_top[i], l);
    internal::Traverse(L, C[i], qline, q, v, /*up=*/true);
    internal::RippleAdd(L, q, l);
    internal::Traverse(L, C[i], qline, q, v, /*up=*/false);
    internal::Traverse(L, C[i], qline, q, 0, /*up=*/true);
  }
  for (int i = 0; i < l; ++i) {
    if ((z_top >> i) & 1) L->X(q.b[i]);
  }
}

// One controlled multiplication; the line ends in the order it started.
absl::Status ModMulBody(LineBuilder* L, const Wires& w,
                        const MultiplierParams& p, int t, EraseMode erase) {
  absl::StatusOr<BigInt> a_inv = ModInverse(p.a, p.m);
  if (!a_inv.ok()) return a_inv.status();
  const int n = p.n;

  // If c, move B into Y.
  for (int i = 0; i < n; ++i) L->Emit(GateKind::kPtHalfA, w.Y[i], w.B[i]);
  for (int i = 0; i < n; ++i) {
    L->Swap(w.c, w.B[i]);
    L->CNotSwap(w.c, w.Y[i]);
    L->Emit(GateKind::kPtHalfBCNot, w.Y[i], w.B[i]);
  }
  std::vector<int> want = w.B;
  want.push_back(w.c);
  want.insert(want.end(), w.Y.rbegin(), w.Y.rend());
  L->Arrange(0, want);

  ModAdd(L, w.Y, w.q, w.zblocks, internal::MakeAdderConstants(p, p.a), t,
         /*subtract=*/false, erase);

  want = std::vector<int>(w.Z.rbegin(), w.Z.rend());
  const std::vector<int> qline = w.q.Line();
  want.insert(want.end(), qline.begin(), qline.end());
  const std::vector<int> yline = Concat(w.yblocks);
  want.insert(want.end(), yline.begin(), yline.end());
  L->Arrange(L->pos(w.zblocks[0].s), want);

  ModAdd(L, w.Z, w.q, w.yblocks, internal::MakeAdderConstants(p, *a_inv), t,
         /*subtract=*/true, erase);

  // If c, move Z into B.
  want = {w.c};
  for (int i = 0; i < n; ++i) {
    want.push_back(w.Z[i]);
    want.push_back(w.B[i]);
  }
  want.insert(want.end(), qline.begin(), qline.end());
  want.insert(want.end(), yline.begin(), yline.end());
  L->Arrange(0, want);
  for (int i = 0; i < n; ++i) {
    L->Emit(GateKind::kCNotPtHalfA, w.Z[i], w.B[i]);
  }
  for (int i = 0; i < n; ++i) {
    L->CNotSwap(w.c, w.Z[i]);
    L->Swap(w.c, w.B[i]);
    L->Emit(GateKind::kPtHalfB, w.Z[i], w.B[i]);
  }
  L->Arrange(0, w.initial);
  return absl::OkStatus();
}

absl::StatusOr<int> ResolveBlock(int n, int l, const ClassicalOptions& o) {
  if (l > 62) {
    return absl::InvalidArgumentError("quotient register wider than 62 bits");
  }
  const int t = o.block == 0 ? DefaultBlockSize(n) : o.block;
  if (t < 1 || t > 62) {
    return absl::InvalidArgumentError("block size must be in [1, 62]");
  }
  return std::min(t, n);
}

}  // namespace

int DefaultBlockSize(int n) { return std::max(1, CeilLog2(n)); }

absl::StatusOr<Circuit> BuildClassicalModMul(const MultiplierParams& p,
                                             const ClassicalOptions& o) {
  NNASHOR_RETURN_IF_ERROR(Validate(p));
  absl::StatusOr<int> t = ResolveBlock(p.n, p.l, o);
  if (!t.ok()) return t.status();
  absl::StatusOr<BlockParams> bp =
      MakeBlockParams(p.n, *t, std::vector<BigInt>(1, BigInt(0)));
  if (!bp.ok()) return bp.status();
  LineBuilder L;
  const Wires w = MakeWires(&L, p.n, p.l, *bp);
  const Layout layout = {{"B", MakeLayout(L.Positions(w.B))},
                         {"c", MakeLayout({L.pos(w.c)})}};
  NNASHOR_RETURN_IF_ERROR(ModMulBody(&L, w, p, *t, o.erase));
  Circuit c = L.Take();
  NNASHOR_RETURN_IF_ERROR(c.SetLayoutIn(layout));
  NNASHOR_RETURN_IF_ERROR(c.SetLayoutOut(layout));
  return c;
}

absl::StatusOr<Exponentiation> BuildClassicalExponentiation(
    const ExponentiationParams& p, const ClassicalOptions& o) {
  if (p.n < 2) return absl::InvalidArgumentError("n must be at least 2");
  if (!p.exponent.has_value()) {
    return absl::InvalidArgumentError(
        "the classical exponentiator needs a known exponent");
  }
  const int R = p.rounds.value_or(2 * p.n);
  if (R < 1 || R > 2 * p.n) {
    return absl::InvalidArgumentError("rounds must be in [1, 2n]");
  }
  if (*p.exponent < 0 || *p.exponent >= (BigInt(1) << R)) {
    return absl::InvalidArgumentError("exponent does not fit in the rounds");
  }
  absl::StatusOr<std::vector<RoundConstants>> consts =
      PrecomputeConstants(p.g, p.m, p.n);
  if (!consts.ok()) return consts.status();
  std::vector<MultiplierParams> mp;
  for (int r = 0; r < R; ++r) {
    MultiplierOptions mo = p.mult;
    mo.variant = Variant::kNearestNeighbor;
    if (!mo.z.has_value() && !p.fixed_z) mo.seed = p.mult.seed + r;
    absl::StatusOr<MultiplierParams> q =
        MakeMultiplierParams(p.n, (*consts)[r].a, p.m, mo);
    if (!q.ok()) return q.status();
    mp.push_back(*q);
  }
  absl::StatusOr<int> t = ResolveBlock(p.n, mp[0].l, o);
  if (!t.ok()) return t.status();
  absl::StatusOr<BlockParams> bp =
      MakeBlockParams(p.n, *t, std::vector<BigInt>(1, BigInt(0)));
  if (!bp.ok()) return bp.status();

  LineBuilder L;
  const Wires w = MakeWires(&L, p.n, mp[0].l, *bp);
  L.X(w.B[0]);
  Exponentiation e;
  e.n = p.n;
  e.l = mp[0].l;
  std::vector<size_t> ends;
  for (int r = 0; r < R; ++r) {
    const bool bit = bit_test(*p.exponent, r);
    if (bit) L.X(w.c);
    NNASHOR_RETURN_IF_ERROR(ModMulBody(&L, w, mp[r], *t, o.erase));
    if (bit) L.X(w.c);
    ends.push_back(L.num_gates());
    RoundInfo info;
    info.index = r;
    info.power = r;
    info.a = (*consts)[r].a;
    info.measured_bit = "e" + std::to_string(r);
    e.rounds.push_back(info);
  }
  Circuit circ = L.Take();
  absl::StatusOr<std::vector<int>> layers = ScheduleLayers(circ, CostModel{});
  if (!layers.ok()) return layers.status();
  int depth = 0;
  size_t g = 0;
  for (int r = 0; r < R; ++r) {
    for (; g < ends[r]; ++g) depth = std::max(depth, (*layers)[g]);
    e.rounds[r].depth_end = depth;
  }
  const Layout layout = {{"W", MakeLayout(L.Positions(w.B))}};
  NNASHOR_RETURN_IF_ERROR(circ.SetLayoutIn(layout));
  NNASHOR_RETURN_IF_ERROR(circ.SetLayoutOut(layout));
  e.circuit = std::move(circ);
  return e;
}

}  // namespace nnashor
