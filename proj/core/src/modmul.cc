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

// Controlled in-place modular multiplier on a line.
//
// If c, move B into Y. Compute Z = a Y mod m with one modular repeated adder
// and erase Y with the inverse of the adder for a^-1 driven by Z. Then, if
// c, move Z into B. Both moves are controlled-swap cascades through the
// interleaved B/Y (later B/Z) pairs. B turns upside down while idle so the
// final pairs come out in the right order, and Q_Y travels to the far side
// of B so the second adder can start before the first has drained.

#include <algorithm>
#include <map>
#include <string>
#include <vector>

#include "nnashor/check.h"
#include "nnashor/gate_library.h"
#include "nnashor/qarith.h"
#include "qarith_internal.h"

namespace nnashor {
namespace internal {
namespace {

constexpr int kTp = kPrioMove;

EventGate Kind(GateKind k, bool up_first) {
  return EventGate{k, up_first, DyadicPhase()};
}

std::vector<int> PositionsIn(const std::map<int, int>& pos,
                             const std::vector<int>& r) {
  std::vector<int> out;
  for (int e : r) out.push_back(pos.at(e));
  return out;
}

}  // namespace

absl::StatusOr<RoundPlan> PlanRound(const MultiplierParams& p,
                                    const RoundOptions& o) {
  NNASHOR_RETURN_IF_ERROR(Validate(p));
  const bool general = p.variant == Variant::kGeneral;
  std::optional<int> cutoff;
  if (general && !p.exact_mode) cutoff = DefaultQftCutoff(p.n);
  absl::StatusOr<BigInt> a_inv = ModInverse(p.a, p.m);
  if (!a_inv.ok()) return a_inv.status();
  const AdderConstants blue_k = MakeAdderConstants(p, p.a);
  const AdderConstants red_k = MakeAdderConstants(p, *a_inv);
  const int n = p.n;
  const bool has_d = o.with_next || o.idle_d;

  RoundPlan plan;
  Elements& el = plan.el;
  std::vector<int>& QY = plan.QY = el.NewRegister("QY", p.l);
  const int d = plan.d = has_d ? el.New("d") : -1;
  std::vector<int>& B = plan.B = el.NewRegister("B", n);
  std::vector<int>& Y = plan.Y = el.NewRegister("Y", n);
  const int c = plan.c = el.New("c");
  std::vector<int>& QZ = plan.QZ = el.NewRegister("QZ", p.l);
  std::vector<int>& Z = plan.Z = el.NewRegister("Z", n);

  std::vector<int>& line = plan.line;
  line = QY;
  if (has_d) line.push_back(d);
  if (!o.with_open_swap) line.push_back(c);
  for (int i = 0; i < n; ++i) {
    line.push_back(B[i]);
    line.push_back(Y[i]);
  }
  if (o.with_open_swap) line.push_back(c);
  line.insert(line.end(), QZ.begin(), QZ.end());
  line.insert(line.end(), Z.begin(), Z.end());

  Template& t = plan.t;
  // In the general variant the swaps below only steer the schedule; the
  // controlled swaps themselves are emitted separately with a fanout.
  auto maybe = [general](GateKind k, bool up_first) {
    return general ? EventGate{} : Kind(k, up_first);
  };
  // Y_i ^= c B_i inside a pseudo-Toffoli window, then B_i ^= Y_i.
  if (o.with_open_swap) {
    t.AddPhase(c, "cs1");
    for (int i = 0; i < n; ++i) {
      for (int e : {B[i], Y[i]}) {
        if (!general) t.AddPhase(e, "cs1.open");
        t.AddPhase(e, "cs1.x");
        if (!general) t.AddPhase(e, "cs1.close");
      }
      if (!general) {
        t.Touch(B[i], "cs1.open", Y[i], "cs1.open", kTp,
                Kind(GateKind::kPtHalfA, false));
      }
      t.Cross(Y[i], "cs1.x", c, "cs1", kTp,
              maybe(GateKind::kFusedCNotSwap, false));
      t.Cross(B[i], "cs1.x", c, "cs1", kTp);
      if (!general) {
        t.Touch(B[i], "cs1.close", Y[i], "cs1.close", kTp,
                Kind(GateKind::kPtHalfBCNot, false));
      }
    }
  }
  // Unmesh into B block above Y block.
  for (int i = 0; i < n; ++i) {
    t.AddPhase(B[i], "um");
    t.AddPhase(Y[i], "um");
  }
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) t.Cross(Y[i], "um", B[j], "um", kTp);
  }
  // B reverses itself while the adders run.
  for (int i = 0; i < n; ++i) t.AddPhase(B[i], "rev");
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      t.Cross(B[i], "rev", B[j], "rev", kPrioReverse);
    }
  }

  t.Merge(ModAddTemplate(Y, QZ, Z, blue_k, "b", cutoff));

  // Q_Y moves down past d, c and B.
  t.AddPhase(c, "qy");
  for (int b : B) t.AddPhase(b, "qy");
  if (has_d) t.AddPhase(d, "qy");
  for (int q : QY) {
    t.AddPhase(q, "qy");
    if (has_d) t.Cross(q, "qy", d, "qy", kTp);
    t.Cross(q, "qy", c, "qy", kTp);
    for (int b : B) t.Cross(q, "qy", b, "qy", kTp);
  }

  std::vector<int> QYr(QY.rbegin(), QY.rend());
  t.Merge(ModAddTemplate(Z, QYr, Y, red_k, "r", cutoff).Reversed());

  // Y and Q_Y move back up past B, c and d.
  t.AddPhase(c, "up");
  if (has_d) t.AddPhase(d, "up");
  for (int b : B) t.AddPhase(b, "up");
  std::vector<int> movers = Y;
  movers.insert(movers.end(), QY.begin(), QY.end());
  for (int e : movers) t.AddPhase(e, "up");
  for (int e : movers) {
    if (has_d) t.Cross(d, "up", e, "up", kTp);
    t.Cross(c, "up", e, "up", kTp);
    for (int b : B) t.Cross(b, "up", e, "up", kTp);
  }

  // Mesh: B (now most significant bit on top) sinks into Z.
  std::vector<int> Bg(B.rbegin(), B.rend());
  std::vector<int> Zg(Z.rbegin(), Z.rend());
  for (int i = 0; i < n; ++i) {
    t.AddPhase(B[i], "mesh");
    t.AddPhase(Z[i], "mesh");
  }
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j <= i; ++j) t.Cross(Bg[i], "mesh", Zg[j], "mesh", kTp);
  }

  // B_i ^= Z_i, then Z_i ^= c B_i inside a window, with c passing down.
  // B and Z are the same bit here and Z is zero unless c.
  t.AddPhase(c, "cs2");
  for (int i = 0; i < n; ++i) {
    for (int e : {Bg[i], Zg[i]}) {
      if (!general) t.AddPhase(e, "cs2.open");
      t.AddPhase(e, "cs2.x");
      if (!o.with_next && !general) t.AddPhase(e, "cs2.close");
    }
    if (!general) {
      t.Touch(Zg[i], "cs2.open", Bg[i], "cs2.open", kTp,
              Kind(GateKind::kCNotPtHalfA, true));
    }
    t.Cross(c, "cs2", Zg[i], "cs2.x", kTp,
            maybe(GateKind::kFusedCNotSwap, true));
    t.Cross(c, "cs2", Bg[i], "cs2.x", kTp);
    if (!o.with_next && !general) {
      t.Touch(Zg[i], "cs2.close", Bg[i], "cs2.close", kTp,
              Kind(GateKind::kPtHalfB, true));
    }
  }
  // The next round's opening swap shares the window: Z_i ^= d B_i and
  // B_i ^= Z_i.
  if (o.with_next) {
    t.AddPhase(d, "cs1n");
    for (int i = 0; i < n; ++i) {
      for (int e : {Bg[i], Zg[i]}) {
        t.AddPhase(e, "cs1n.x");
        t.AddPhase(e, "cs1n.close");
      }
      t.Cross(d, "cs1n", Zg[i], "cs1n.x", kTp,
              Kind(GateKind::kFusedCNotSwap, true));
      t.Cross(d, "cs1n", Bg[i], "cs1n.x", kTp);
      t.Touch(Zg[i], "cs1n.close", Bg[i], "cs1n.close", kTp,
              Kind(GateKind::kPtHalfBCNot, true));
    }
  }

  return plan;
}

Layout PlanLayout(const RoundPlan& plan, const std::vector<int>& order) {
  std::map<int, int> pos = PositionsOf(order);
  Layout out = {{"QY", MakeLayout(PositionsIn(pos, plan.QY))},
                {"B", MakeLayout(PositionsIn(pos, plan.B))},
                {"Y", MakeLayout(PositionsIn(pos, plan.Y))},
                {"c", MakeLayout({pos.at(plan.c)})},
                {"QZ", MakeLayout(PositionsIn(pos, plan.QZ))},
                {"Z", MakeLayout(PositionsIn(pos, plan.Z))}};
  if (plan.d >= 0) out["d"] = MakeLayout({pos.at(plan.d)});
  return out;
}

absl::StatusOr<Circuit> BuildNearestNeighborRound(const MultiplierParams& p,
                                                  const RoundOptions& o) {
  if (p.variant != Variant::kNearestNeighbor) {
    return absl::InvalidArgumentError("expected the nearest-neighbor variant");
  }
  absl::StatusOr<RoundPlan> plan = PlanRound(p, o);
  if (!plan.ok()) return plan.status();
  absl::StatusOr<Schedule> s = RunSystolic(plan->line, plan->t);
  if (!s.ok()) return s.status();
  Circuit circ(static_cast<int>(plan->line.size()));
  AppendSchedule(*s, 0, &circ);
  NNASHOR_RETURN_IF_ERROR(circ.SetLayoutIn(PlanLayout(*plan, plan->line)));
  NNASHOR_RETURN_IF_ERROR(circ.SetLayoutOut(PlanLayout(*plan, s->final_line)));
  return circ;
}

}  // namespace internal

absl::StatusOr<Circuit> BuildControlledModMul(const MultiplierParams& p) {
  if (p.variant == Variant::kGeneral) return BuildGeneralModMul(p);
  return internal::BuildNearestNeighborRound(p, internal::RoundOptions{});
}

}  // namespace nnashor
