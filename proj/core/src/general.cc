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

// Multiplier for an architecture with arbitrary two-qubit interactions.
//
// The nearest-neighbor schedule is reused as an ordering: every element
// stays on its starting wire, swaps vanish and fused gates lose their swap.
// The controlled swaps fan the control out into a zero register first.

#include <map>
#include <utility>
#include <vector>

#include "nnashor/check.h"
#include "nnashor/qarith.h"
#include "qarith_internal.h"

namespace nnashor {
namespace internal {
namespace {

// CNOT doubling tree copying src into targets.
std::vector<std::pair<int, int>> FanoutTree(int src,
                                            const std::vector<int>& targets) {
  std::vector<std::pair<int, int>> cnots;
  std::vector<int> holders = {src};
  size_t next = 0;
  while (next < targets.size()) {
    const size_t count = holders.size();
    for (size_t h = 0; h < count && next < targets.size(); ++h) {
      cnots.emplace_back(holders[h], targets[next]);
      holders.push_back(targets[next++]);
    }
  }
  return cnots;
}

// For each i: window on target[i] controlled by source[i], toggled by a copy
// of the control. `open_kind` and `close_kind` pick the fused halves.
void AppendFanoutSwap(int control, const std::vector<int>& copies,
                      const std::vector<int>& source,
                      const std::vector<int>& target, GateKind open_kind,
                      GateKind close_kind, Circuit* c) {
  std::vector<std::pair<int, int>> tree = FanoutTree(control, copies);
  for (auto [a, b] : tree) c->Add(Gate::CNot(a, b));
  for (size_t i = 0; i < source.size(); ++i) {
    c->Add(Gate::Make(open_kind, target[i], source[i]));
    c->Add(Gate::CNot(copies[i], target[i]));
    c->Add(Gate::Make(close_kind, target[i], source[i]));
  }
  for (auto it = tree.rbegin(); it != tree.rend(); ++it) {
    c->Add(Gate::CNot(it->first, it->second));
  }
}

std::vector<int> Homes(const std::map<int, int>& home,
                       const std::vector<int>& r) {
  std::vector<int> out;
  for (int e : r) out.push_back(home.at(e));
  return out;
}

}  // namespace

absl::StatusOr<Circuit> BuildGeneralRound(const MultiplierParams& p_in) {
  MultiplierParams p = p_in;
  p.variant = Variant::kGeneral;
  absl::StatusOr<RoundPlan> plan = PlanRound(p, RoundOptions{});
  if (!plan.ok()) return plan.status();
  absl::StatusOr<Schedule> s = RunSystolic(plan->line, plan->t);
  if (!s.ok()) return s.status();

  const std::map<int, int> home = PositionsOf(plan->line);
  const int c_wire = home.at(plan->c);
  const std::vector<int> B = Homes(home, plan->B);
  const std::vector<int> Y = Homes(home, plan->Y);
  const std::vector<int> Z = Homes(home, plan->Z);

  Circuit circ(static_cast<int>(plan->line.size()));
  // Y_i ^= c B_i, B_i ^= Y_i; Z is zero and holds the copies of c.
  AppendFanoutSwap(c_wire, Z, B, Y, GateKind::kPtHalfA, GateKind::kPtHalfBCNot,
                   &circ);
  const auto& events = plan->t.events();
  for (const ScheduleStep& step : s->steps) {
    if (step.event < 0) {
      Gate g = step.gate;
      g.a = home.at(step.up);
      circ.Add(g);
      continue;
    }
    const EventGate& eg = events[step.event].gate;
    const int a = home.at(eg.up_first ? step.up : step.lo);
    const int b = home.at(eg.up_first ? step.lo : step.up);
    switch (eg.kind) {
      case GateKind::kSwap:
        break;
      case GateKind::kFusedCPhaseSwap:
      case GateKind::kFusedCRzSwap:
        circ.Add(Gate::CPhase(a, b, eg.phase));
        break;
      case GateKind::kFusedCNotSwap:
        circ.Add(Gate::CNot(a, b));
        break;
      default:
        circ.Add(Gate::Make(eg.kind, a, b, eg.phase));
        break;
    }
  }
  // B_i ^= Z_i, Z_i ^= c B_i; Y is zero again and holds the copies.
  AppendFanoutSwap(c_wire, Y, B, Z, GateKind::kCNotPtHalfA, GateKind::kPtHalfB,
                   &circ);
  Layout layout = PlanLayout(*plan, plan->line);
  NNASHOR_RETURN_IF_ERROR(circ.SetLayoutIn(layout));
  NNASHOR_RETURN_IF_ERROR(circ.SetLayoutOut(layout));
  return circ;
}

}  // namespace internal

absl::StatusOr<Circuit> BuildGeneralModMul(const MultiplierParams& p) {
  return internal::BuildGeneralRound(p);
}

}  // namespace nnashor
