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

// Modular exponentiation as a chain of controlled multiplier rounds.
//
// On a line every round ends upside-down relative to how it started, so round
// r+1 is round r's plan read from the other end: its Q_Y is the old Q_Z, its
// Y the old Z and its control the old d. The controlled swap that opens round
// r+1 runs inside round r's closing window.

#include <algorithm>
#include <functional>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "nnashor/check.h"
#include "nnashor/qarith.h"
#include "qarith_internal.h"

namespace nnashor {
namespace {

using internal::RoundOptions;

// One round placed on the exponentiator's wires.
struct RoundBody {
  std::vector<Gate> gates;
  int c_start = -1;
  int d_start = -1;  // -1 when the round has no d.
  int c_end = -1;
  int d_end = -1;
  std::vector<int> b_in;
  std::vector<int> b_out;
};

std::vector<int> Positions(const std::map<int, int>& pos,
                           const std::vector<int>& r,
                           const std::function<int(int)>& phys) {
  std::vector<int> out;
  for (int e : r) out.push_back(phys(pos.at(e)));
  return out;
}

absl::StatusOr<RoundBody> NearestNeighborBody(const MultiplierParams& p,
                                              const RoundOptions& o, int offset,
                                              int line_width, bool mirrored) {
  absl::StatusOr<internal::RoundPlan> plan = internal::PlanRound(p, o);
  if (!plan.ok()) return plan.status();
  absl::StatusOr<Schedule> s = RunSystolic(plan->line, plan->t);
  if (!s.ok()) return s.status();
  if (static_cast<int>(plan->line.size()) != line_width) {
    return absl::InternalError("round line has the wrong width");
  }
  auto phys = [&](int pos) {
    return offset + (mirrored ? line_width - 1 - pos : pos);
  };
  Circuit tmp(line_width);
  AppendSchedule(*s, 0, &tmp);
  RoundBody body;
  for (Gate g : tmp.gates()) {
    g.a = phys(g.a);
    if (g.b >= 0) g.b = phys(g.b);
    body.gates.push_back(g);
  }
  const std::map<int, int> in = PositionsOf(s->initial_line);
  const std::map<int, int> out = PositionsOf(s->final_line);
  body.c_start = phys(in.at(plan->c));
  body.c_end = phys(out.at(plan->c));
  if (plan->d >= 0) {
    body.d_start = phys(in.at(plan->d));
    body.d_end = phys(out.at(plan->d));
  }
  body.b_in = Positions(in, plan->B, phys);
  body.b_out = Positions(out, plan->B, phys);
  return body;
}

// General variant: every round sits on the same wires. The control
// alternates between the multiplier's c wire and one extra wire at the end.
absl::StatusOr<RoundBody> GeneralBody(const MultiplierParams& p, int round,
                                      int line_width) {
  absl::StatusOr<Circuit> c = internal::BuildGeneralRound(p);
  if (!c.ok()) return c.status();
  const int home = c->layout_in().at("c").positions[0];
  const int extra = line_width - 1;
  const bool flip = round % 2 == 1;
  auto phys = [&](int w) {
    if (!flip) return w;
    return w == home ? extra : w;
  };
  RoundBody body;
  for (Gate g : c->gates()) {
    g.a = phys(g.a);
    if (g.b >= 0) g.b = phys(g.b);
    body.gates.push_back(g);
  }
  body.c_start = body.c_end = flip ? extra : home;
  body.d_start = body.d_end = flip ? home : extra;
  body.b_in = c->layout_in().at("B").positions;
  body.b_out = c->layout_out().at("B").positions;
  return body;
}

// Exchanges the contents of wires u and v with swaps of neighbors only.
void Exchange(int u, int v, bool nearest_neighbor, Circuit* c) {
  if (u == v) return;
  if (!nearest_neighbor) {
    c->Add(Gate::Swap(u, v));
    return;
  }
  const int step = u < v ? 1 : -1;
  for (int w = u; w != v; w += step) c->Add(Gate::Swap(w, w + step));
  for (int w = v - step; w != u; w -= step) c->Add(Gate::Swap(w, w - step));
}

std::string BitName(int power) { return "e" + std::to_string(power); }

}  // namespace

absl::StatusOr<Exponentiation> BuildExponentiation(
    const ExponentiationParams& p) {
  if (p.n < 2) return absl::InvalidArgumentError("n must be at least 2");
  const int R = p.rounds.value_or(2 * p.n);
  if (R < 1 || R > 2 * p.n) {
    return absl::InvalidArgumentError("rounds must be in [1, 2n]");
  }
  if (p.exponent.has_value() &&
      (*p.exponent < 0 || *p.exponent >= (BigInt(1) << R))) {
    return absl::InvalidArgumentError("exponent does not fit in the rounds");
  }
  absl::StatusOr<std::vector<RoundConstants>> consts =
      PrecomputeConstants(p.g, p.m, p.n);
  if (!consts.ok()) return consts.status();

  const bool nn = p.mult.variant == Variant::kNearestNeighbor;
  const bool shor = !p.exponent.has_value();
  const bool prealloc = p.control_mode == ControlMode::kPreallocated;
  auto power = [&](int r) { return shor ? R - 1 - r : r; };

  std::vector<MultiplierParams> mp;
  for (int r = 0; r < R; ++r) {
    MultiplierOptions o = p.mult;
    if (!o.z.has_value() && !p.fixed_z) o.seed = p.mult.seed + r;
    absl::StatusOr<MultiplierParams> q =
        MakeMultiplierParams(p.n, (*consts)[power(r)].a, p.m, o);
    if (!q.ok()) return q.status();
    mp.push_back(*q);
  }
  const int l = mp[0].l;
  const int K = mp[0].K();
  const int W = 3 * p.n + 2 * l + 2;

  // Preallocated controls of rounds 2 and up wait in stacks off the line's
  // ends. On a line round j's control is handed over at the top when j is
  // odd and at the bottom when j is even; slots nearest the line go first.
  std::vector<int> top, bottom;
  if (prealloc) {
    for (int j = 2; j < R; ++j) {
      ((nn && j % 2 == 1) ? top : bottom).push_back(j);
    }
  }
  const int T = static_cast<int>(top.size());
  const int width = T + W + static_cast<int>(bottom.size());
  std::map<int, int> slot;
  for (int i = 0; i < T; ++i) slot[top[i]] = T - 1 - i;
  for (size_t i = 0; i < bottom.size(); ++i) {
    slot[bottom[i]] = T + W + static_cast<int>(i);
  }

  std::vector<RoundBody> bodies;
  for (int r = 0; r < R; ++r) {
    absl::StatusOr<RoundBody> b;
    if (nn) {
      RoundOptions o;
      o.with_open_swap = r == 0;
      o.with_next = r + 1 < R;
      o.idle_d = !o.with_next;
      b = NearestNeighborBody(mp[r], o, T, W, r % 2 == 1);
    } else {
      b = GeneralBody(mp[r], r, W);
    }
    if (!b.ok()) return b.status();
    if (r > 0) {
      const RoundBody& prev = bodies.back();
      if (b->b_in != prev.b_out || b->c_start != prev.d_end ||
          b->d_start != prev.c_end) {
        return absl::InternalError("rounds do not line up");
      }
    }
    bodies.push_back(*std::move(b));
  }

  Circuit circ(width);
  auto prepare = [&](int wire, int r) {
    if (shor) {
      circ.Add(Gate::H(wire));
    } else if (bit_test(*p.exponent, power(r))) {
      circ.Add(Gate::X(wire));
    }
  };
  // Measures the control of round r, after undoing the phase that the
  // controls measured before it left behind.
  auto measure = [&](int wire, int r) {
    if (shor) {
      for (int q = 0; q < r; ++q) {
        circ.AddClassicalRz(wire, internal::Turns(-1, r - q + 1),
                            BitName(power(q)));
      }
      circ.Add(Gate::H(wire));
    }
    circ.AddMeasure(wire, BitName(power(r)));
  };
  auto reset = [&](int wire, int r) {
    circ.Add(Gate::H(wire));
    circ.AddClassicalRz(wire, DyadicPhase::Make(1, 1), BitName(power(r)));
    circ.Add(Gate::H(wire));
  };

  circ.Add(Gate::X(bodies[0].b_in[0]));
  prepare(bodies[0].c_start, 0);
  if (R > 1) prepare(bodies[0].d_start, 1);
  for (const auto& [j, w] : slot) prepare(w, j);

  Exponentiation e;
  e.n = p.n;
  e.l = l;
  std::vector<int> home(R, -1);  // Final wire of each control, preallocated.
  std::vector<size_t> ends;
  for (int r = 0; r < R; ++r) {
    const RoundBody& b = bodies[r];
    if (r > 0) {
      // d starts on the wire of the previous control.
      if (!prealloc) {
        measure(b.d_start, r - 1);
        reset(b.d_start, r - 1);
        if (r + 1 < R) prepare(b.d_start, r + 1);
      } else if (r + 1 < R) {
        Exchange(slot.at(r + 1), b.d_start, nn, &circ);
        home[r - 1] = slot.at(r + 1);
      } else {
        home[r - 1] = b.d_end;
      }
    }
    for (const Gate& g : b.gates) circ.Add(g);
    ends.push_back(circ.gates().size());

    RoundInfo info;
    info.index = r;
    info.power = power(r);
    info.a = (*consts)[power(r)].a;
    info.mirrored = nn && r % 2 == 1;
    info.measured_bit = BitName(power(r));
    info.predicted_depth = (nn ? 9 : 6) * p.n + 6 * (2 * l - K) * K;
    e.rounds.push_back(info);
  }
  if (!prealloc) {
    measure(bodies[R - 1].c_end, R - 1);
    reset(bodies[R - 1].c_end, R - 1);
  } else {
    home[R - 1] = bodies[R - 1].c_end;
    for (int r = 0; r < R; ++r) measure(home[r], r);
  }

  absl::StatusOr<std::vector<int>> layers = ScheduleLayers(
      circ, nn ? CostModel{} : CostModel{.nearest_neighbor = false});
  if (!layers.ok()) return layers.status();
  int depth = 0;
  size_t g = 0;
  for (int r = 0; r < R; ++r) {
    for (; g < ends[r]; ++g) depth = std::max(depth, (*layers)[g]);
    e.rounds[r].depth_end = depth;
  }
  NNASHOR_RETURN_IF_ERROR(
      circ.SetLayoutIn({{"W", MakeLayout(bodies[0].b_in)}}));
  NNASHOR_RETURN_IF_ERROR(
      circ.SetLayoutOut({{"W", MakeLayout(bodies[R - 1].b_out)}}));
  e.circuit = std::move(circ);
  return e;
}

std::string RoundManifestJson(const Exponentiation& e) {
  nlohmann::json rounds = nlohmann::json::array();
  int prev = 0;
  for (const RoundInfo& r : e.rounds) {
    rounds.push_back({{"index", r.index},
                      {"power", r.power},
                      {"a", r.a.str()},
                      {"orientation", r.mirrored ? "mirrored" : "upright"},
                      {"measured_bit", r.measured_bit},
                      {"predicted_depth", r.predicted_depth},
                      {"depth", r.depth_end - prev},
                      {"depth_end", r.depth_end}});
    prev = r.depth_end;
  }
  nlohmann::json j = {
      {"n", e.n}, {"l", e.l}, {"width", e.circuit.width()}, {"rounds", rounds}};
  return j.dump(2);
}

}  // namespace nnashor
