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

#include "nnashor/circuit.h"

#include <algorithm>
#include <cstdlib>
#include <set>
#include <utility>

#include "absl/strings/str_cat.h"
#include "nnashor/check.h"

namespace nnashor {
namespace {

absl::Status CheckLayout(const Layout& layout, int width) {
  std::set<int> used;
  for (const auto& [name, reg] : layout) {
    for (int p : reg.positions) {
      if (p < 0 || p >= width) {
        return absl::InvalidArgumentError(
            absl::StrCat("register ", name, " position ", p,
                         " out of range for width ", width));
      }
      if (!used.insert(p).second) {
        return absl::InvalidArgumentError(
            absl::StrCat("register ", name, " reuses position ", p));
      }
    }
  }
  return absl::OkStatus();
}

}  // namespace

RegisterLayout MakeLayout(std::vector<int> positions) {
  RegisterLayout r;
  r.reversed = positions.size() >= 2 && positions[1] < positions[0];
  r.positions = std::move(positions);
  return r;
}

absl::Status Circuit::SetLayoutIn(Layout layout) {
  NNASHOR_RETURN_IF_ERROR(CheckLayout(layout, width_));
  layout_in_ = std::move(layout);
  return absl::OkStatus();
}

absl::Status Circuit::SetLayoutOut(Layout layout) {
  NNASHOR_RETURN_IF_ERROR(CheckLayout(layout, width_));
  layout_out_ = std::move(layout);
  return absl::OkStatus();
}

absl::Status Circuit::Append(Gate g) {
  int arity = Arity(g.kind);
  if (g.a < 0 || g.a >= width_) {
    return absl::OutOfRangeError(
        absl::StrCat("wire ", g.a, " out of range for width ", width_));
  }
  if (arity == 2) {
    if (g.b < 0 || g.b >= width_) {
      return absl::OutOfRangeError(
          absl::StrCat("wire ", g.b, " out of range for width ", width_));
    }
    if (g.a == g.b) {
      return absl::InvalidArgumentError(
          absl::StrCat("duplicate operand ", g.a, " in ", Mnemonic(g.kind)));
    }
  } else {
    g.b = -1;
  }
  if (g.kind == GateKind::kMeasure || g.kind == GateKind::kClassicalRz) {
    if (g.bit < 0 || g.bit >= static_cast<int>(bit_names_.size())) {
      return absl::InvalidArgumentError("classical bit reference missing");
    }
  } else {
    g.bit = -1;
  }
  if (!HasPhase(g.kind)) g.phase = DyadicPhase();
  gates_.push_back(g);
  return absl::OkStatus();
}

int Circuit::InternBit(const std::string& name) {
  auto it = std::find(bit_names_.begin(), bit_names_.end(), name);
  if (it != bit_names_.end()) return static_cast<int>(it - bit_names_.begin());
  bit_names_.push_back(name);
  return static_cast<int>(bit_names_.size()) - 1;
}

absl::Status Circuit::Measure(int w, const std::string& bit) {
  if (bit.empty()) return absl::InvalidArgumentError("empty bit name");
  Gate g = Gate::Make(GateKind::kMeasure, w);
  g.bit = InternBit(bit);
  return Append(g);
}

absl::Status Circuit::ClassicalRz(int w, DyadicPhase p,
                                  const std::string& bit) {
  if (bit.empty()) return absl::InvalidArgumentError("empty bit name");
  Gate g = Gate::Make(GateKind::kClassicalRz, w, -1, p);
  g.bit = InternBit(bit);
  return Append(g);
}

Circuit& Circuit::Add(Gate g) {
  NNASHOR_CHECK_OK(Append(g));
  return *this;
}

Circuit& Circuit::AddMeasure(int w, const std::string& bit) {
  NNASHOR_CHECK_OK(Measure(w, bit));
  return *this;
}

Circuit& Circuit::AddClassicalRz(int w, DyadicPhase p, const std::string& bit) {
  NNASHOR_CHECK_OK(ClassicalRz(w, p, bit));
  return *this;
}

std::vector<int> ValidateNearestNeighbor(const Circuit& c) {
  std::vector<int> bad;
  const auto& gates = c.gates();
  for (int i = 0; i < static_cast<int>(gates.size()); ++i) {
    const Gate& g = gates[i];
    if (Arity(g.kind) == 2 && std::abs(g.a - g.b) != 1) bad.push_back(i);
  }
  return bad;
}

absl::StatusOr<std::vector<int>> ScheduleLayers(const Circuit& c,
                                                const CostModel& model) {
  if (model.nearest_neighbor) {
    std::vector<int> bad = ValidateNearestNeighbor(c);
    if (!bad.empty()) {
      const Gate& g = c.gates()[bad[0]];
      return absl::FailedPreconditionError(
          absl::StrCat(bad.size(), " non-adjacent gate(s); first is #", bad[0],
                       " ", Mnemonic(g.kind), " ", g.a, " ", g.b));
    }
  }
  const auto& gates = c.gates();
  const int n = static_cast<int>(gates.size());
  std::vector<std::vector<int>> on_wire(c.width());
  for (int i = 0; i < n; ++i) {
    on_wire[gates[i].a].push_back(i);
    if (Arity(gates[i].kind) == 2) on_wire[gates[i].b].push_back(i);
  }
  // carrier[i] >= 0: gate i is absorbed by that gate. head[i] >= 0: gate i
  // belongs to a standalone run led by that gate.
  std::vector<int> carrier(n, -1), head(n, -1);
  for (const auto& seq : on_wire) {
    const int len = static_cast<int>(seq.size());
    for (int s = 0; s < len;) {
      if (!IsSingleWireUnitary(gates[seq[s]].kind)) {
        ++s;
        continue;
      }
      int e = s;
      while (e + 1 < len && IsSingleWireUnitary(gates[seq[e + 1]].kind)) ++e;
      int carry = -1;
      if (e + 1 < len && Arity(gates[seq[e + 1]].kind) == 2) {
        carry = seq[e + 1];
      } else if (s > 0 && Arity(gates[seq[s - 1]].kind) == 2) {
        carry = seq[s - 1];
      }
      for (int k = s; k <= e; ++k) {
        if (carry >= 0) {
          carrier[seq[k]] = carry;
        } else {
          head[seq[k]] = seq[s];
        }
      }
      s = e + 1;
    }
  }
  std::vector<int> layer(n, 0);
  std::vector<int> wire_time(c.width(), 0);
  for (int i = 0; i < n; ++i) {
    if (carrier[i] >= 0) continue;
    if (head[i] >= 0 && head[i] != i) {
      layer[i] = layer[head[i]];
      continue;
    }
    const Gate& g = gates[i];
    int t = wire_time[g.a];
    if (Arity(g.kind) == 2) t = std::max(t, wire_time[g.b]);
    layer[i] = t + 1;
    wire_time[g.a] = t + 1;
    if (Arity(g.kind) == 2) wire_time[g.b] = t + 1;
  }
  for (int i = 0; i < n; ++i) {
    if (carrier[i] >= 0) layer[i] = layer[carrier[i]];
  }
  return layer;
}

absl::StatusOr<int> ComputeDepth(const Circuit& c, const CostModel& model) {
  absl::StatusOr<std::vector<int>> layers = ScheduleLayers(c, model);
  if (!layers.ok()) return layers.status();
  int depth = 0;
  for (int l : *layers) depth = std::max(depth, l);
  return depth;
}

int CountSize(const Circuit& c, const CostModel&) {
  return static_cast<int>(c.gates().size());
}

int UsedWidth(const Circuit& c) {
  int w = 0;
  for (const Gate& g : c.gates()) {
    w = std::max(w, g.a + 1);
    if (Arity(g.kind) == 2) w = std::max(w, g.b + 1);
  }
  return w;
}

absl::StatusOr<ResourceReport> MeasureResources(const Circuit& c,
                                                const CostModel& model) {
  absl::StatusOr<int> depth = ComputeDepth(c, model);
  if (!depth.ok()) return depth.status();
  ResourceReport r;
  r.depth = *depth;
  r.width = c.width();
  r.size = CountSize(c, model);
  return r;
}

absl::StatusOr<Circuit> Invert(const Circuit& c) {
  Circuit out(c.width());
  out.set_classical(c.classical());
  for (const std::string& b : c.bit_names()) out.InternBit(b);
  const auto& gates = c.gates();
  for (auto it = gates.rbegin(); it != gates.rend(); ++it) {
    if (it->kind == GateKind::kMeasure) {
      return absl::FailedPreconditionError("cannot invert a measurement");
    }
    NNASHOR_RETURN_IF_ERROR(out.Append(Adjoint(*it)));
  }
  NNASHOR_RETURN_IF_ERROR(out.SetLayoutIn(c.layout_out()));
  NNASHOR_RETURN_IF_ERROR(out.SetLayoutOut(c.layout_in()));
  return out;
}

Circuit Mirror(const Circuit& c) {
  const int w = c.width();
  Circuit out(w);
  out.set_classical(c.classical());
  for (const std::string& b : c.bit_names()) out.InternBit(b);
  for (Gate g : c.gates()) {
    g.a = w - 1 - g.a;
    if (Arity(g.kind) == 2) g.b = w - 1 - g.b;
    NNASHOR_CHECK_OK(out.Append(g));
  }
  auto flip = [w](const Layout& in) {
    Layout res;
    for (const auto& [name, reg] : in) {
      RegisterLayout r = reg;
      for (int& p : r.positions) p = w - 1 - p;
      r.reversed = !reg.reversed;
      res[name] = r;
    }
    return res;
  };
  NNASHOR_CHECK_OK(out.SetLayoutIn(flip(c.layout_in())));
  NNASHOR_CHECK_OK(out.SetLayoutOut(flip(c.layout_out())));
  return out;
}

absl::StatusOr<Circuit> Concat(const Circuit& first, const Circuit& second) {
  if (first.width() != second.width()) {
    return absl::InvalidArgumentError(absl::StrCat(
        "width mismatch: ", first.width(), " vs ", second.width()));
  }
  // Registers named on both sides must sit in the same place; a register
  // introduced by `second` must not land on a register `first` still holds.
  std::set<int> held;
  for (const auto& [name, reg] : first.layout_out()) {
    held.insert(reg.positions.begin(), reg.positions.end());
  }
  Layout extra_in;
  for (const auto& [name, reg] : second.layout_in()) {
    auto it = first.layout_out().find(name);
    if (it != first.layout_out().end()) {
      if (it->second.positions != reg.positions) {
        return absl::InvalidArgumentError(
            absl::StrCat("layout mismatch for register ", name));
      }
      continue;
    }
    for (int p : reg.positions) {
      if (held.count(p)) {
        return absl::InvalidArgumentError(absl::StrCat(
            "register ", name, " overlaps a live register at ", p));
      }
    }
    extra_in[name] = reg;
  }
  Circuit out(first.width());
  out.set_classical(first.classical() && second.classical());
  for (const std::string& b : first.bit_names()) out.InternBit(b);
  for (Gate g : first.gates()) NNASHOR_CHECK_OK(out.Append(g));
  for (Gate g : second.gates()) {
    if (g.bit >= 0) g.bit = out.InternBit(second.bit_names()[g.bit]);
    NNASHOR_CHECK_OK(out.Append(g));
  }
  Layout in = first.layout_in();
  std::set<int> in_used;
  for (const auto& [name, reg] : in) {
    in_used.insert(reg.positions.begin(), reg.positions.end());
  }
  for (const auto& [name, reg] : extra_in) {
    bool clash = in.count(name) > 0;
    for (int p : reg.positions) clash = clash || in_used.count(p) > 0;
    if (!clash) in[name] = reg;
  }
  NNASHOR_RETURN_IF_ERROR(out.SetLayoutIn(std::move(in)));
  Layout lo = second.layout_out();
  if (lo.empty() && second.layout_in().empty()) lo = first.layout_out();
  NNASHOR_RETURN_IF_ERROR(out.SetLayoutOut(std::move(lo)));
  return out;
}

}  // namespace nnashor
