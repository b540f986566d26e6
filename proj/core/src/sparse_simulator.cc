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

#include <algorithm>
#include <cmath>

#include "absl/strings/str_cat.h"
#include "nnashor/check.h"
#include "nnashor/simulator.h"
#include "sim_internal.h"

namespace nnashor {
namespace {

// Amplitudes below this magnitude are dropped after each gate.
constexpr double kPrune = 1e-14;

using Entry = std::pair<uint64_t, Amplitude>;

void SortAndMerge(std::vector<Entry>* v) {
  std::stable_sort(v->begin(), v->end(), [](const Entry& x, const Entry& y) {
    return x.first < y.first;
  });
  size_t out = 0;
  for (size_t i = 0; i < v->size();) {
    Entry e = (*v)[i];
    size_t j = i + 1;
    while (j < v->size() && (*v)[j].first == e.first)
      e.second += (*v)[j++].second;
    if (std::abs(e.second) > kPrune) (*v)[out++] = e;
    i = j;
  }
  v->resize(out);
}

}  // namespace

absl::StatusOr<SparseState> SparseState::Basis(int width, uint64_t index) {
  if (width < 0 || width > 64) {
    return absl::ResourceExhaustedError("sparse state is limited to 64 wires");
  }
  if (width < 64 && index >= (uint64_t{1} << width)) {
    return absl::OutOfRangeError("basis index out of range");
  }
  SparseState s(width);
  s.amps_.push_back({index, 1.0});
  return s;
}

double SparseState::Norm() const {
  double n = 0;
  for (const Entry& e : amps_) n += std::norm(e.second);
  return n;
}

Amplitude SparseState::Get(uint64_t index) const {
  auto it =
      std::lower_bound(amps_.begin(), amps_.end(), index,
                       [](const Entry& e, uint64_t v) { return e.first < v; });
  return it != amps_.end() && it->first == index ? it->second : Amplitude(0);
}

absl::Status SparseState::Apply(const Gate& g,
                                const std::vector<std::string>& bit_names,
                                uint64_t seed, MeasurementRecord* record) {
  if (g.a >= width_ || (Arity(g.kind) == 2 && g.b >= width_)) {
    return absl::OutOfRangeError("gate wire outside the state");
  }
  if (g.kind == GateKind::kMeasure) {
    const std::string& name = bit_names[g.bit];
    const uint64_t bit = uint64_t{1} << g.a;
    double p1 = 0;
    for (const Entry& e : amps_) {
      if (e.first & bit) p1 += std::norm(e.second);
    }
    double draw = MeasurementDraw(seed, name);
    int value = draw < p1 ? 1 : 0;
    double keep = value ? p1 : 1 - p1;
    double scale = keep > 0 ? 1 / std::sqrt(keep) : 0;
    std::vector<Entry> next;
    for (const Entry& e : amps_) {
      if (((e.first & bit) != 0) == (value == 1)) {
        next.push_back({e.first, e.second * scale});
      }
    }
    amps_ = std::move(next);
    record->bits[name] = {value, draw, p1};
    return absl::OkStatus();
  }
  if (g.kind == GateKind::kClassicalRz) {
    const std::string& name = bit_names[g.bit];
    auto it = record->bits.find(name);
    if (it == record->bits.end()) {
      return absl::FailedPreconditionError(
          absl::StrCat("classical bit ", name, " read before measurement"));
    }
    if (it->second.value == 0) return absl::OkStatus();
  }
  internal::LocalOp op = internal::MakeLocalOp(g);
  const int dim = op.two_wire ? 4 : 2;
  const uint64_t ba = uint64_t{1} << op.wa;
  const uint64_t bb = op.two_wire ? uint64_t{1} << op.wb : 0;
  const uint64_t off[4] = {0, ba, bb, ba | bb};
  std::vector<Entry> next;
  next.reserve(op.monomial ? amps_.size() : amps_.size() * dim);
  for (const Entry& e : amps_) {
    const int s = ((e.first & ba) ? 1 : 0) | ((e.first & bb) ? 2 : 0);
    const uint64_t base = e.first & ~(ba | bb);
    if (op.monomial) {
      const int r = op.perm[s];
      next.push_back({base | off[r], op.m(r, s) * e.second});
      continue;
    }
    for (int r = 0; r < dim; ++r) {
      if (std::abs(op.m(r, s)) > 0) {
        next.push_back({base | off[r], op.m(r, s) * e.second});
      }
    }
  }
  if (op.diagonal) {
    amps_ = std::move(next);
  } else {
    SortAndMerge(&next);
    amps_ = std::move(next);
  }
  return absl::OkStatus();
}

absl::Status ApplyCircuit(const Circuit& c, uint64_t seed, SparseState* state,
                          MeasurementRecord* record) {
  if (c.width() > state->width()) {
    return absl::InvalidArgumentError("circuit wider than state");
  }
  for (const Gate& g : c.gates()) {
    NNASHOR_RETURN_IF_ERROR(state->Apply(g, c.bit_names(), seed, record));
  }
  return absl::OkStatus();
}

}  // namespace nnashor
