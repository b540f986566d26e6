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

#include "nnashor/simulator.h"

#include <bit>
#include <cmath>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <numbers>

#include "absl/strings/numbers.h"
#include "absl/strings/str_cat.h"
#include "json.hpp"
#include "nnashor/check.h"
#include "sim_internal.h"

namespace nnashor {
namespace {

using Mat4 = Eigen::Matrix4cd;

Amplitude Phase(const DyadicPhase& p) {
  return std::polar(1.0, 2 * std::numbers::pi * p.Turns());
}

// Single-wire matrix on bit0, identity on bit1.
Mat4 Lift(const Eigen::Matrix2cd& m) {
  Mat4 r = Mat4::Zero();
  r.block<2, 2>(0, 0) = m;
  r.block<2, 2>(2, 2) = m;
  return r;
}

Mat4 Perm(std::initializer_list<int> to) {
  Mat4 r = Mat4::Zero();
  int s = 0;
  for (int t : to) r(t, s++) = 1;
  return r;
}

// CNOT with control bit1 and target bit0.
Mat4 CxFromB() { return Perm({0, 1, 3, 2}); }
// CNOT with control bit0 and target bit1.
Mat4 CxFromA() { return Perm({0, 3, 2, 1}); }
Mat4 SwapMat() { return Perm({0, 2, 1, 3}); }

Mat4 HalfA() {
  const double c = std::cos(std::numbers::pi / 8);
  const double s = std::sin(std::numbers::pi / 8);
  Eigen::Matrix2cd ry;
  ry << c, -s, s, c;
  Mat4 r = Lift(ry);
  return r * CxFromB() * r;
}

}  // namespace

int WidthCap() {
  const char* env = std::getenv("NNASHOR_MAX_WIDTH");
  int cap;
  if (env != nullptr && absl::SimpleAtoi(env, &cap) && cap > 0 && cap <= 40) {
    return cap;
  }
  return kDefaultWidthCap;
}

std::string MeasurementRecord::ToJson() const {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& [name, e] : bits) {
    j[name] = {{"value", e.value}, {"draw", e.draw}, {"p1", e.p1}};
  }
  return j.dump(2);
}

double MeasurementDraw(uint64_t seed, const std::string& bit) {
  // FNV-1a of the name, mixed with the seed by a SplitMix64 finalizer.
  uint64_t h = 1469598103934665603ull;
  for (unsigned char ch : bit) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  uint64_t z = seed + 0x9e3779b97f4a7c15ull * (h | 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  z ^= z >> 31;
  return static_cast<double>(z >> 11) * 0x1.0p-53;
}

Mat4 GateMatrix(const Gate& g) {
  switch (g.kind) {
    case GateKind::kH: {
      Eigen::Matrix2cd h;
      const double r = 1 / std::sqrt(2.0);
      h << r, r, r, -r;
      return Lift(h);
    }
    case GateKind::kX:
      return Perm({1, 0, 3, 2});
    case GateKind::kRz:
    case GateKind::kClassicalRz: {
      Mat4 r = Mat4::Identity();
      r(1, 1) = r(3, 3) = Phase(g.phase);
      return r;
    }
    case GateKind::kCPhase: {
      Mat4 r = Mat4::Identity();
      r(3, 3) = Phase(g.phase);
      return r;
    }
    case GateKind::kCNot:
      return CxFromA();
    case GateKind::kSwap:
      return SwapMat();
    case GateKind::kFusedCPhaseSwap:
    case GateKind::kFusedCRzSwap: {
      Mat4 r = Mat4::Identity();
      r(3, 3) = Phase(g.phase);
      return SwapMat() * r;
    }
    case GateKind::kFusedCNotSwap:
      return SwapMat() * CxFromA();
    case GateKind::kPtHalfA:
      return HalfA();
    case GateKind::kPtHalfB:
      return HalfA().adjoint();
    case GateKind::kPtHalfBCNot:
      return CxFromA() * HalfA().adjoint();
    case GateKind::kCNotPtHalfA:
      return HalfA() * CxFromA();
    case GateKind::kMeasure:
      break;
  }
  return Mat4::Identity();
}

namespace internal {

LocalOp MakeLocalOp(const Gate& g) {
  LocalOp op;
  op.two_wire = Arity(g.kind) == 2;
  op.wa = g.a;
  op.wb = g.b;
  op.m = GateMatrix(g);
  const int dim = op.two_wire ? 4 : 2;
  op.monomial = true;
  op.diagonal = true;
  for (int s = 0; s < dim; ++s) {
    int nz = 0;
    for (int r = 0; r < dim; ++r) {
      if (std::abs(op.m(r, s)) > 1e-15) {
        ++nz;
        op.perm[s] = r;
        if (r != s) op.diagonal = false;
      }
    }
    if (nz != 1) op.monomial = false;
  }
  return op;
}

}  // namespace internal

absl::StatusOr<StateVector> StateVector::Basis(int width, uint64_t index,
                                               int cap) {
  if (width < 0 || width > cap) {
    return absl::ResourceExhaustedError(
        absl::StrCat("width ", width, " exceeds the dense simulator cap of ",
                     cap, " (set NNASHOR_MAX_WIDTH to raise it)"));
  }
  if (width < 64 && index >= (uint64_t{1} << width)) {
    return absl::OutOfRangeError("basis index out of range");
  }
  StateVector s(width);
  s.amps_[index] = 1.0;
  return s;
}

double StateVector::Norm() const {
  double n = 0;
  for (const Amplitude& a : amps_) n += std::norm(a);
  return n;
}

void StateVector::ApplyMatrix(const Gate& g) {
  internal::LocalOp op = internal::MakeLocalOp(g);
  const uint64_t size = amps_.size();
  Amplitude* amp = amps_.data();
  if (!op.two_wire) {
    const uint64_t bit = uint64_t{1} << op.wa;
    for (uint64_t i = 0; i < size; ++i) {
      if (i & bit) continue;
      Amplitude a0 = amp[i], a1 = amp[i | bit];
      amp[i] = op.m(0, 0) * a0 + op.m(0, 1) * a1;
      amp[i | bit] = op.m(1, 0) * a0 + op.m(1, 1) * a1;
    }
    return;
  }
  const uint64_t ba = uint64_t{1} << op.wa;
  const uint64_t bb = uint64_t{1} << op.wb;
  if (op.diagonal) {
    Amplitude d[4] = {op.m(0, 0), op.m(1, 1), op.m(2, 2), op.m(3, 3)};
    for (uint64_t i = 0; i < size; ++i) {
      int s = ((i & ba) ? 1 : 0) | ((i & bb) ? 2 : 0);
      if (s != 0) amp[i] *= d[s];
    }
    return;
  }
  const uint64_t off[4] = {0, ba, bb, ba | bb};
  for (uint64_t i = 0; i < size; ++i) {
    if (i & (ba | bb)) continue;
    Amplitude in[4];
    for (int s = 0; s < 4; ++s) in[s] = amp[i | off[s]];
    if (op.monomial) {
      for (int s = 0; s < 4; ++s) {
        amp[i | off[op.perm[s]]] = op.m(op.perm[s], s) * in[s];
      }
    } else {
      for (int r = 0; r < 4; ++r) {
        Amplitude acc = 0;
        for (int s = 0; s < 4; ++s) acc += op.m(r, s) * in[s];
        amp[i | off[r]] = acc;
      }
    }
  }
}

absl::Status StateVector::Apply(const Gate& g,
                                const std::vector<std::string>& bit_names,
                                uint64_t seed, MeasurementRecord* record) {
  if (g.a >= width_ || (Arity(g.kind) == 2 && g.b >= width_)) {
    return absl::OutOfRangeError("gate wire outside the state");
  }
  if (g.kind == GateKind::kMeasure) {
    const std::string& name = bit_names[g.bit];
    const uint64_t bit = uint64_t{1} << g.a;
    double p1 = 0;
    for (uint64_t i = 0; i < amps_.size(); ++i) {
      if (i & bit) p1 += std::norm(amps_[i]);
    }
    double draw = MeasurementDraw(seed, name);
    int value = draw < p1 ? 1 : 0;
    double keep = value ? p1 : 1 - p1;
    double scale = keep > 0 ? 1 / std::sqrt(keep) : 0;
    for (uint64_t i = 0; i < amps_.size(); ++i) {
      bool one = (i & bit) != 0;
      amps_[i] = one == (value == 1) ? amps_[i] * scale : Amplitude(0);
    }
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
  ApplyMatrix(g);
  return absl::OkStatus();
}

absl::Status ApplyCircuit(const Circuit& c, uint64_t seed, StateVector* state,
                          MeasurementRecord* record) {
  if (c.width() > state->width()) {
    return absl::InvalidArgumentError("circuit wider than state");
  }
  for (const Gate& g : c.gates()) {
    NNASHOR_RETURN_IF_ERROR(state->Apply(g, c.bit_names(), seed, record));
  }
  return absl::OkStatus();
}

absl::StatusOr<SimResult> Simulate(const Circuit& c, uint64_t basis_index,
                                   uint64_t seed) {
  absl::StatusOr<StateVector> s = StateVector::Basis(c.width(), basis_index);
  if (!s.ok()) return s.status();
  SimResult result{*std::move(s), {}};
  NNASHOR_RETURN_IF_ERROR(ApplyCircuit(c, seed, &result.state, &result.record));
  return result;
}

double FidelityToBasis(const StateVector& s, uint64_t index) {
  if (index >= s.amplitudes().size()) return 0;
  return std::norm(s.amplitudes()[index]);
}

absl::StatusOr<double> Fidelity(const StateVector& a, const StateVector& b) {
  if (a.width() != b.width()) {
    return absl::InvalidArgumentError("width mismatch");
  }
  Amplitude overlap = 0;
  for (size_t i = 0; i < a.amplitudes().size(); ++i) {
    overlap += std::conj(a.amplitudes()[i]) * b.amplitudes()[i];
  }
  return std::norm(overlap);
}

absl::StatusOr<Eigen::MatrixXcd> UnitaryOf(const Circuit& c) {
  if (c.width() > 10) {
    return absl::InvalidArgumentError("unitary_of is limited to 10 wires");
  }
  for (const Gate& g : c.gates()) {
    if (g.kind == GateKind::kMeasure || g.kind == GateKind::kClassicalRz) {
      return absl::InvalidArgumentError("circuit has classical feedback");
    }
  }
  const int dim = 1 << c.width();
  Eigen::MatrixXcd u(dim, dim);
  for (int k = 0; k < dim; ++k) {
    absl::StatusOr<SimResult> r = Simulate(c, k, 0);
    if (!r.ok()) return r.status();
    for (int i = 0; i < dim; ++i) u(i, k) = r->state.amplitudes()[i];
  }
  return u;
}

absl::Status DumpAmplitudes(const StateVector& s, const std::string& path) {
  static_assert(std::endian::native == std::endian::little,
                "dump format assumes a little-endian host");
  std::ofstream f(path, std::ios::binary);
  if (!f) return absl::UnavailableError(absl::StrCat("cannot write ", path));
  uint64_t w = s.width();
  f.write(reinterpret_cast<const char*>(&w), sizeof(w));
  f.write(
      reinterpret_cast<const char*>(s.amplitudes().data()),
      static_cast<std::streamsize>(s.amplitudes().size() * sizeof(Amplitude)));
  return f ? absl::OkStatus()
           : absl::UnavailableError(absl::StrCat("write failed: ", path));
}

absl::StatusOr<StateVector> LoadAmplitudes(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) return absl::NotFoundError(absl::StrCat("cannot open ", path));
  uint64_t w = 0;
  f.read(reinterpret_cast<char*>(&w), sizeof(w));
  if (!f || w > 40) return absl::DataLossError("bad amplitude header");
  absl::StatusOr<StateVector> s =
      StateVector::Basis(static_cast<int>(w), 0, static_cast<int>(w));
  if (!s.ok()) return s.status();
  auto& amps = s->mutable_amplitudes();
  f.read(reinterpret_cast<char*>(amps.data()),
         static_cast<std::streamsize>(amps.size() * sizeof(Amplitude)));
  if (!f) return absl::DataLossError("truncated amplitude file");
  return s;
}

}  // namespace nnashor
