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

#include "nnashor/reversible.h"

#include <utility>

#include "absl/strings/str_cat.h"
#include "nnashor/check.h"

namespace nnashor {
namespace {

struct Wire {
  uint8_t v = 0;
  int id = 0;     // Logical identity; follows swaps.
  int pend = -1;  // Open pseudo-Toffoli window on this wire.
};

struct Window {
  int ctrl_id;
  uint8_t ctrl_val;
  uint8_t flips = 0;
};

class Machine {
 public:
  explicit Machine(const BitString& in) : w_(in.size()) {
    for (size_t i = 0; i < in.size(); ++i) {
      w_[i].v = in[i] & 1;
      w_[i].id = static_cast<int>(i);
    }
  }

  absl::Status Run(const Circuit& c, ReversibleResult* out) {
    for (size_t i = 0; i < c.gates().size(); ++i) {
      absl::Status st = Step(c, c.gates()[i], out);
      if (!st.ok()) {
        return absl::Status(st.code(),
                            absl::StrCat("gate #", i, ": ", st.message()));
      }
    }
    for (size_t i = 0; i < w_.size(); ++i) {
      if (w_[i].pend >= 0) {
        return absl::FailedPreconditionError(
            absl::StrCat("pseudo-Toffoli window left open on wire ", i));
      }
    }
    out->bits.resize(w_.size());
    for (size_t i = 0; i < w_.size(); ++i) out->bits[i] = w_[i].v;
    return absl::OkStatus();
  }

 private:
  absl::Status Plain(int wire) {
    if (w_[wire].pend >= 0) {
      return absl::FailedPreconditionError(absl::StrCat(
          "wire ", wire, " used as a control inside a pseudo-Toffoli window"));
    }
    return absl::OkStatus();
  }

  absl::Status CNot(int c, int t) {
    NNASHOR_RETURN_IF_ERROR(Plain(c));
    if (w_[t].pend >= 0) {
      windows_[w_[t].pend].flips ^= w_[c].v;
    } else {
      w_[t].v ^= w_[c].v;
    }
    return absl::OkStatus();
  }

  absl::Status Open(int t, int a) {
    NNASHOR_RETURN_IF_ERROR(Plain(t));
    NNASHOR_RETURN_IF_ERROR(Plain(a));
    w_[t].pend = static_cast<int>(windows_.size());
    windows_.push_back({w_[a].id, w_[a].v});
    return absl::OkStatus();
  }

  absl::Status Close(int t, int a) {
    if (w_[t].pend < 0) {
      return absl::FailedPreconditionError(
          absl::StrCat("closing half on wire ", t, " without an open window"));
    }
    const Window& win = windows_[w_[t].pend];
    if (win.ctrl_id != w_[a].id || win.ctrl_val != w_[a].v) {
      return absl::FailedPreconditionError(
          "pseudo-Toffoli halves disagree on their control");
    }
    if (win.ctrl_val && win.flips) w_[t].v ^= 1;
    w_[t].pend = -1;
    return absl::OkStatus();
  }

  absl::Status Step(const Circuit& c, const Gate& g, ReversibleResult* out) {
    switch (g.kind) {
      case GateKind::kX:
        NNASHOR_RETURN_IF_ERROR(Plain(g.a));
        w_[g.a].v ^= 1;
        return absl::OkStatus();
      case GateKind::kCNot:
        return CNot(g.a, g.b);
      case GateKind::kSwap:
        std::swap(w_[g.a], w_[g.b]);
        return absl::OkStatus();
      case GateKind::kFusedCNotSwap:
        NNASHOR_RETURN_IF_ERROR(CNot(g.a, g.b));
        std::swap(w_[g.a], w_[g.b]);
        return absl::OkStatus();
      case GateKind::kPtHalfA:
        return Open(g.a, g.b);
      case GateKind::kPtHalfB:
        return Close(g.a, g.b);
      case GateKind::kPtHalfBCNot:
        NNASHOR_RETURN_IF_ERROR(Close(g.a, g.b));
        return CNot(g.a, g.b);
      case GateKind::kCNotPtHalfA:
        NNASHOR_RETURN_IF_ERROR(CNot(g.a, g.b));
        return Open(g.a, g.b);
      case GateKind::kMeasure:
        NNASHOR_RETURN_IF_ERROR(Plain(g.a));
        out->measured[c.bit_names()[g.bit]] = w_[g.a].v;
        return absl::OkStatus();
      default:
        return absl::InvalidArgumentError(
            absl::StrCat("non-classical gate ", Mnemonic(g.kind)));
    }
  }

  std::vector<Wire> w_;
  std::vector<Window> windows_;
};

}  // namespace

absl::StatusOr<ReversibleResult> SimulateReversible(const Circuit& c,
                                                    BitString input) {
  if (static_cast<int>(input.size()) < c.width()) {
    input.resize(c.width(), 0);
  }
  ReversibleResult out;
  Machine m(input);
  NNASHOR_RETURN_IF_ERROR(m.Run(c, &out));
  return out;
}

uint64_t ReadRegister(const BitString& bits,
                      const std::vector<int>& positions) {
  uint64_t v = 0;
  for (size_t i = 0; i < positions.size() && i < 64; ++i) {
    if (bits[positions[i]] & 1) v |= uint64_t{1} << i;
  }
  return v;
}

void WriteRegister(BitString* bits, const std::vector<int>& positions,
                   uint64_t value) {
  for (size_t i = 0; i < positions.size(); ++i) {
    (*bits)[positions[i]] = i < 64 ? (value >> i) & 1 : 0;
  }
}

}  // namespace nnashor
