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

#ifndef NNASHOR_GATE_H_
#define NNASHOR_GATE_H_

#include <string>

#include "nnashor/dyadic_phase.h"

namespace nnashor {

enum class GateKind {
  kH,
  kX,
  kRz,      // diag(1, e^{2 pi i p}) on a.
  kCPhase,  // Symmetric controlled phase on (a, b).
  kCNot,    // Control a, target b.
  kSwap,
  // Controlled phase then swap of the same pair. One unit.
  kFusedCPhaseSwap,
  // Same unitary as kFusedCPhaseSwap; a is the control of a rotation on b.
  kFusedCRzSwap,
  // CNOT a->b, then swap. One unit.
  kFusedCNotSwap,
  // Halves of the pseudo-Toffoli on target a and control b. HalfA is
  // M = Ry(pi/4)_a CNOT(b->a) Ry(pi/4)_a and HalfB is its adjoint.
  kPtHalfA,
  kPtHalfB,
  // HalfB followed by CNOT(a->b). One unit.
  kPtHalfBCNot,
  // CNOT(a->b) followed by HalfA. Adjoint of kPtHalfBCNot.
  kCNotPtHalfA,
  kMeasure,      // Writes classical bit `bit`.
  kClassicalRz,  // Rz on a, applied iff classical bit `bit` is 1.
};

struct Gate {
  GateKind kind = GateKind::kH;
  int a = 0;
  int b = -1;
  DyadicPhase phase;
  int bit = -1;  // Index into the owning circuit's bit-name table.

  static Gate Make(GateKind k, int a, int b = -1, DyadicPhase p = {}) {
    Gate g;
    g.kind = k;
    g.a = a;
    g.b = b;
    g.phase = p;
    return g;
  }
  static Gate H(int w) { return Make(GateKind::kH, w); }
  static Gate X(int w) { return Make(GateKind::kX, w); }
  static Gate Rz(int w, DyadicPhase p) { return Make(GateKind::kRz, w, -1, p); }
  static Gate CPhase(int c, int t, DyadicPhase p) {
    return Make(GateKind::kCPhase, c, t, p);
  }
  static Gate CNot(int c, int t) { return Make(GateKind::kCNot, c, t); }
  static Gate Swap(int a, int b) { return Make(GateKind::kSwap, a, b); }
  static Gate Fcps(int a, int b, DyadicPhase p) {
    return Make(GateKind::kFusedCPhaseSwap, a, b, p);
  }
  static Gate Fcrzs(int c, int t, DyadicPhase p) {
    return Make(GateKind::kFusedCRzSwap, c, t, p);
  }
  static Gate Fcxs(int c, int t) {
    return Make(GateKind::kFusedCNotSwap, c, t);
  }
  static Gate PtHalfA(int t, int c) { return Make(GateKind::kPtHalfA, t, c); }
  static Gate PtHalfB(int t, int c) { return Make(GateKind::kPtHalfB, t, c); }
  static Gate PtHalfBCNot(int t, int c) {
    return Make(GateKind::kPtHalfBCNot, t, c);
  }
  static Gate CNotPtHalfA(int t, int c) {
    return Make(GateKind::kCNotPtHalfA, t, c);
  }

  bool operator==(const Gate& o) const {
    return kind == o.kind && a == o.a && b == o.b && phase == o.phase &&
           bit == o.bit;
  }
  bool operator!=(const Gate& o) const { return !(*this == o); }
};

int Arity(GateKind kind);
bool HasPhase(GateKind kind);
// Single-wire unitaries; these may be absorbed by an adjacent 2-wire gate.
bool IsSingleWireUnitary(GateKind kind);
// Gates that move the logical content of a onto b and vice versa.
bool SwapsOperands(GateKind kind);
// Permutation gates (computational basis states map to basis states, up to
// phase for the pseudo-Toffoli halves used in matched pairs).
bool IsClassical(GateKind kind);
const char* Mnemonic(GateKind kind);

// Adjoint of a measurement-free gate.
Gate Adjoint(const Gate& g);

}  // namespace nnashor

#endif  // NNASHOR_GATE_H_
