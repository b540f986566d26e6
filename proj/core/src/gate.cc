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

#include "nnashor/gate.h"

#include "nnashor/check.h"

namespace nnashor {

int Arity(GateKind kind) {
  switch (kind) {
    case GateKind::kH:
    case GateKind::kX:
    case GateKind::kRz:
    case GateKind::kMeasure:
    case GateKind::kClassicalRz:
      return 1;
    default:
      return 2;
  }
}

bool HasPhase(GateKind kind) {
  switch (kind) {
    case GateKind::kRz:
    case GateKind::kCPhase:
    case GateKind::kFusedCPhaseSwap:
    case GateKind::kFusedCRzSwap:
    case GateKind::kClassicalRz:
      return true;
    default:
      return false;
  }
}

bool IsSingleWireUnitary(GateKind kind) {
  return kind == GateKind::kH || kind == GateKind::kX || kind == GateKind::kRz;
}

bool SwapsOperands(GateKind kind) {
  return kind == GateKind::kSwap || kind == GateKind::kFusedCPhaseSwap ||
         kind == GateKind::kFusedCRzSwap || kind == GateKind::kFusedCNotSwap;
}

bool IsClassical(GateKind kind) {
  switch (kind) {
    case GateKind::kX:
    case GateKind::kCNot:
    case GateKind::kSwap:
    case GateKind::kFusedCNotSwap:
    case GateKind::kPtHalfA:
    case GateKind::kPtHalfB:
    case GateKind::kPtHalfBCNot:
    case GateKind::kCNotPtHalfA:
      return true;
    default:
      return false;
  }
}

const char* Mnemonic(GateKind kind) {
  switch (kind) {
    case GateKind::kH:
      return "h";
    case GateKind::kX:
      return "x";
    case GateKind::kRz:
      return "rz";
    case GateKind::kCPhase:
      return "cphase";
    case GateKind::kCNot:
      return "cnot";
    case GateKind::kSwap:
      return "swap";
    case GateKind::kFusedCPhaseSwap:
      return "fcps";
    case GateKind::kFusedCRzSwap:
      return "fcrzs";
    case GateKind::kFusedCNotSwap:
      return "fcxs";
    case GateKind::kPtHalfA:
      return "ptha";
    case GateKind::kPtHalfB:
      return "pthb";
    case GateKind::kPtHalfBCNot:
      return "pthbx";
    case GateKind::kCNotPtHalfA:
      return "xptha";
    case GateKind::kMeasure:
      return "measure";
    case GateKind::kClassicalRz:
      return "crz";
  }
  return "?";
}

Gate Adjoint(const Gate& g) {
  Gate r = g;
  switch (g.kind) {
    case GateKind::kRz:
    case GateKind::kCPhase:
    case GateKind::kFusedCPhaseSwap:
    case GateKind::kFusedCRzSwap:
    case GateKind::kClassicalRz:
      r.phase = -g.phase;
      break;
    case GateKind::kFusedCNotSwap:
      // (SWAP CX(a->b))^dag = CX(a->b) SWAP = SWAP CX(b->a).
      r.a = g.b;
      r.b = g.a;
      break;
    case GateKind::kPtHalfA:
      r.kind = GateKind::kPtHalfB;
      break;
    case GateKind::kPtHalfB:
      r.kind = GateKind::kPtHalfA;
      break;
    case GateKind::kPtHalfBCNot:
      r.kind = GateKind::kCNotPtHalfA;
      break;
    case GateKind::kCNotPtHalfA:
      r.kind = GateKind::kPtHalfBCNot;
      break;
    case GateKind::kMeasure:
      NNASHOR_CHECK(false && "measurement has no adjoint");
      break;
    default:
      break;
  }
  return r;
}

}  // namespace nnashor
