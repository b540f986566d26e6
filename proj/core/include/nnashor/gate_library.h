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

#ifndef NNASHOR_GATE_LIBRARY_H_
#define NNASHOR_GATE_LIBRARY_H_

#include <optional>

#include "absl/status/statusor.h"
#include "nnashor/circuit.h"

namespace nnashor {

struct QftSpec {
  int n = 1;
  bool inverse = false;
  // Rotations by 1/2^e with e > cutoff are dropped (their swaps stay).
  std::optional<int> approx_cutoff;
  // false: the swap-free linear-depth form, which is not nearest-neighbor.
  bool include_swaps = true;
};

// Default cutoff for approximate transforms: ceil(log2 n) + 2.
int DefaultQftCutoff(int n);

// Register "x" enters with bit i on wire i. Fourier element j (carrying
// u/2^(j+1) of a turn) leaves on layout_out["x"].positions[j]; with swaps
// that is wire n-1-j.
Circuit BuildQft(const QftSpec& spec);

// Toffoli v ^= u*w with phase -1 on |u v w> = |0 1 1>, as a half on (v, u),
// a CNOT w->v, and the closing half. Wires must be adjacent in the order
// u, v, w (either direction).
absl::StatusOr<Circuit> BuildPseudoToffoli(int u, int v, int w, int width);

// Control c on wire 0, then X_0, Y_0, ..., X_{n-1}, Y_{n-1}. Swaps X and Y
// when c = 1, assuming Y = 0. c leaves at the far end.
Circuit BuildControlledSwapCascade(int n);

// Block order B_0..B_{n-1} Y_0..Y_{n-1} to B_0 Y_0 B_1 Y_1 ... and back.
Circuit BuildMesh(int n);
Circuit BuildUnmesh(int n);

// Copies wire 0 into wires 1..n (assumed zero) with a CNOT tree. Not
// nearest-neighbor.
Circuit BuildFanout(int n);

}  // namespace nnashor

#endif  // NNASHOR_GATE_LIBRARY_H_
