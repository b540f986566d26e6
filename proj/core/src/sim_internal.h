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

#ifndef NNASHOR_SRC_SIM_INTERNAL_H_
#define NNASHOR_SRC_SIM_INTERNAL_H_

#include "Eigen/Dense"
#include "nnashor/gate.h"

namespace nnashor {
namespace internal {

// A gate's local matrix plus its sparsity shape.
struct LocalOp {
  bool two_wire = false;
  int wa = 0;
  int wb = -1;
  Eigen::Matrix4cd m;
  bool monomial = false;  // One nonzero per column.
  bool diagonal = false;
  int perm[4] = {0, 1, 2, 3};  // Row of the nonzero in each column.
};

LocalOp MakeLocalOp(const Gate& g);

}  // namespace internal
}  // namespace nnashor

#endif  // NNASHOR_SRC_SIM_INTERNAL_H_
