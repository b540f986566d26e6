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

#ifndef NNASHOR_CIRCUIT_H_
#define NNASHOR_CIRCUIT_H_

#include <map>
#include <string>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "nnashor/gate.h"

namespace nnashor {

// Where a logical register lives. positions[i] holds bit i (LSB first).
// `reversed` is set when positions run downward along the line.
struct RegisterLayout {
  std::vector<int> positions;
  bool reversed = false;

  bool operator==(const RegisterLayout& o) const {
    return positions == o.positions && reversed == o.reversed;
  }
};

RegisterLayout MakeLayout(std::vector<int> positions);

using Layout = std::map<std::string, RegisterLayout>;

class Circuit {
 public:
  explicit Circuit(int width = 0) : width_(width) {}

  int width() const { return width_; }
  const std::vector<Gate>& gates() const { return gates_; }
  const std::vector<std::string>& bit_names() const { return bit_names_; }
  const Layout& layout_in() const { return layout_in_; }
  const Layout& layout_out() const { return layout_out_; }
  bool classical() const { return classical_; }

  void set_classical(bool c) { classical_ = c; }
  absl::Status SetLayoutIn(Layout layout);
  absl::Status SetLayoutOut(Layout layout);

  // Checks operand range and distinctness before appending.
  absl::Status Append(Gate g);
  // Measure and ClassicalRz take a bit name, interned into bit_names().
  absl::Status Measure(int w, const std::string& bit);
  absl::Status ClassicalRz(int w, DyadicPhase p, const std::string& bit);

  // Builder conveniences that abort on misuse.
  Circuit& Add(Gate g);
  Circuit& AddMeasure(int w, const std::string& bit);
  Circuit& AddClassicalRz(int w, DyadicPhase p, const std::string& bit);

  int InternBit(const std::string& name);

 private:
  int width_;
  bool classical_ = false;
  std::vector<Gate> gates_;
  std::vector<std::string> bit_names_;
  Layout layout_in_;
  Layout layout_out_;
};

struct CostModel {
  bool nearest_neighbor = true;
  bool fanout_allowed = false;
};

struct ResourceReport {
  int depth = 0;
  int width = 0;
  int size = 0;
};

// Indices of 2-wire gates whose operands are not adjacent.
std::vector<int> ValidateNearestNeighbor(const Circuit& c);

// ASAP layer count. Each wire takes part in at most one unit per layer.
// A run of single-wire unitaries on a wire rides along with the adjacent
// 2-wire gate on that wire (the following one, else the preceding one) and
// costs nothing; a run with no such neighbor costs one layer. Measure and
// ClassicalRz always cost one layer and end runs.
absl::StatusOr<int> ComputeDepth(const Circuit& c, const CostModel& model);
// Same layering, returning the layer (1-based) of each gate; absorbed gates
// report the layer of the gate that carries them.
absl::StatusOr<std::vector<int>> ScheduleLayers(const Circuit& c,
                                                const CostModel& model);
int CountSize(const Circuit& c, const CostModel& model);
// Highest wire index used plus one.
int UsedWidth(const Circuit& c);
absl::StatusOr<ResourceReport> MeasureResources(const Circuit& c,
                                                const CostModel& model);

absl::StatusOr<Circuit> Invert(const Circuit& c);
Circuit Mirror(const Circuit& c);
absl::StatusOr<Circuit> Concat(const Circuit& first, const Circuit& second);

}  // namespace nnashor

#endif  // NNASHOR_CIRCUIT_H_
