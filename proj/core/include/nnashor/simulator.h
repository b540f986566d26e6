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

#ifndef NNASHOR_SIMULATOR_H_
#define NNASHOR_SIMULATOR_H_

#include <complex>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "Eigen/Dense"
#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "nnashor/circuit.h"

namespace nnashor {

using Amplitude = std::complex<double>;

inline constexpr int kDefaultWidthCap = 26;

// Width cap for dense simulation: NNASHOR_MAX_WIDTH if set, else 26.
int WidthCap();

struct MeasurementRecord {
  struct Entry {
    int value = 0;
    double draw = 0.0;  // Uniform draw in [0, 1) compared against P(1).
    double p1 = 0.0;
  };
  std::map<std::string, Entry> bits;

  std::string ToJson() const;
};

// Uniform [0, 1) value derived from (seed, bit name) alone, so measurement
// outcomes do not depend on the order in which bits are measured.
double MeasurementDraw(uint64_t seed, const std::string& bit);

// The 4x4 matrix of a 2-wire gate on (g.a, g.b), basis index bit0 = g.a,
// bit1 = g.b. For single-wire gates the top-left 2x2 block is used.
Eigen::Matrix4cd GateMatrix(const Gate& g);

// Dense state over `width` wires; wire 0 is the least significant bit.
class StateVector {
 public:
  static absl::StatusOr<StateVector> Basis(int width, uint64_t index,
                                           int cap = WidthCap());

  int width() const { return width_; }
  const std::vector<Amplitude>& amplitudes() const { return amps_; }
  std::vector<Amplitude>& mutable_amplitudes() { return amps_; }
  double Norm() const;

  // Applies one gate. Measure and ClassicalRz use `record` and `seed`.
  absl::Status Apply(const Gate& g, const std::vector<std::string>& bit_names,
                     uint64_t seed, MeasurementRecord* record);

 private:
  explicit StateVector(int width)
      : width_(width), amps_(uint64_t{1} << width) {}
  void ApplyMatrix(const Gate& g);

  int width_;
  std::vector<Amplitude> amps_;
};

struct SimResult {
  StateVector state;
  MeasurementRecord record;
};

absl::Status ApplyCircuit(const Circuit& c, uint64_t seed, StateVector* state,
                          MeasurementRecord* record);
absl::StatusOr<SimResult> Simulate(const Circuit& c, uint64_t basis_index,
                                   uint64_t seed);

double FidelityToBasis(const StateVector& s, uint64_t index);
absl::StatusOr<double> Fidelity(const StateVector& a, const StateVector& b);

// Column k is the output of basis state k. Width at most 10, no Measure.
absl::StatusOr<Eigen::MatrixXcd> UnitaryOf(const Circuit& c);

// 8-byte little-endian width, then 2^w (re, im) little-endian doubles.
absl::Status DumpAmplitudes(const StateVector& s, const std::string& path);
absl::StatusOr<StateVector> LoadAmplitudes(const std::string& path);

// Sparse state (nonzero amplitudes sorted by index) for wide circuits whose
// support stays small. Width <= 64.
class SparseState {
 public:
  static absl::StatusOr<SparseState> Basis(int width, uint64_t index);

  int width() const { return width_; }
  size_t support() const { return amps_.size(); }
  double Norm() const;
  Amplitude Get(uint64_t index) const;
  const std::vector<std::pair<uint64_t, Amplitude>>& entries() const {
    return amps_;
  }

  absl::Status Apply(const Gate& g, const std::vector<std::string>& bit_names,
                     uint64_t seed, MeasurementRecord* record);

 private:
  explicit SparseState(int width) : width_(width) {}

  int width_;
  std::vector<std::pair<uint64_t, Amplitude>> amps_;  // Sorted by index.
};

absl::Status ApplyCircuit(const Circuit& c, uint64_t seed, SparseState* state,
                          MeasurementRecord* record);

}  // namespace nnashor

#endif  // NNASHOR_SIMULATOR_H_
