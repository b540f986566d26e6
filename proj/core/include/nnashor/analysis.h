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

// Integer models of the approximate quotient and the block carries, Monte
// Carlo failure rates against their bounds, and resource sweeps with fitted
// coefficients.

#ifndef NNASHOR_ANALYSIS_H_
#define NNASHOR_ANALYSIS_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "nnashor/circuit.h"
#include "nnashor/params.h"

namespace nnashor {

// One quotient estimate, evaluated exactly.
struct QuotientTrace {
  std::vector<BigInt> xs;
  BigInt y;  // Control bits, y_i = bit i.
  BigInt z;
  BigInt m;
  int l0 = 0;
  BigInt s;     // sum_i y_i x_i.
  BigInt q;     // floor(s / m).
  BigInt r;     // s - q m.
  BigInt qhat;  // What the quotient loop extracts from the top bits.
  // qhat != floor((s + z) / m): the truncated window got it wrong.
  bool window_failure = false;
  // floor((s + z) / m) != q, i.e. r + z >= m.
  bool z_overflow = false;
};

// xs.size() is n; the loop runs K = ceil(log2 n) steps on l0 + K bits.
QuotientTrace ClassicalQuotientModel(const std::vector<BigInt>& xs,
                                     const BigInt& y, const BigInt& z,
                                     const BigInt& m, int l0);

struct BoundReport {
  std::string kind;
  int n = 0;
  int param = 0;  // l0 or t.
  int64_t trials = 0;
  int64_t events = 0;  // Denominator of the rate; trials unless per block.
  int64_t failures = 0;
  double rate = 0;
  double bound = 0;
  double slack = 2;
  bool pass = false;  // rate <= slack * bound.
};

// How the addends of a trial are drawn.
enum class XsMode {
  kRandom,   // x_i = 2^i a mod m for random odd n-bit m and a < m.
  kAllOnes,  // Worst case: every x_i has all low bits set.
};

// Window failures of the quotient estimate per multiplication; bound
// n 2^-l0. z is uniform in [0, ceil(m / 2^t)) with the default t.
BoundReport McWindowError(int n, int l0, int64_t trials, uint64_t seed,
                          XsMode mode = XsMode::kRandom);
// r + z >= m per multiplication with z uniform in [0, ceil(m / 2^t)); bound
// 2^-t. Without m a random odd n-bit modulus is drawn per trial.
BoundReport McZOverflow(int n, const std::optional<BigInt>& m, int t,
                        int64_t trials, uint64_t seed);
// Carries that run through a whole block, which the predicted h_j misses,
// per block step that predicts; bound 2^-t. Counted on exact sums, so one
// miss does not disturb the later steps.
BoundReport McBlockCarry(int n, int t, int64_t trials, uint64_t seed);

std::string BoundReportJson(const BoundReport& r);

enum class SweepBuilder {
  kQft,
  kNestedAdder,
  kNestedAdderConstantZ,
  kSwapCascade,
  kMultiplier,
  kGeneralMultiplier,
  kExponentiationRound,
  kClassicalMultiplier,
};
absl::StatusOr<SweepBuilder> ParseSweepBuilder(const std::string& name);
std::string SweepBuilderName(SweepBuilder b);

// Formula depth, width and size of a builder (sweep names plus
// "exponentiation" and "general_exponentiation" for whole 2n-round runs);
// fields without a closed form stay empty.
struct Prediction {
  std::optional<double> depth, width, size;
};
Prediction PredictResources(const std::string& builder, int n, int l);

struct SweepParams {
  std::optional<int> l0;
  bool exact_mode = false;
  uint64_t seed = 1;
};

struct SweepRow {
  int n = 0;
  int l = 0;  // Quotient register size where there is one.
  ResourceReport measured;
  // Formula values; absent where the formula has no closed form.
  std::optional<double> depth, width, size;
  // Leading depth coefficient with the known lower-order terms removed, and
  // size / n^2, where they apply.
  std::optional<double> depth_coefficient, size_coefficient;
};

struct CoefficientFit {
  std::string name;
  double value = 0;
  // Band around the formula's coefficient; none where there is no formula.
  std::optional<double> lo, hi;
  bool pass = true;
};

struct BoundCheck {
  std::string name;
  int n = 0;
  double value = 0;
  double lo = 0, hi = 0;
  bool pass = false;
};

struct SweepReport {
  SweepBuilder builder;
  std::vector<SweepRow> rows;
  std::vector<CoefficientFit> fits;
  std::vector<BoundCheck> checks;
  bool pass() const;
};

// Builds each size, measures it and fits the formula's coefficients by
// least squares once there are as many sizes as the form has terms. Exact
// formulas are checked at every size; leading-coefficient bands from
// n = 256 up, where the lower-order terms fit inside them.
absl::StatusOr<SweepReport> SweepResources(SweepBuilder b,
                                           const std::vector<int>& ns,
                                           const SweepParams& p = {});

// {"builder", "rows": [{builder, n, l, depth, width, size, predicted,
// depth_coefficient, size_coefficient, bound_checks}], "coefficient_fits",
// "pass"}.
std::string SweepReportJson(const SweepReport& r);
std::string SweepReportCsv(const SweepReport& r);

}  // namespace nnashor

#endif  // NNASHOR_ANALYSIS_H_
