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

#ifndef NNASHOR_PARAMS_H_
#define NNASHOR_PARAMS_H_

#include <cstdint>
#include <optional>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "nnashor/dyadic_phase.h"

namespace nnashor {

enum class Variant { kNearestNeighbor, kGeneral };

// ceil(log2(n)) for n >= 1.
int CeilLog2(int64_t n);
// Quotient window: min(n, ceil(3 log2 n) + 2).
int DefaultWindow(int n);

BigInt Gcd(const BigInt& a, const BigInt& b);
absl::StatusOr<BigInt> ModInverse(const BigInt& a, const BigInt& m);
BigInt PowMod(const BigInt& base, const BigInt& exp, const BigInt& m);

struct MultiplierParams {
  int n = 0;
  BigInt a;
  BigInt m;
  BigInt z;    // Random offset, z < m / 2^t.
  int l0 = 0;  // Quotient window.
  int l = 0;   // Quotient register size, l0 + ceil(log2 n).
  int t = 0;   // z headroom exponent.
  Variant variant = Variant::kNearestNeighbor;
  bool exact_mode = false;  // Forces l0 = n.

  int K() const { return l - l0; }
  int shift() const { return n - l0; }
};

struct MultiplierOptions {
  std::optional<int> l0;
  std::optional<int> t;     // Default ceil(log2 n) + 2.
  std::optional<BigInt> z;  // Default: drawn from `seed`.
  uint64_t seed = 1;
  Variant variant = Variant::kNearestNeighbor;
  bool exact_mode = false;
};

// Fills in defaults and validates.
absl::StatusOr<MultiplierParams> MakeMultiplierParams(
    int n, const BigInt& a, const BigInt& m, const MultiplierOptions& opt = {});
absl::Status Validate(const MultiplierParams& p);

// Uniform z in [0, ceil(m / 2^t)), from a seeded generator.
BigInt DrawZ(const BigInt& m, int t, uint64_t seed);

struct XTable {
  int n = 0;
  int shift = 0;              // n - l0.
  std::vector<BigInt> x;      // 2^i a mod m.
  std::vector<BigInt> x_hat;  // x rounded down to a multiple of 2^shift.
};
XTable MakeXTable(const BigInt& a, const BigInt& m, int n, int l0);

struct RoundConstants {
  BigInt a;      // g^(2^i) mod m.
  BigInt a_inv;  // Its inverse mod m.
};
// Constants for rounds 0 .. 2n-1.
absl::StatusOr<std::vector<RoundConstants>> PrecomputeConstants(const BigInt& g,
                                                                const BigInt& m,
                                                                int n);

}  // namespace nnashor

#endif  // NNASHOR_PARAMS_H_
