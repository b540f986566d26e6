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

#include "nnashor/params.h"

#include <algorithm>
#include <random>

#include "absl/strings/str_cat.h"
#include "boost/integer/mod_inverse.hpp"

namespace nnashor {

int CeilLog2(int64_t n) {
  int k = 0;
  while ((int64_t{1} << k) < n) ++k;
  return k;
}

int DefaultWindow(int n) {
  // ceil(3 log2 n) = ceil(log2 n^3).
  int64_t cube = static_cast<int64_t>(n) * n * n;
  return std::min(n, CeilLog2(cube) + 2);
}

BigInt Gcd(const BigInt& a, const BigInt& b) {
  return boost::multiprecision::gcd(a, b);
}

absl::StatusOr<BigInt> ModInverse(const BigInt& a, const BigInt& m) {
  if (m <= 1 || Gcd(a, m) != 1) {
    return absl::InvalidArgumentError(
        absl::StrCat(a.str(), " has no inverse modulo ", m.str()));
  }
  BigInt r = boost::integer::mod_inverse(BigInt(((a % m) + m) % m), m);
  return r;
}

BigInt PowMod(const BigInt& base, const BigInt& exp, const BigInt& m) {
  return boost::multiprecision::powm(base, exp, m);
}

BigInt DrawZ(const BigInt& m, int t, uint64_t seed) {
  // Largest allowed value: z * 2^t < m.
  BigInt hi = (m - 1) >> t;
  if (hi <= 0) return 0;
  std::mt19937_64 rng(seed);
  const unsigned bits = boost::multiprecision::msb(hi) + 1;
  while (true) {
    BigInt v = 0;
    for (unsigned got = 0; got < bits; got += 64) {
      v = (v << 64) | BigInt(rng());
    }
    v &= (BigInt(1) << bits) - 1;
    if (v <= hi) return v;
  }
}

absl::Status Validate(const MultiplierParams& p) {
  if (p.n < 2) return absl::InvalidArgumentError("n must be at least 2");
  if (p.a <= 0 || p.a >= p.m || p.m >= (BigInt(1) << p.n)) {
    return absl::InvalidArgumentError(
        absl::StrCat("need 0 < a < m < 2^n; got a=", p.a.str(),
                     " m=", p.m.str(), " n=", p.n));
  }
  if (Gcd(p.a, p.m) != 1) {
    return absl::InvalidArgumentError(
        absl::StrCat("gcd(", p.a.str(), ", ", p.m.str(), ") != 1"));
  }
  if (p.l0 < 1 || p.l0 > p.n) {
    return absl::InvalidArgumentError(
        absl::StrCat("window l0=", p.l0, " outside [1, ", p.n, "]"));
  }
  if (p.exact_mode && p.l0 != p.n) {
    return absl::InvalidArgumentError("exact mode requires l0 = n");
  }
  if (p.l != p.l0 + CeilLog2(p.n)) {
    return absl::InvalidArgumentError(absl::StrCat(
        "l=", p.l, " must equal l0 + ceil(log2 n) = ", p.l0 + CeilLog2(p.n)));
  }
  if (p.t < 0 || p.z < 0 || (p.z << p.t) >= p.m) {
    return absl::InvalidArgumentError(
        absl::StrCat("z=", p.z.str(), " violates z < m/2^", p.t));
  }
  return absl::OkStatus();
}

absl::StatusOr<MultiplierParams> MakeMultiplierParams(
    int n, const BigInt& a, const BigInt& m, const MultiplierOptions& opt) {
  MultiplierParams p;
  p.n = n;
  p.a = a;
  p.m = m;
  p.variant = opt.variant;
  p.exact_mode = opt.exact_mode;
  p.l0 = opt.exact_mode ? n : opt.l0.value_or(DefaultWindow(n));
  p.l = p.l0 + CeilLog2(n);
  p.t = opt.t.value_or(CeilLog2(n) + 2);
  p.z = opt.z.has_value() ? *opt.z : DrawZ(m, p.t, opt.seed);
  if (absl::Status st = Validate(p); !st.ok()) return st;
  return p;
}

XTable MakeXTable(const BigInt& a, const BigInt& m, int n, int l0) {
  XTable t;
  t.n = n;
  t.shift = n - l0;
  BigInt x = a % m;
  for (int i = 0; i < n; ++i) {
    t.x.push_back(x);
    t.x_hat.push_back((x >> t.shift) << t.shift);
    x = (x * 2) % m;
  }
  return t;
}

absl::StatusOr<std::vector<RoundConstants>> PrecomputeConstants(const BigInt& g,
                                                                const BigInt& m,
                                                                int n) {
  if (m < 2 || m >= (BigInt(1) << n)) {
    return absl::InvalidArgumentError(
        absl::StrCat("modulus ", m.str(), " must be in [2, 2^", n, ")"));
  }
  if (Gcd(g, m) != 1) {
    return absl::InvalidArgumentError(
        absl::StrCat("gcd(", g.str(), ", ", m.str(), ") != 1"));
  }
  std::vector<RoundConstants> out;
  BigInt a = ((g % m) + m) % m;
  for (int i = 0; i < 2 * n; ++i) {
    absl::StatusOr<BigInt> inv = ModInverse(a, m);
    if (!inv.ok()) return inv.status();
    out.push_back({a, *inv});
    a = (a * a) % m;
  }
  return out;
}

}  // namespace nnashor
