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

#include "nnashor/analysis.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <random>
#include <thread>
#include <utility>
#include <vector>

#include "json.hpp"
#include "nnashor/check.h"
#include "nnashor/classical.h"

namespace nnashor {
namespace {

BigInt Mask(int bits) { return (BigInt(1) << bits) - 1; }

// Seed of trial i, independent of how trials are split across threads.
uint64_t TrialSeed(uint64_t seed, int64_t i) {
  std::seed_seq seq{static_cast<uint32_t>(seed),
                    static_cast<uint32_t>(seed >> 32), static_cast<uint32_t>(i),
                    static_cast<uint32_t>(i >> 32)};
  std::array<uint32_t, 2> out;
  seq.generate(out.begin(), out.end());
  return (uint64_t{out[0]} << 32) | out[1];
}

BigInt RandomBits(std::mt19937_64& rng, int bits) {
  BigInt v = 0;
  for (int done = 0; done < bits; done += 64) {
    v = (v << 64) | BigInt(rng());
  }
  return v & Mask(bits);
}

// Uniform in [0, bound), bound >= 1.
BigInt RandomBelow(std::mt19937_64& rng, const BigInt& bound) {
  const int bits = static_cast<int>(msb(bound)) + 1;
  for (;;) {
    BigInt v = RandomBits(rng, bits);
    if (v < bound) return v;
  }
}

// Odd with the top bit set.
BigInt RandomModulus(std::mt19937_64& rng, int n) {
  return RandomBits(rng, n) | (BigInt(1) << (n - 1)) | 1;
}

std::vector<BigInt> Multiples(const BigInt& a, const BigInt& m, int n) {
  std::vector<BigInt> xs;
  for (int i = 0; i < n; ++i) xs.push_back((a << i) % m);
  return xs;
}

// Sums fn(i) = {failures, events} over trials on all cores.
template <typename Fn>
std::pair<int64_t, int64_t> CountTrials(int64_t trials, const Fn& fn) {
  const int64_t workers = std::clamp<int64_t>(
      std::thread::hardware_concurrency(), 1, std::max<int64_t>(trials, 1));
  std::vector<std::pair<int64_t, int64_t>> sums(workers, {0, 0});
  std::vector<std::thread> pool;
  for (int64_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (int64_t i = w; i < trials; i += workers) {
        auto [f, e] = fn(i);
        sums[w].first += f;
        sums[w].second += e;
      }
    });
  }
  for (std::thread& t : pool) t.join();
  std::pair<int64_t, int64_t> total = {0, 0};
  for (const auto& [f, e] : sums) {
    total.first += f;
    total.second += e;
  }
  return total;
}

BoundReport Finish(std::string kind, int n, int param, int64_t trials,
                   std::pair<int64_t, int64_t> counts, double bound) {
  BoundReport r;
  r.kind = std::move(kind);
  r.n = n;
  r.param = param;
  r.trials = trials;
  r.failures = counts.first;
  r.events = counts.second;
  r.rate = r.events > 0 ? static_cast<double>(r.failures) / r.events : 0.0;
  r.bound = bound;
  r.pass = r.rate <= r.slack * r.bound;
  return r;
}

}  // namespace

QuotientTrace ClassicalQuotientModel(const std::vector<BigInt>& xs,
                                     const BigInt& y, const BigInt& z,
                                     const BigInt& m, int l0) {
  QuotientTrace t;
  t.xs = xs;
  t.y = y;
  t.z = z;
  t.m = m;
  t.l0 = l0;
  const int n = static_cast<int>(xs.size());
  const int d = n - l0;
  const int K = CeilLog2(n);
  const int l = l0 + K;
  t.s = 0;
  BigInt v = z >> d;
  for (int i = 0; i < n; ++i) {
    if (bit_test(y, i)) {
      t.s += xs[i];
      v += xs[i] >> d;
    }
  }
  v &= Mask(l);
  t.q = t.s / m;
  t.r = t.s - t.q * m;
  const BigInt m_top = (m + Mask(d)) >> d;
  t.qhat = 0;
  for (int k = K; k >= 1; --k) {
    const int L = l0 + k;
    const BigInt sub = m_top << (k - 1);
    BigInt low = v & Mask(L);
    v -= low;
    low = ((low + (BigInt(1) << L)) - (sub & Mask(L))) & Mask(L);
    v += low;
    if (bit_test(low, L - 1)) {
      const BigInt part = v & Mask(L - 1);
      v += ((part + sub) & Mask(L - 1)) - part;
    } else {
      bit_set(t.qhat, k - 1);
    }
  }
  t.window_failure = t.qhat != (t.s + z) / m;
  t.z_overflow = t.r + z >= m;
  return t;
}

BoundReport McWindowError(int n, int l0, int64_t trials, uint64_t seed,
                          XsMode mode) {
  NNASHOR_CHECK(n >= 2 && l0 >= 1 && l0 <= n);
  const int t = CeilLog2(n) + 2;
  auto counts = CountTrials(trials, [&](int64_t i) {
    std::mt19937_64 rng(TrialSeed(seed, i));
    BigInt m;
    std::vector<BigInt> xs;
    if (mode == XsMode::kRandom) {
      m = RandomModulus(rng, n);
      xs = Multiples(1 + RandomBelow(rng, m - 1), m, n);
    } else {
      m = Mask(n);
      xs.assign(n, m - 1);
    }
    const BigInt y = RandomBits(rng, n);
    const BigInt z = RandomBelow(rng, (m + Mask(t)) >> t);
    const QuotientTrace tr = ClassicalQuotientModel(xs, y, z, m, l0);
    return std::pair<int64_t, int64_t>{tr.window_failure ? 1 : 0, 1};
  });
  return Finish("window", n, l0, trials, counts, n * std::ldexp(1.0, -l0));
}

BoundReport McZOverflow(int n, const std::optional<BigInt>& m, int t,
                        int64_t trials, uint64_t seed) {
  NNASHOR_CHECK(n >= 2 && t >= 1);
  auto counts = CountTrials(trials, [&](int64_t i) {
    std::mt19937_64 rng(TrialSeed(seed, i));
    const BigInt mm = m.has_value() ? *m : RandomModulus(rng, n);
    const std::vector<BigInt> xs =
        Multiples(1 + RandomBelow(rng, mm - 1), mm, n);
    const BigInt y = RandomBits(rng, n);
    const BigInt z = RandomBelow(rng, (mm + Mask(t)) >> t);
    BigInt s = 0;
    for (int j = 0; j < n; ++j) {
      if (bit_test(y, j)) s += xs[j];
    }
    return std::pair<int64_t, int64_t>{s % mm + z >= mm ? 1 : 0, 1};
  });
  return Finish("z_overflow", n, t, trials, counts, std::ldexp(1.0, -t));
}

BoundReport McBlockCarry(int n, int t, int64_t trials, uint64_t seed) {
  NNASHOR_CHECK(n >= 2 && t >= 1 && t <= 62);
  auto counts = CountTrials(trials, [&](int64_t i) {
    std::mt19937_64 rng(TrialSeed(seed, i));
    const BigInt m = RandomModulus(rng, n);
    absl::StatusOr<BlockParams> p =
        MakeBlockParams(n, t, Multiples(1 + RandomBelow(rng, m - 1), m, n));
    NNASHOR_CHECK(p.ok());
    const BigInt y = RandomBits(rng, n);
    std::vector<uint64_t> z(p->k);
    for (int j = 0; j < p->k; ++j) {
      z[j] = static_cast<uint64_t>(RandomBits(rng, p->block_size(j)));
    }
    // Exact rounds: block j adds its slice of control r - j plus the carry
    // block j - 1 sent up. A carry that enters block j and leaves it again is
    // the one the prediction of h_j misses.
    int64_t failures = 0, events = 0;
    const int N = p->num_controls();
    for (int r = 0; r < p->num_rounds(); ++r) {
      uint64_t carry = 0;
      for (int j = 0; j < p->k; ++j) {
        const int c = r - j;
        const bool active = c >= 0 && c < N;
        const uint64_t a = active && bit_test(y, c) ? p->slices[c][j] : 0;
        const uint64_t full = (uint64_t{1} << p->block_size(j)) - 1;
        const bool predicts = active && j + 1 < p->k;
        if (predicts) {
          ++events;
          if (carry && z[j] + a == full) ++failures;
        }
        const uint64_t sum = z[j] + a + carry;
        z[j] = sum & full;
        carry = predicts ? sum >> p->block_size(j) : 0;
      }
    }
    return std::pair<int64_t, int64_t>{failures, events};
  });
  return Finish("block_carry", n, t, trials, counts, std::ldexp(1.0, -t));
}

std::string BoundReportJson(const BoundReport& r) {
  nlohmann::json j = {{"kind", r.kind},     {"n", r.n},
                      {"param", r.param},   {"trials", r.trials},
                      {"events", r.events}, {"failures", r.failures},
                      {"rate", r.rate},     {"bound", r.bound},
                      {"slack", r.slack},   {"pass", r.pass}};
  return j.dump(2);
}

}  // namespace nnashor
