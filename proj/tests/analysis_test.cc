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

#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "gtest/gtest.h"
#include "json.hpp"
#include "nnashor/qarith.h"
#include "test_util.h"

namespace nnashor {
namespace {

std::vector<BigInt> Xs(std::initializer_list<int> v) {
  return std::vector<BigInt>(v.begin(), v.end());
}

TEST(QuotientModelTest, Examples) {
  QuotientTrace t = ClassicalQuotientModel(Xs({3, 6, 5}), 0b101, 0, 7, 3);
  EXPECT_EQ(t.s, 8);
  EXPECT_EQ(t.q, 1);
  EXPECT_EQ(t.qhat, 1);
  EXPECT_FALSE(t.window_failure);
  EXPECT_FALSE(t.z_overflow);

  t = ClassicalQuotientModel(Xs({3, 6, 5}), 0b101, 0, 7, 1);
  EXPECT_EQ(t.qhat, 0);
  EXPECT_TRUE(t.window_failure);

  t = ClassicalQuotientModel(Xs({3, 6, 5}), 0b100, 3, 7, 3);
  EXPECT_EQ(t.r, 5);
  EXPECT_TRUE(t.z_overflow);
  // The estimate follows s + z, so it is right about floor((s + z) / m).
  EXPECT_EQ(t.qhat, 1);
  EXPECT_FALSE(t.window_failure);
}

TEST(QuotientModelTest, IdentitiesOnRandomInputs) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 2000; ++trial) {
    const int n = 2 + static_cast<int>(rng() % 40);
    const BigInt m =
        (BigInt(rng()) % (BigInt(1) << (n - 1))) + (BigInt(1) << (n - 1)) | 1;
    std::vector<BigInt> xs;
    for (int i = 0; i < n; ++i) xs.push_back((BigInt(rng()) << i) % m);
    const BigInt y = BigInt(rng()) % (BigInt(1) << n);
    const int l0 = 1 + static_cast<int>(rng() % n);
    const QuotientTrace t = ClassicalQuotientModel(xs, y, 0, m, l0);
    EXPECT_EQ(t.s, t.r + t.q * m);
    EXPECT_GE(t.r, 0);
    EXPECT_LT(t.r, m);
    EXPECT_LE(t.q, n);
    EXPECT_LE(t.qhat, n);
    if (l0 == n) EXPECT_FALSE(t.window_failure);
  }
}

// The quantum estimator leaves 1 - qhat_{k-1} on bit k-1 of S.
TEST(QuotientModelTest, MatchesQuantumEstimator) {
  struct Case {
    int n, a, m, l0, z;
  };
  int cases = 0;
  for (Case c :
       {Case{3, 3, 7, 3, 0}, Case{3, 5, 7, 2, 0}, Case{3, 3, 5, 1, 2},
        Case{4, 5, 13, 4, 0}, Case{4, 7, 13, 2, 3}, Case{4, 3, 11, 3, 1}}) {
    MultiplierOptions o;
    o.l0 = c.l0;
    o.z = c.z;
    o.t = 1;
    absl::StatusOr<MultiplierParams> p = MakeMultiplierParams(c.n, c.a, c.m, o);
    ASSERT_TRUE(p.ok()) << p.status();
    absl::StatusOr<QuotientEstimator> q = BuildQuotientEstimator(*p);
    ASSERT_TRUE(q.ok()) << q.status();
    const XTable xt = MakeXTable(c.a, c.m, c.n, c.l0);
    for (uint64_t y = 0; y < (uint64_t{1} << c.n); ++y) {
      SparseState s = testing::RunSparse(
          q->circuit, testing::Pack(q->circuit.layout_in(), {{"Y", y}}));
      std::map<uint64_t, double> prob;
      for (const auto& [index, amp] : s.entries()) {
        prob[testing::Unpack(q->circuit.layout_out(), "S", index)] +=
            std::norm(amp);
      }
      const QuotientTrace t = ClassicalQuotientModel(xt.x, y, c.z, c.m, c.l0);
      const uint64_t mask = (uint64_t{1} << p->K()) - 1;
      const uint64_t want = ~static_cast<uint64_t>(t.qhat) & mask;
      EXPECT_NEAR(prob[want], 1.0, 1e-6)
          << "n=" << c.n << " l0=" << c.l0 << " y=" << y;
      ++cases;
    }
  }
  EXPECT_EQ(cases, 3 * 8 + 3 * 16);
}

TEST(MonteCarloTest, WindowError) {
  for (int l0 : {12, 16}) {
    const BoundReport r = McWindowError(32, l0, 100000, 7);
    EXPECT_TRUE(r.pass) << BoundReportJson(r);
    EXPECT_EQ(r.events, 100000);
  }
  EXPECT_EQ(McWindowError(8, 8, 10000, 1).failures, 0);
  // Addends that all sit just below m are far from random: the bound fails.
  const BoundReport ones = McWindowError(32, 16, 20000, 1, XsMode::kAllOnes);
  EXPECT_FALSE(ones.pass);
  EXPECT_GT(ones.rate, 10 * ones.bound);
  const BoundReport a = McWindowError(32, 12, 100000, 11);
  const BoundReport b = McWindowError(32, 13, 100000, 11);
  ASSERT_GT(b.failures, 0);
  EXPECT_GT(a.rate / b.rate, 1.0);
  EXPECT_LT(a.rate / b.rate, 3.0);
}

TEST(MonteCarloTest, ZOverflow) {
  for (int t : {4, 8}) {
    const BoundReport r = McZOverflow(32, std::nullopt, t, 100000, 7);
    EXPECT_TRUE(r.pass) << BoundReportJson(r);
  }
  EXPECT_EQ(McZOverflow(16, std::nullopt, 20, 10000, 1).failures, 0);
  const BoundReport a = McZOverflow(32, std::nullopt, 1, 100000, 5);
  const BoundReport b = McZOverflow(32, std::nullopt, 2, 100000, 5);
  EXPECT_GT(a.rate / b.rate, 1.0);
  EXPECT_LT(a.rate / b.rate, 3.0);
  const BoundReport fixed = McZOverflow(8, BigInt(251), 3, 20000, 5);
  EXPECT_TRUE(fixed.pass) << BoundReportJson(fixed);
}

TEST(MonteCarloTest, BlockCarry) {
  BoundReport r[3];
  for (int i = 0; i < 3; ++i) {
    r[i] = McBlockCarry(32, 4 + 2 * i, 100000, 7);
    EXPECT_GT(r[i].failures, 0);
  }
  EXPECT_TRUE(r[1].pass) << BoundReportJson(r[1]);
  EXPECT_TRUE(r[2].pass) << BoundReportJson(r[2]);
  for (int i = 0; i < 2; ++i) {
    EXPECT_GT(r[i].rate / r[i + 1].rate, 2.0);
    EXPECT_LT(r[i].rate / r[i + 1].rate, 6.0);
  }
  const BoundReport one = McBlockCarry(16, 16, 1000, 1);
  EXPECT_EQ(one.events, 0);
  EXPECT_EQ(one.failures, 0);
  EXPECT_TRUE(one.pass);
}

TEST(MonteCarloTest, ReproducibleUnderSeed) {
  EXPECT_EQ(McWindowError(32, 12, 20000, 9).failures,
            McWindowError(32, 12, 20000, 9).failures);
  EXPECT_EQ(McZOverflow(32, std::nullopt, 3, 20000, 9).failures,
            McZOverflow(32, std::nullopt, 3, 20000, 9).failures);
  EXPECT_EQ(McBlockCarry(32, 4, 5000, 9).failures,
            McBlockCarry(32, 4, 5000, 9).failures);
  EXPECT_NE(McWindowError(32, 10, 20000, 9).failures,
            McWindowError(32, 10, 20000, 10).failures);
}

TEST(SweepTest, ExactFormulas) {
  std::vector<int> ns;
  for (int n = 2; n <= 64; ++n) ns.push_back(n);
  for (const char* name :
       {"qft", "nested_adder", "nested_adder_constant_z", "swap_cascade"}) {
    absl::StatusOr<SweepBuilder> b = ParseSweepBuilder(name);
    ASSERT_TRUE(b.ok());
    absl::StatusOr<SweepReport> r = SweepResources(*b, ns);
    ASSERT_TRUE(r.ok()) << r.status();
    EXPECT_TRUE(r->pass()) << SweepReportJson(*r);
    EXPECT_EQ(SweepBuilderName(*b), name);
  }
  EXPECT_FALSE(ParseSweepBuilder("nope").ok());
}

TEST(SweepTest, MultiplierReportShape) {
  absl::StatusOr<SweepReport> r =
      SweepResources(SweepBuilder::kMultiplier, {16, 32, 64});
  ASSERT_TRUE(r.ok()) << r.status();
  ASSERT_EQ(r->rows.size(), 3u);
  ASSERT_EQ(r->fits.size(), 3u);
  for (const SweepRow& row : r->rows) {
    EXPECT_EQ(row.measured.width, 3 * row.n + 2 * row.l + 1);
  }
  nlohmann::json j = nlohmann::json::parse(SweepReportJson(*r));
  EXPECT_EQ(j["builder"], "multiplier");
  for (const char* key : {"builder", "n", "depth", "width", "size", "predicted",
                          "bound_checks"}) {
    EXPECT_TRUE(j["rows"][0].contains(key)) << key;
  }
  EXPECT_TRUE(j.contains("coefficient_fits"));
  const std::string csv = SweepReportCsv(*r);
  EXPECT_EQ(csv.substr(0, csv.find(',')), "builder");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 4);
}

}  // namespace
}  // namespace nnashor
