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

#include "nnashor/qarith.h"

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "gtest/gtest.h"
#include "nnashor/circuit.h"
#include "nnashor/params.h"
#include "test_util.h"

namespace nnashor {
namespace {

using testing::Pack;
using testing::Probability;
using testing::RunSparse;
using testing::Unpack;

MultiplierParams Exact(int n, int a, int m, int z = 0, int t = 2) {
  MultiplierOptions o;
  o.exact_mode = true;
  o.z = z;
  o.t = t;
  absl::StatusOr<MultiplierParams> p = MakeMultiplierParams(n, a, m, o);
  EXPECT_TRUE(p.ok()) << p.status();
  return *p;
}

TEST(ParamsTest, ConstantsAndErrors) {
  absl::StatusOr<std::vector<RoundConstants>> k = PrecomputeConstants(3, 7, 3);
  ASSERT_TRUE(k.ok());
  ASSERT_EQ(k->size(), 6u);
  EXPECT_EQ((*k)[0].a, 3);
  EXPECT_EQ((*k)[1].a, 2);
  EXPECT_EQ((*k)[2].a, 4);
  EXPECT_EQ((*k)[3].a, 2);
  EXPECT_FALSE(PrecomputeConstants(2, 4, 3).ok());

  const BigInt m = 40503;  // Odd, below 2^16.
  absl::StatusOr<std::vector<RoundConstants>> big =
      PrecomputeConstants(5, m, 16);
  ASSERT_TRUE(big.ok());
  for (const RoundConstants& r : *big) EXPECT_EQ(r.a * r.a_inv % m, 1);

  XTable xs = MakeXTable(3, 7, 3, 3);
  EXPECT_EQ(xs.x, (std::vector<BigInt>{3, 6, 5}));
  XTable coarse = MakeXTable(3, 7, 3, 1);
  EXPECT_EQ(coarse.x_hat, (std::vector<BigInt>{0, 4, 4}));

  MultiplierOptions o;
  o.z = 0;
  EXPECT_FALSE(MakeMultiplierParams(3, 7, 7, o).ok());
  EXPECT_FALSE(MakeMultiplierParams(3, 2, 4, o).ok());
  EXPECT_FALSE(MakeMultiplierParams(3, 3, 9, o).ok());
  o.z = 1;
  o.t = 4;
  EXPECT_FALSE(MakeMultiplierParams(4, 5, 13, o).ok());
  EXPECT_EQ(DefaultWindow(256), 26);
  EXPECT_EQ(DefaultWindow(8), 8);
}

TEST(ParamsTest, DrawnOffsetRespectsHeadroom) {
  for (uint64_t seed = 1; seed < 200; ++seed) {
    BigInt z = DrawZ(BigInt(1) << 40, 6, seed);
    EXPECT_LT(z << 6, BigInt(1) << 40);
    EXPECT_GE(z, 0);
  }
}

TEST(NestedAdderTest, ExactDepths) {
  for (int n = 2; n <= 64; ++n) {
    XTable xs = MakeXTable(1, (BigInt(1) << n) - 1, n, n);
    absl::StatusOr<Circuit> g = BuildNestedControlledAdder(xs, false);
    absl::StatusOr<Circuit> c = BuildNestedControlledAdder(xs, true, 5);
    ASSERT_TRUE(g.ok() && c.ok());
    EXPECT_EQ(*ComputeDepth(*g, CostModel{}), 6 * n - 4) << n;
    EXPECT_EQ(*ComputeDepth(*c, CostModel{}), 4 * n - 1) << n;
    EXPECT_TRUE(ValidateNearestNeighbor(*g).empty());
  }
  EXPECT_FALSE(BuildNestedControlledAdder(MakeXTable(1, 1, 1, 1), true).ok());
}

TEST(NestedAdderTest, AddsUnderSimulation) {
  XTable xs = MakeXTable(3, 7, 3, 3);
  absl::StatusOr<Circuit> c = BuildNestedControlledAdder(xs, true, 0);
  ASSERT_TRUE(c.ok());
  SparseState s = RunSparse(*c, Pack(c->layout_in(), {{"Y", 5}}));
  EXPECT_NEAR(Probability(s, Pack(c->layout_out(), {{"Y", 5}, {"Z", 0}})), 1,
              1e-9);

  for (int n : {3, 4}) {
    const uint64_t mask = (1u << n) - 1;
    XTable t = MakeXTable(5, 13, n, n);
    absl::StatusOr<Circuit> general = BuildNestedControlledAdder(t, false);
    ASSERT_TRUE(general.ok());
    for (uint64_t y = 0; y <= mask; ++y) {
      for (uint64_t z = 0; z <= mask; z += 3) {
        uint64_t want = z;
        for (int i = 0; i < n; ++i) {
          if ((y >> i) & 1) want += static_cast<uint64_t>(t.x[i]);
        }
        want &= mask;
        SparseState g = RunSparse(
            *general, Pack(general->layout_in(), {{"Y", y}, {"Z", z}}));
        EXPECT_NEAR(Probability(g, Pack(general->layout_out(),
                                        {{"Y", y}, {"Z", want}})),
                    1, 1e-9);
        absl::StatusOr<Circuit> k = BuildNestedControlledAdder(t, true, z);
        ASSERT_TRUE(k.ok());
        SparseState s = RunSparse(*k, Pack(k->layout_in(), {{"Y", y}}));
        EXPECT_NEAR(
            Probability(s, Pack(k->layout_out(), {{"Y", y}, {"Z", want}})), 1,
            1e-9);
      }
    }
  }
}

// Returns qhat read from the S register, or -1 if S is not definite.
int64_t QuotientOf(const QuotientEstimator& q, int K, uint64_t y) {
  SparseState s = RunSparse(q.circuit, Pack(q.circuit.layout_in(), {{"Y", y}}));
  int64_t sign_bits = -1;
  for (const auto& [index, amp] : s.entries()) {
    if (std::norm(amp) < 1e-12) continue;
    int64_t v = Unpack(q.circuit.layout_out(), "S", index);
    if (sign_bits >= 0 && v != sign_bits) return -1;
    sign_bits = v;
  }
  return ((int64_t{1} << K) - 1) - sign_bits;
}

TEST(QuotientEstimatorTest, Examples) {
  MultiplierParams exact = Exact(3, 3, 7);
  absl::StatusOr<QuotientEstimator> q = BuildQuotientEstimator(exact);
  ASSERT_TRUE(q.ok()) << q.status();
  EXPECT_EQ(QuotientOf(*q, exact.K(), 5), 1);

  MultiplierOptions o;
  o.l0 = 1;
  o.z = 0;
  absl::StatusOr<MultiplierParams> coarse = MakeMultiplierParams(3, 3, 7, o);
  ASSERT_TRUE(coarse.ok());
  absl::StatusOr<QuotientEstimator> qc = BuildQuotientEstimator(*coarse);
  ASSERT_TRUE(qc.ok());
  EXPECT_EQ(QuotientOf(*qc, coarse->K(), 5), 0);  // A window failure.
}

TEST(QuotientEstimatorTest, ExactModeMatchesFloorDivision) {
  for (int a : {2, 3, 5}) {
    MultiplierParams p = Exact(3, a, 7);
    absl::StatusOr<QuotientEstimator> q = BuildQuotientEstimator(p);
    ASSERT_TRUE(q.ok());
    XTable xs = MakeXTable(a, 7, 3, 3);
    for (uint64_t y = 0; y < 8; ++y) {
      int64_t s = 0;
      for (int i = 0; i < 3; ++i) {
        if ((y >> i) & 1) s += static_cast<int64_t>(xs.x[i]);
      }
      EXPECT_EQ(QuotientOf(*q, p.K(), y), s / 7) << a << " " << y;
    }
  }
}

TEST(QuotientEstimatorTest, LoopDepthTracksFormula) {
  for (auto [n, l0] : {std::pair{4, 2}, {8, 3}, {16, 4}}) {
    MultiplierOptions o;
    o.l0 = l0;
    o.z = 0;
    absl::StatusOr<MultiplierParams> p =
        MakeMultiplierParams(n, 1, (BigInt(1) << n) - 1, o);
    ASSERT_TRUE(p.ok());
    absl::StatusOr<QuotientEstimator> q = BuildQuotientEstimator(*p);
    ASSERT_TRUE(q.ok());
    const int target = 2 * p->l * p->l - 2 * l0 * l0;
    EXPECT_LE(std::abs(q->loop_depth - target), 8) << n;
    EXPECT_LE(q->overlapped_loop_depth, q->loop_depth);
    EXPECT_TRUE(ValidateNearestNeighbor(q->circuit).empty());
  }
}

void CheckAdder(const MultiplierParams& p, uint64_t y, uint64_t want) {
  absl::StatusOr<Circuit> c = BuildModularRepeatedAdder(p);
  ASSERT_TRUE(c.ok()) << c.status();
  SparseState s = RunSparse(*c, Pack(c->layout_in(), {{"Y", y}}));
  EXPECT_NEAR(Probability(s, Pack(c->layout_out(), {{"Y", y}, {"Z", want}})), 1,
              1e-9)
      << "y=" << y;
}

TEST(ModularAdderTest, Examples) {
  CheckAdder(Exact(3, 3, 7), 5, 1);
  CheckAdder(Exact(4, 5, 13, 3), 9, 6);
  MultiplierOptions o;
  o.l0 = 6;
  o.z = 0;
  absl::StatusOr<MultiplierParams> p = MakeMultiplierParams(8, 5, 251, o);
  ASSERT_TRUE(p.ok());
  EXPECT_EQ(p->l, 9);
  absl::StatusOr<Circuit> c = BuildModularRepeatedAdder(*p);
  ASSERT_TRUE(c.ok());
  EXPECT_LE(UsedWidth(*c), 2 * 8 + 9);
  EXPECT_TRUE(ValidateNearestNeighbor(*c).empty());
}

TEST(ModularAdderTest, ExhaustiveExactMode) {
  for (int a : {2, 3, 5}) {
    MultiplierParams p = Exact(3, a, 7);
    XTable xs = MakeXTable(a, 7, 3, 3);
    for (uint64_t y = 0; y < 8; ++y) {
      int64_t s = 0;
      for (int i = 0; i < 3; ++i) {
        if ((y >> i) & 1) s += static_cast<int64_t>(xs.x[i]);
      }
      CheckAdder(p, y, s % 7);
    }
  }
}

// Output of a controlled multiplier on basis input (b, c); -1 unless the
// output is a single basis state with every ancilla zero.
int64_t MultiplyOnce(const Circuit& c, uint64_t b, uint64_t ctrl) {
  SparseState s = RunSparse(c, Pack(c.layout_in(), {{"B", b}, {"c", ctrl}}));
  for (const auto& [index, amp] : s.entries()) {
    if (std::norm(amp) < 0.5) continue;
    const uint64_t out = Unpack(c.layout_out(), "B", index);
    const uint64_t clean = Pack(c.layout_out(), {{"B", out}, {"c", ctrl}});
    if (index != clean || std::norm(amp) < 1 - 1e-6) return -1;
    return static_cast<int64_t>(out);
  }
  return -1;
}

// True when adding z does not change floor(s / m) for s = sum of y_i x_i.
bool NoOverflow(int n, int64_t a, int64_t m, int64_t z, int64_t y) {
  int64_t s = 0;
  for (int i = 0; i < n; ++i) {
    if ((y >> i) & 1) s += (a << i) % m;
  }
  return (s + z) / m == s / m;
}

TEST(ModMulTest, ExhaustiveExactMode) {
  struct Case {
    int n, a, m, z;
  };
  for (Case k :
       {Case{3, 2, 7, 0}, Case{3, 3, 7, 0}, Case{3, 5, 7, 0}, Case{3, 3, 7, 1},
        Case{4, 5, 13, 0}, Case{4, 7, 13, 0}, Case{4, 7, 13, 3}}) {
    MultiplierParams p = Exact(k.n, k.a, k.m, k.z);
    absl::StatusOr<Circuit> c = BuildControlledModMul(p);
    ASSERT_TRUE(c.ok()) << c.status();
    EXPECT_TRUE(ValidateNearestNeighbor(*c).empty());
    for (int64_t b = 0; b < k.m; ++b) {
      EXPECT_EQ(MultiplyOnce(*c, b, 0), b);
      // A nonzero offset can push either half across a multiple of m.
      const int64_t ab = b * k.a % k.m;
      const int64_t a_inv = static_cast<int64_t>(*ModInverse(k.a, k.m));
      const bool clean = NoOverflow(k.n, k.a, k.m, k.z, b) &&
                         NoOverflow(k.n, a_inv, k.m, k.z, ab);
      const int64_t got = MultiplyOnce(*c, b, 1);
      if (clean) {
        EXPECT_EQ(got, ab) << k.n << " a=" << k.a << " b=" << b;
      } else {
        EXPECT_NE(got, ab) << k.n << " a=" << k.a << " b=" << b;
      }
    }
  }
}

TEST(ModMulTest, Widths) {
  for (int n : {4, 8, 16}) {
    MultiplierOptions o;
    o.z = 0;
    absl::StatusOr<MultiplierParams> p =
        MakeMultiplierParams(n, 7, (BigInt(1) << n) - 1, o);
    ASSERT_TRUE(p.ok());
    absl::StatusOr<Circuit> c = BuildControlledModMul(*p);
    ASSERT_TRUE(c.ok());
    EXPECT_EQ(UsedWidth(*c), 3 * n + 2 * p->l + 1) << n;
    EXPECT_TRUE(ValidateNearestNeighbor(*c).empty());
  }
  MultiplierOptions o;
  o.l0 = 6;
  o.z = 0;
  absl::StatusOr<MultiplierParams> p = MakeMultiplierParams(8, 5, 251, o);
  ASSERT_TRUE(p.ok());
  EXPECT_EQ(p->l, 9);
  EXPECT_EQ(UsedWidth(*BuildControlledModMul(*p)), 43);
}

TEST(ModMulTest, InverseConstantUndoes) {
  for (int a : {3, 5}) {
    MultiplierParams fwd = Exact(3, a, 7);
    MultiplierParams bwd = Exact(3, static_cast<int>(*ModInverse(a, 7)), 7);
    absl::StatusOr<Circuit> f = BuildControlledModMul(fwd);
    absl::StatusOr<Circuit> g = BuildControlledModMul(bwd);
    ASSERT_TRUE(f.ok() && g.ok());
    for (int b = 0; b < 7; ++b) {
      for (int ctrl : {0, 1}) {
        EXPECT_EQ(MultiplyOnce(*g, MultiplyOnce(*f, b, ctrl), ctrl), b);
      }
    }
  }
}

TEST(ModMulTest, GeneralVariantMatchesNearestNeighbor) {
  for (int a : {2, 3, 5}) {
    MultiplierParams p = Exact(3, a, 7);
    absl::StatusOr<Circuit> nn = BuildControlledModMul(p);
    p.variant = Variant::kGeneral;
    absl::StatusOr<Circuit> general = BuildControlledModMul(p);
    ASSERT_TRUE(nn.ok() && general.ok()) << general.status();
    for (int b = 0; b < 7; ++b) {
      for (int ctrl : {0, 1}) {
        const int64_t want = MultiplyOnce(*nn, b, ctrl);
        EXPECT_GE(want, 0);
        EXPECT_EQ(MultiplyOnce(*general, b, ctrl), want) << a << " " << b;
      }
    }
  }
}

// Build followed by its inverse returns every input basis state.
void CheckInverts(const Circuit& c, const std::vector<std::string>& inputs,
                  int bits) {
  absl::StatusOr<Circuit> inv = Invert(c);
  ASSERT_TRUE(inv.ok()) << inv.status();
  absl::StatusOr<Circuit> both = Concat(c, *inv);
  ASSERT_TRUE(both.ok()) << both.status();
  for (uint64_t v = 0; v < (uint64_t{1} << bits); ++v) {
    std::map<std::string, uint64_t> in;
    uint64_t rest = v;
    for (const std::string& name : inputs) {
      const int w = static_cast<int>(c.layout_in().at(name).positions.size());
      in[name] = rest & ((uint64_t{1} << w) - 1);
      rest >>= w;
    }
    const uint64_t index = Pack(c.layout_in(), in);
    EXPECT_NEAR(Probability(RunSparse(*both, index), index), 1, 1e-9) << v;
  }
}

TEST(InvertTest, AdderAndMultiplierRoundTrip) {
  MultiplierParams p = Exact(3, 3, 7);
  absl::StatusOr<Circuit> adder = BuildModularRepeatedAdder(p);
  ASSERT_TRUE(adder.ok());
  CheckInverts(*adder, {"Y"}, 3);
  absl::StatusOr<Circuit> mul = BuildControlledModMul(p);
  ASSERT_TRUE(mul.ok());
  CheckInverts(*mul, {"B", "c"}, 4);
}

}  // namespace
}  // namespace nnashor
