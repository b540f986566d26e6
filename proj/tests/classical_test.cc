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

#include "nnashor/classical.h"

#include <complex>
#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "gtest/gtest.h"
#include "nnashor/circuit.h"
#include "nnashor/params.h"
#include "nnashor/qarith.h"
#include "nnashor/reversible.h"
#include "test_util.h"

namespace nnashor {
namespace {

using Values = std::map<std::string, uint64_t>;

// Runs a classical circuit on named register values; other wires start at
// zero. Returns every output register, plus "_dirty" = 1 if any wire outside
// the output registers ends nonzero.
Values RunBits(const Circuit& c, const Values& in) {
  BitString bits(c.width(), 0);
  for (const auto& [name, v] : in) {
    WriteRegister(&bits, c.layout_in().at(name).positions, v);
  }
  absl::StatusOr<ReversibleResult> r = SimulateReversible(c, bits);
  EXPECT_TRUE(r.ok()) << r.status();
  Values out;
  std::vector<bool> named(c.width(), false);
  for (const auto& [name, reg] : c.layout_out()) {
    out[name] = ReadRegister(r->bits, reg.positions);
    for (int p : reg.positions) named[p] = true;
  }
  out["_dirty"] = 0;
  for (int w = 0; w < c.width(); ++w) {
    if (!named[w] && r->bits[w]) out["_dirty"] = 1;
  }
  return out;
}

TEST(RippleTest, Examples) {
  RippleWires w = DefaultRippleWires(4, false, false, true);
  absl::StatusOr<Circuit> c = BuildRippleAddConst(w, 1, RippleWidth(w));
  ASSERT_TRUE(c.ok()) << c.status();
  EXPECT_TRUE(c->classical());
  Values out = RunBits(*c, {{"Z", 0b0011}});
  EXPECT_EQ(out["Z"], 0b0100u);
  EXPECT_EQ(out["cout"], 0u);
  out = RunBits(*c, {{"Z", 0b1111}});
  EXPECT_EQ(out["Z"], 0u);
  EXPECT_EQ(out["cout"], 1u);
  EXPECT_TRUE(ValidateNearestNeighbor(*c).empty());
}

TEST(RippleTest, RandomAgainstIntegerAddition) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 10000; ++trial) {
    const int t = 1 + static_cast<int>(rng() % 12);
    const bool ctl = rng() % 2, cin = rng() % 2, cout = rng() % 2;
    RippleWires w = DefaultRippleWires(t, ctl, cin, cout);
    const int width = RippleWidth(w);
    if (trial % 3 == 0) {
      // Same adder laid out bottom to top.
      auto flip = [&](int& x) { x = width - 1 - x; };
      if (w.control) flip(*w.control);
      if (w.carry_in) flip(*w.carry_in);
      if (w.carry_out) flip(*w.carry_out);
      flip(w.scratch);
      for (int& x : w.block) flip(x);
      for (int& x : w.addend) flip(x);
    }
    const uint64_t mask = (uint64_t{1} << t) - 1;
    const uint64_t k = rng() & mask, z = rng() & mask;
    const uint64_t y = ctl ? rng() % 2 : 1, ci = cin ? rng() % 2 : 0;
    absl::StatusOr<Circuit> c = BuildRippleAddConst(w, k, width);
    ASSERT_TRUE(c.ok()) << c.status();
    Values in = {{"Z", z}};
    if (ctl) in["y"] = y;
    if (cin) in["cin"] = ci;
    Values out = RunBits(*c, in);
    const uint64_t sum = z + y * k + ci;
    ASSERT_EQ(out["Z"], sum & mask) << trial;
    if (cout) ASSERT_EQ(out["cout"], sum >> t) << trial;
    if (ctl) ASSERT_EQ(out["y"], y);
    if (cin) ASSERT_EQ(out["cin"], ci);
    ASSERT_EQ(out["_dirty"], 0u);
    ASSERT_TRUE(ValidateNearestNeighbor(*c).empty());
  }
}

TEST(RippleTest, RejectsNonAdjacentWires) {
  RippleWires w = DefaultRippleWires(3, false, false, false);
  w.addend[1] += 5;
  EXPECT_FALSE(BuildRippleAddConst(w, 1, 20).ok());
  w = DefaultRippleWires(3, false, false, false);
  EXPECT_FALSE(BuildRippleAddConst(w, 9, RippleWidth(w)).ok());
}

TEST(RippleTest, DepthLinearInBlockSize) {
  for (int t : {4, 8, 16, 32}) {
    RippleWires w = DefaultRippleWires(t, true, true, true);
    absl::StatusOr<Circuit> c =
        BuildRippleAddConst(w, (uint64_t{1} << t) - 1, RippleWidth(w));
    ASSERT_TRUE(c.ok());
    absl::StatusOr<int> d = ComputeDepth(*c, CostModel{});
    ASSERT_TRUE(d.ok());
    EXPECT_LE(*d, 20 * t) << t;
  }
}

// Forward and backward ripples meet the same basis state at every
// pseudo-Toffoli, so the phases cancel: each input maps to one basis state
// with amplitude exactly 1.
TEST(RippleTest, PhasesCancelOnEveryReachableInput) {
  for (int t = 1; t <= 4; ++t) {
    RippleWires w = DefaultRippleWires(t, true, true, true);
    const int width = RippleWidth(w);
    absl::StatusOr<Circuit> c =
        BuildRippleAddConst(w, 0b1011 >> (4 - t), width);
    ASSERT_TRUE(c.ok());
    for (uint64_t z = 0; z < (uint64_t{1} << t); ++z) {
      for (uint64_t rest = 0; rest < 8; ++rest) {
        const uint64_t index =
            testing::Pack(c->layout_in(), {{"Z", z},
                                           {"y", rest & 1},
                                           {"cin", (rest >> 1) & 1},
                                           {"cout", rest >> 2}});
        SparseState s = testing::RunSparse(*c, index);
        ASSERT_EQ(s.entries().size(), 1u);
        const std::complex<double> amp = s.entries().begin()->second;
        EXPECT_NEAR(amp.real(), 1.0, 1e-9) << t << " " << z << " " << rest;
        EXPECT_NEAR(amp.imag(), 0.0, 1e-9);
      }
    }
  }
}

TEST(BlockParamsTest, SlicesAndRoundSum) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 300; ++trial) {
    const int n = 1 + static_cast<int>(rng() % 40);
    const int t = 1 + static_cast<int>(rng() % 9);
    const int N = 1 + static_cast<int>(rng() % 12);
    std::vector<BigInt> xs;
    for (int i = 0; i < N; ++i) {
      xs.push_back(BigInt(rng()) % (BigInt(1) << n));
    }
    absl::StatusOr<BlockParams> p = MakeBlockParams(n, t, xs);
    ASSERT_TRUE(p.ok());
    EXPECT_GE(p->k * p->t, n);
    for (int i = 0; i < N; ++i) {
      BigInt back = 0;
      for (int j = 0; j < p->k; ++j) {
        back += BigInt(p->slices[i][j]) << (p->t * j);
      }
      EXPECT_EQ(back, xs[i]);
    }
    const BigInt y = BigInt(rng()) % (BigInt(1) << N);
    BigInt want = 0, got = 0;
    for (int i = 0; i < N; ++i) {
      if (bit_test(y, i)) want += xs[i];
    }
    for (int r = 0; r < p->num_rounds(); ++r) got += RoundAddend(*p, r, y);
    EXPECT_EQ(got, want);
  }
  EXPECT_FALSE(MakeBlockParams(4, 2, {BigInt(16)}).ok());
  EXPECT_FALSE(MakeBlockParams(4, 0, {BigInt(1)}).ok());
}

TEST(NestedAdderTest, SingleBlockExhaustive) {
  // n = t = 4: one block, nothing to predict.
  std::vector<std::vector<BigInt>> tables;
  for (int x = 0; x < 16; ++x) tables.push_back({BigInt(x)});
  for (int x0 = 0; x0 < 16; ++x0) {
    for (int x1 = 0; x1 < 16; ++x1) tables.push_back({BigInt(x0), BigInt(x1)});
  }
  std::mt19937_64 rng(11);
  for (int i = 0; i < 100; ++i) {
    std::vector<BigInt> xs;
    for (int j = 0; j < 4; ++j) xs.push_back(BigInt(rng() % 16));
    tables.push_back(xs);
  }
  for (const auto& xs : tables) {
    absl::StatusOr<BlockParams> p = MakeBlockParams(4, 4, xs);
    ASSERT_TRUE(p.ok());
    absl::StatusOr<Circuit> c = BuildBlockNestedAdder(*p);
    ASSERT_TRUE(c.ok()) << c.status();
    ASSERT_TRUE(ValidateNearestNeighbor(*c).empty());
    const uint64_t N = xs.size();
    for (uint64_t y = 0; y < (uint64_t{1} << N); ++y) {
      BigInt s = 0;
      for (uint64_t i = 0; i < N; ++i) {
        if ((y >> i) & 1) s += xs[i];
      }
      for (uint64_t z = 0; z < 16; ++z) {
        Values out = RunBits(*c, {{"Y", y}, {"Z", z}});
        ASSERT_EQ(out["Z"], static_cast<uint64_t>((s + z) % 16));
        ASSERT_EQ(out["Y"], y);
        ASSERT_EQ(out["_dirty"], 0u);
      }
    }
  }
}

TEST(NestedAdderTest, FullBlockCarryBreaksPrediction) {
  // n = 6, t = 2: block 1 holds 11 when block 0 carries into it in the
  // first round; the increment's carry into block 2 is never predicted.
  absl::StatusOr<BlockParams> p =
      MakeBlockParams(6, 2, {BigInt(1), BigInt(0), BigInt(0)});
  ASSERT_TRUE(p.ok());
  const uint64_t y = 1, z = 0b001111;
  NestedAddOutcome m = ModelNestedAdd(*p, y, z, EraseMode::kAddend);
  EXPECT_FALSE(m.exact);
  EXPECT_GE(m.prediction_failures, 1);
  EXPECT_NE(m.z, BigInt(z + 1));
  absl::StatusOr<Circuit> c = BuildBlockNestedAdder(*p);
  ASSERT_TRUE(c.ok());
  Values out = RunBits(*c, {{"Y", y}, {"Z", z}});
  EXPECT_EQ(BigInt(out["Z"]), m.z);
  EXPECT_NE(out["Z"], z + 1);
}

TEST(NestedAdderTest, CircuitMatchesModelBitForBit) {
  std::mt19937_64 rng(5);
  for (EraseMode mode : {EraseMode::kAddend, EraseMode::kAddendPlusCarry}) {
    int failures = 0;
    for (int trial = 0; trial < 60; ++trial) {
      const int n = 3 + static_cast<int>(rng() % 8);
      const int t = 1 + static_cast<int>(rng() % 3);
      const int N = 1 + static_cast<int>(rng() % 6);
      std::vector<BigInt> xs;
      for (int i = 0; i < N; ++i) {
        xs.push_back(BigInt(rng() % (uint64_t{1} << n)));
      }
      absl::StatusOr<BlockParams> p = MakeBlockParams(n, t, xs);
      ASSERT_TRUE(p.ok());
      absl::StatusOr<Circuit> c = BuildBlockNestedAdder(*p, {.erase = mode});
      ASSERT_TRUE(c.ok());
      ASSERT_TRUE(ValidateNearestNeighbor(*c).empty());
      for (int s = 0; s < 20; ++s) {
        const uint64_t y = rng() % (uint64_t{1} << N);
        const uint64_t z = rng() % (uint64_t{1} << n);
        NestedAddOutcome m = ModelNestedAdd(*p, y, z, mode);
        Values out = RunBits(*c, {{"Y", y}, {"Z", z}});
        ASSERT_EQ(BigInt(out["Z"]), m.z) << trial;
        ASSERT_EQ(out["Y"], y);
        if (m.exact) {
          BigInt want = z;
          for (int i = 0; i < N; ++i) {
            if ((y >> i) & 1) want += xs[i];
          }
          ASSERT_EQ(m.z, want % (BigInt(1) << n));
          ASSERT_EQ(out["_dirty"], 0u);
        } else {
          ++failures;
        }
      }
    }
    EXPECT_GT(failures, 0);
  }
}

MultiplierParams ExactParams(int n, int a, int m, int z) {
  MultiplierOptions o;
  o.exact_mode = true;
  o.z = z;
  o.t = 2;
  absl::StatusOr<MultiplierParams> p = MakeMultiplierParams(n, a, m, o);
  EXPECT_TRUE(p.ok()) << p.status();
  return *p;
}

// B after one run, or -1 if any other wire is left dirty.
int64_t Classical(const Circuit& c, uint64_t b, uint64_t ctrl) {
  Values out = RunBits(c, {{"B", b}, {"c", ctrl}});
  if (out["_dirty"] || out["c"] != ctrl) return -1;
  return static_cast<int64_t>(out["B"]);
}

int64_t Quantum(const Circuit& c, uint64_t b, uint64_t ctrl) {
  SparseState s = testing::RunSparse(
      c, testing::Pack(c.layout_in(), {{"B", b}, {"c", ctrl}}));
  for (const auto& [index, amp] : s.entries()) {
    if (std::norm(amp) < 0.5) continue;
    const uint64_t out = testing::Unpack(c.layout_out(), "B", index);
    if (index != testing::Pack(c.layout_out(), {{"B", out}, {"c", ctrl}}) ||
        std::norm(amp) < 1 - 1e-6) {
      return -1;
    }
    return static_cast<int64_t>(out);
  }
  return -1;
}

// Integer model of one classical modular adder: returns the new target and
// clears *exact if any carry prediction in the two nested additions fails.
BigInt ModelModAdd(const MultiplierParams& p, const BigInt& a, int t,
                   uint64_t y, const BigInt& target, bool subtract,
                   bool* exact) {
  const int n = p.n, d = p.shift();
  const BigInt mod = BigInt(1) << n;
  auto wrap = [&](BigInt v) { return ((v % mod) + mod) % mod; };
  std::vector<BigInt> xs;
  uint64_t v = static_cast<uint64_t>(p.z >> d);
  for (int i = 0; i < n; ++i) {
    const BigInt x = (a << i) % p.m;
    xs.push_back(wrap(subtract ? -x : x));
    if ((y >> i) & 1) v += static_cast<uint64_t>(x >> d);
  }
  const uint64_t m_top =
      static_cast<uint64_t>((p.m + (BigInt(1) << d) - 1) >> d);
  uint64_t qhat = 0;
  for (int k = p.K(); k >= 1; --k) {
    const int L = p.l0 + k;
    const uint64_t sub = m_top << (k - 1);
    const uint64_t lo = (v - sub) & ((uint64_t{1} << L) - 1);
    v = (v >> L << L) | lo;
    const bool sign = (lo >> (L - 1)) & 1;
    if (sign) {
      const uint64_t mask = (uint64_t{1} << (L - 1)) - 1;
      v = (v & ~mask) | ((v + sub) & mask);
    } else {
      qhat |= uint64_t{1} << (k - 1);
    }
  }
  NestedAddOutcome first =
      ModelNestedAdd(*MakeBlockParams(n, t, xs), y, target, EraseMode::kAddend);
  std::vector<BigInt> ms;
  for (int i = 0; i < p.K(); ++i) {
    const BigInt mi = p.m << i;
    ms.push_back(wrap(subtract ? mi : -mi));
  }
  NestedAddOutcome second = ModelNestedAdd(*MakeBlockParams(n, t, ms), qhat,
                                           first.z, EraseMode::kAddend);
  *exact = *exact && first.exact && second.exact;
  return second.z;
}

TEST(ClassicalModMulTest, Example) {
  for (int block : {0, 2, 4}) {
    ClassicalOptions o;
    o.block = block;
    absl::StatusOr<Circuit> c =
        BuildClassicalModMul(ExactParams(4, 5, 13, 0), o);
    ASSERT_TRUE(c.ok()) << c.status();
    EXPECT_TRUE(c->classical());
    EXPECT_TRUE(ValidateNearestNeighbor(*c).empty());
    EXPECT_EQ(Classical(*c, 9, 1), 6) << block;
    EXPECT_EQ(Classical(*c, 9, 0), 9) << block;
  }
}

// Agrees with the quantum multiplier whenever no block carry is mispredicted;
// a single block never mispredicts.
TEST(ClassicalModMulTest, MatchesQuantumOnAllSmallInputs) {
  int compared = 0, skipped = 0;
  for (int m : {5, 7}) {
    for (int a = 2; a < m; ++a) {
      for (int z : {0, 1}) {
        const MultiplierParams p = ExactParams(3, a, m, z);
        const BigInt a_inv = *ModInverse(a, m);
        absl::StatusOr<Circuit> q = BuildControlledModMul(p);
        ASSERT_TRUE(q.ok()) << q.status();
        for (int block : {1, 2, 3}) {
          ClassicalOptions o;
          o.block = block;
          absl::StatusOr<Circuit> c = BuildClassicalModMul(p, o);
          ASSERT_TRUE(c.ok()) << c.status();
          for (int b = 0; b < m; ++b) {
            for (int ctrl : {0, 1}) {
              bool exact = true;
              const uint64_t y = ctrl ? b : 0;
              const BigInt zz = ModelModAdd(p, a, block, y, 0, false, &exact);
              ModelModAdd(p, a_inv, block, static_cast<uint64_t>(zz), y, true,
                          &exact);
              if (!exact) {
                EXPECT_LT(block, 3);
                ++skipped;
                continue;
              }
              EXPECT_EQ(Classical(*c, b, ctrl), Quantum(*q, b, ctrl))
                  << "m=" << m << " a=" << a << " z=" << z << " t=" << block
                  << " b=" << b << " c=" << ctrl;
              ++compared;
            }
          }
        }
      }
    }
  }
  EXPECT_GT(compared, 10 * skipped);
}

TEST(ClassicalModMulTest, Errors) {
  MultiplierParams p = ExactParams(4, 5, 13, 0);
  ClassicalOptions o;
  o.block = 63;
  EXPECT_FALSE(BuildClassicalModMul(p, o).ok());
  EXPECT_EQ(DefaultBlockSize(1), 1);
  EXPECT_EQ(DefaultBlockSize(32), 5);
  EXPECT_EQ(DefaultBlockSize(33), 6);
}

TEST(ClassicalExponentiationTest, AllExponents) {
  for (int e = 0; e < 64; ++e) {
    ExponentiationParams p;
    p.n = 3;
    p.g = 3;
    p.m = 7;
    p.mult.exact_mode = true;
    p.mult.z = 0;
    p.exponent = e;
    absl::StatusOr<Exponentiation> x = BuildClassicalExponentiation(p);
    ASSERT_TRUE(x.ok()) << x.status();
    int64_t want = 1;
    for (int i = 0; i < e; ++i) want = want * 3 % 7;
    Values out = RunBits(x->circuit, {});
    EXPECT_EQ(out["W"], static_cast<uint64_t>(want)) << e;
    EXPECT_EQ(out["_dirty"], 0u) << e;
  }
  ExponentiationParams p;
  p.n = 3;
  p.g = 3;
  p.m = 7;
  EXPECT_FALSE(BuildClassicalExponentiation(p).ok());
}

TEST(ClassicalExponentiationTest, RoundDepthGrowsAsNLogN) {
  double depth[2];
  for (int i = 0; i < 2; ++i) {
    const int n = 16 << i;
    ExponentiationParams p;
    p.n = n;
    p.g = 7;
    p.m = (BigInt(1) << n) - 1;
    p.rounds = 2;
    p.exponent = 1;
    absl::StatusOr<Exponentiation> x = BuildClassicalExponentiation(p);
    ASSERT_TRUE(x.ok()) << x.status();
    EXPECT_TRUE(ValidateNearestNeighbor(x->circuit).empty());
    depth[i] = x->rounds[1].depth_end - x->rounds[0].depth_end;
  }
  // 32 log 32 / (16 log 16) = 2.5.
  EXPECT_GT(depth[1] / depth[0], 2.5 * 0.75);
  EXPECT_LT(depth[1] / depth[0], 2.5 * 1.25);
}

}  // namespace
}  // namespace nnashor
