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

#include "nnashor/circuit.h"

#include <random>

#include "gmock/gmock.h"
#include "gtest/gtest.h"
#include "nnashor/check.h"
#include "nnashor/circuit_io.h"
#include "nnashor/dyadic_phase.h"

namespace nnashor {
namespace {

using ::testing::ElementsAre;

DyadicPhase P(int64_t num, int exp) { return DyadicPhase::Make(num, exp); }

int Depth(const Circuit& c) {
  absl::StatusOr<int> d = ComputeDepth(c, CostModel{});
  EXPECT_TRUE(d.ok()) << d.status();
  return d.ok() ? *d : -1;
}

TEST(DyadicPhaseTest, Normalizes) {
  DyadicPhase p = P(4, 3);
  EXPECT_EQ(p.num(), 1u);
  EXPECT_EQ(p.exp(), 1);
  EXPECT_TRUE(P(8, 3).IsZero());
  EXPECT_EQ(P(-1, 3), P(7, 3));
}

TEST(DyadicPhaseTest, NegationCancelsExactly) {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 2000; ++i) {
    int e = static_cast<int>(rng() % 65);
    __int128 num = static_cast<__int128>(rng());
    DyadicPhase p = DyadicPhase::Make(num, e);
    EXPECT_TRUE((p + (-p)).IsZero()) << p.ToString();
    EXPECT_LT(p.num() == 0 ? 0 : p.exp(), 65);
  }
}

TEST(DyadicPhaseTest, AddsAcrossExponents) {
  EXPECT_EQ(P(1, 2) + P(1, 3), P(3, 3));
  EXPECT_EQ(P(1, 1) + P(1, 1), DyadicPhase());
  EXPECT_EQ(P(1, 64) + P(-1, 64), DyadicPhase());
}

TEST(DyadicPhaseTest, ParsesBothDenominatorForms) {
  EXPECT_EQ(*DyadicPhase::Parse("3/8"), P(3, 3));
  EXPECT_EQ(*DyadicPhase::Parse("3/2^3"), P(3, 3));
  EXPECT_EQ(*DyadicPhase::Parse("-1/8"), P(7, 3));
  EXPECT_EQ(*DyadicPhase::Parse("1/18446744073709551616"), P(1, 64));
  EXPECT_FALSE(DyadicPhase::Parse("1/6").ok());
  EXPECT_FALSE(DyadicPhase::Parse("x/8").ok());
  EXPECT_EQ(P(3, 3).ToString(), "3/8");
}

TEST(DyadicPhaseTest, FromBigRoundsToGrid) {
  BigInt one = 1;
  EXPECT_EQ(DyadicPhase::FromBig(one, 3), P(1, 3));
  EXPECT_EQ(DyadicPhase::FromBig(-one, 3), P(7, 3));
  // 3/2^66 rounds to 1/2^64.
  EXPECT_EQ(DyadicPhase::FromBig(BigInt(3), 66), P(1, 64));
  EXPECT_TRUE(DyadicPhase::FromBig(BigInt(1), 70).IsZero());
}

TEST(CircuitTest, AppendChecksOperands) {
  Circuit c(1);
  EXPECT_TRUE(c.Append(Gate::H(0)).ok());
  EXPECT_EQ(c.gates().size(), 1u);
  Circuit d(4);
  EXPECT_EQ(d.Append(Gate::Swap(2, 2)).code(),
            absl::StatusCode::kInvalidArgument);
  EXPECT_EQ(d.Append(Gate::CPhase(0, 5, P(1, 3))).code(),
            absl::StatusCode::kOutOfRange);
}

TEST(CircuitTest, NearestNeighborValidation) {
  Circuit c(5);
  c.Add(Gate::CNot(3, 4)).Add(Gate::CNot(0, 2));
  EXPECT_THAT(ValidateNearestNeighbor(c), ElementsAre(1));
  EXPECT_FALSE(ComputeDepth(c, CostModel{}).ok());
  EXPECT_EQ(*ComputeDepth(c, CostModel{false, true}), 1);
}

TEST(CircuitTest, DisjointSwapsShareALayer) {
  Circuit c(4);
  c.Add(Gate::Swap(0, 1)).Add(Gate::Swap(2, 3));
  EXPECT_EQ(Depth(c), 1);
  EXPECT_EQ(CountSize(Circuit(3), CostModel{}), 0);
}

TEST(CircuitTest, SingleWireGatesRideOnNeighbors) {
  Circuit c(3);
  c.Add(Gate::H(0)).Add(Gate::Rz(0, P(1, 2))).Add(Gate::CNot(0, 1));
  EXPECT_EQ(Depth(c), 1);
  c.Add(Gate::H(1));  // Absorbed by the preceding CNOT.
  EXPECT_EQ(Depth(c), 1);
  c.Add(Gate::H(2));  // Alone on its wire.
  EXPECT_EQ(Depth(c), 1);
  c.AddMeasure(1, "m");
  EXPECT_EQ(Depth(c), 2);
  c.Add(Gate::H(1));  // After a measurement and nothing to ride on.
  EXPECT_EQ(Depth(c), 3);
  EXPECT_EQ(CountSize(c, CostModel{}), 7);
}

Circuit RandomCircuit(std::mt19937_64& rng, int width, int gates) {
  Circuit c(width);
  for (int i = 0; i < gates; ++i) {
    int a = static_cast<int>(rng() % (width - 1));
    switch (rng() % 6) {
      case 0:
        c.Add(Gate::H(a + static_cast<int>(rng() % 2)));
        break;
      case 1:
        c.Add(Gate::Rz(a, P(static_cast<int64_t>(rng() % 16), 4)));
        break;
      case 2:
        c.Add(Gate::CNot(a, a + 1));
        break;
      case 3:
        c.Add(Gate::Fcps(a + 1, a, P(1, 1 + rng() % 5)));
        break;
      case 4:
        c.Add(Gate::PtHalfA(a, a + 1));
        break;
      default:
        c.AddMeasure(a, "b" + std::to_string(i));
        break;
    }
  }
  return c;
}

TEST(CircuitTest, AppendingNeverLowersDepth) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    Circuit c = RandomCircuit(rng, 6, 40);
    Circuit prefix(6);
    int last = 0;
    for (const Gate& g : c.gates()) {
      if (g.kind == GateKind::kMeasure) {
        prefix.AddMeasure(g.a, c.bit_names()[g.bit]);
      } else {
        prefix.Add(g);
      }
      int d = Depth(prefix);
      EXPECT_GE(d, last);
      last = d;
    }
    EXPECT_LE(Depth(c), CountSize(c, CostModel{}));
  }
}

TEST(CircuitTest, ConcatBoundsDepthAndAddsSize) {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 50; ++trial) {
    Circuit a = RandomCircuit(rng, 5, 20);
    Circuit b = RandomCircuit(rng, 5, 20);
    absl::StatusOr<Circuit> ab = Concat(a, b);
    ASSERT_TRUE(ab.ok()) << ab.status();
    EXPECT_LE(Depth(*ab), Depth(a) + Depth(b));
    EXPECT_EQ(CountSize(*ab, {}), CountSize(a, {}) + CountSize(b, {}));
  }
}

TEST(CircuitTest, InvertAdjointsAndReverses) {
  Circuit h(1);
  h.Add(Gate::H(0));
  EXPECT_EQ(Invert(h)->gates()[0], Gate::H(0));
  Circuit rz(1);
  rz.Add(Gate::Rz(0, P(1, 3)));
  EXPECT_EQ(Invert(rz)->gates()[0], Gate::Rz(0, P(7, 3)));
  Circuit m(1);
  m.AddMeasure(0, "x");
  EXPECT_FALSE(Invert(m).ok());
}

TEST(CircuitTest, InvertIsAnInvolution) {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 20; ++trial) {
    Circuit c(5);
    Circuit r = RandomCircuit(rng, 5, 30);
    for (const Gate& g : r.gates()) {
      if (g.kind != GateKind::kMeasure) c.Add(g);
    }
    c.Add(Gate::Fcxs(1, 2)).Add(Gate::PtHalfBCNot(3, 2));
    absl::StatusOr<Circuit> twice = Invert(*Invert(c));
    ASSERT_TRUE(twice.ok());
    EXPECT_EQ(twice->gates(), c.gates());
  }
}

TEST(CircuitTest, MirrorFlipsWires) {
  Circuit c(4);
  c.Add(Gate::CNot(0, 1));
  NNASHOR_CHECK_OK(c.SetLayoutIn({{"Y", MakeLayout({0, 1})}}));
  Circuit m = Mirror(c);
  EXPECT_EQ(m.gates()[0], Gate::CNot(3, 2));
  EXPECT_THAT(m.layout_in().at("Y").positions, ElementsAre(3, 2));
  EXPECT_TRUE(m.layout_in().at("Y").reversed);
  std::mt19937_64 rng(14);
  Circuit r = RandomCircuit(rng, 6, 40);
  Circuit rr = Mirror(Mirror(r));
  EXPECT_EQ(rr.gates(), r.gates());
  EXPECT_EQ(Depth(Mirror(r)), Depth(r));
}

TEST(CircuitTest, ConcatChecksWidthAndLayouts) {
  Circuit a(3), b(3), c(4);
  a.Add(Gate::H(0));
  EXPECT_EQ(Concat(a, b)->gates(), a.gates());
  EXPECT_FALSE(Concat(a, c).ok());
  NNASHOR_CHECK_OK(a.SetLayoutOut({{"Z", MakeLayout({0, 1})}}));
  NNASHOR_CHECK_OK(b.SetLayoutIn({{"Z", MakeLayout({1, 2})}}));
  EXPECT_FALSE(Concat(a, b).ok());
  NNASHOR_CHECK_OK(b.SetLayoutIn({{"Z", MakeLayout({0, 1})}}));
  NNASHOR_CHECK_OK(b.SetLayoutOut({{"Z", MakeLayout({2, 1})}}));
  absl::StatusOr<Circuit> ab = Concat(a, b);
  ASSERT_TRUE(ab.ok());
  EXPECT_THAT(ab->layout_out().at("Z").positions, ElementsAre(2, 1));
}

TEST(CircuitIoTest, RoundTrips) {
  Circuit c(4);
  c.Add(Gate::H(0))
      .Add(Gate::Rz(1, P(3, 5)))
      .Add(Gate::CPhase(0, 1, P(1, 2)))
      .Add(Gate::Fcps(1, 2, P(1, 64)))
      .Add(Gate::Fcrzs(2, 3, P(5, 7)))
      .Add(Gate::PtHalfA(2, 1))
      .Add(Gate::Fcxs(3, 2))
      .Add(Gate::PtHalfB(2, 1))
      .AddMeasure(0, "e0")
      .AddClassicalRz(0, P(1, 1), "e0");
  NNASHOR_CHECK_OK(c.SetLayoutIn({{"Y", MakeLayout({3, 2})}}));
  std::string text = CircuitToText(c);
  absl::StatusOr<Circuit> back = ParseCircuit(text);
  ASSERT_TRUE(back.ok()) << back.status();
  EXPECT_EQ(back->gates(), c.gates());
  EXPECT_EQ(back->layout_in(), c.layout_in());
  EXPECT_EQ(CircuitToText(*back), text);
}

TEST(CircuitIoTest, RejectsMalformedInput) {
  EXPECT_FALSE(ParseCircuit("h 0\n").ok());
  EXPECT_FALSE(ParseCircuit("width 2\nfoo 1\n").ok());
  EXPECT_FALSE(ParseCircuit("width 2\ncnot 0 2\n").ok());
  EXPECT_FALSE(ParseCircuit("width 2\nrz 0 1/3\n").ok());
  absl::StatusOr<Circuit> ok =
      ParseCircuit("# header\nwidth 2\n# classical\ncnot 0 1 # trailing\n");
  ASSERT_TRUE(ok.ok());
  EXPECT_TRUE(ok->classical());
}

}  // namespace
}  // namespace nnashor
