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

#include "nnashor/gate_library.h"

#include <cmath>
#include <numbers>

#include "gtest/gtest.h"
#include "nnashor/reversible.h"
#include "nnashor/simulator.h"

namespace nnashor {
namespace {

constexpr CostModel kNN{true, false};
constexpr CostModel kGeneral{false, true};

int Depth(const Circuit& c, CostModel m = kNN) {
  absl::StatusOr<int> d = ComputeDepth(c, m);
  EXPECT_TRUE(d.ok()) << d.status();
  return d.ok() ? *d : -1;
}

// Product state with element j carrying phase u/2^(j+1) on wire pos[j].
std::vector<Amplitude> PhiState(uint64_t u, const std::vector<int>& pos) {
  const int n = static_cast<int>(pos.size());
  std::vector<Amplitude> out(uint64_t{1} << n);
  for (uint64_t idx = 0; idx < out.size(); ++idx) {
    double turns = 0;
    for (int j = 0; j < n; ++j) {
      if ((idx >> pos[j]) & 1) turns += std::ldexp(double(u), -(j + 1));
    }
    out[idx] =
        std::polar(std::pow(2.0, -n / 2.0), 2 * std::numbers::pi * turns);
  }
  return out;
}

TEST(QftTest, SizesAndDepths) {
  Circuit one = BuildQft({1});
  EXPECT_EQ(one.gates().size(), 1u);
  EXPECT_EQ(Depth(one), 1);
  for (int n = 2; n <= 20; ++n) {
    Circuit q = BuildQft({n});
    EXPECT_EQ(Depth(q), 2 * n - 3) << n;
    EXPECT_EQ(CountSize(q, kNN), n + n * (n - 1) / 2) << n;
    EXPECT_TRUE(ValidateNearestNeighbor(q).empty());
    EXPECT_EQ(Depth(BuildQft({n, true})), 2 * n - 3) << n;
  }
  EXPECT_EQ(CountSize(BuildQft({4}), kNN), 10);
  int n = 16;
  EXPECT_LE(std::abs(CountSize(BuildQft({n}), kNN) - n * n / 2), 3 * n);
}

TEST(QftTest, MatchesDftOracle) {
  for (int n = 1; n <= 5; ++n) {
    Circuit q = BuildQft({n});
    const auto& pos = q.layout_out().at("x").positions;
    for (uint64_t u = 0; u < (uint64_t{1} << n); ++u) {
      auto r = Simulate(q, u, 0);
      ASSERT_TRUE(r.ok());
      std::vector<Amplitude> want = PhiState(u, pos);
      for (size_t k = 0; k < want.size(); ++k) {
        ASSERT_NEAR(std::abs(r->state.amplitudes()[k] - want[k]), 0, 1e-12)
            << "n=" << n << " u=" << u << " k=" << k;
      }
    }
  }
  // n=3, u=5: element order on the wires makes the amplitude at basis index
  // k equal to e^(2 pi i 5k/8)/sqrt(8).
  auto r = Simulate(BuildQft({3}), 5, 0);
  for (int k = 0; k < 8; ++k) {
    Amplitude want =
        std::polar(1 / std::sqrt(8.0), 2 * std::numbers::pi * 5 * k / 8.0);
    EXPECT_NEAR(std::abs(r->state.amplitudes()[k] - want), 0, 1e-12);
  }
}

TEST(QftTest, UnitaryAndProductStructure) {
  for (int n = 1; n <= 6; ++n) {
    Eigen::MatrixXcd u = *UnitaryOf(BuildQft({n}));
    EXPECT_LT((u.adjoint() * u - Eigen::MatrixXcd::Identity(u.rows(), u.cols()))
                  .norm(),
              1e-10);
  }
  // Every single-qubit reduced state of QFT|u> is pure.
  const int n = 5;
  Circuit q = BuildQft({n});
  for (uint64_t u : {3u, 17u, 30u}) {
    auto r = Simulate(q, u, 0);
    const auto& a = r->state.amplitudes();
    for (int w = 0; w < n; ++w) {
      Eigen::Matrix2cd rho = Eigen::Matrix2cd::Zero();
      for (uint64_t i = 0; i < a.size(); ++i) {
        if ((i >> w) & 1) continue;
        Amplitude a0 = a[i], a1 = a[i | (uint64_t{1} << w)];
        rho(0, 0) += a0 * std::conj(a0);
        rho(0, 1) += a0 * std::conj(a1);
        rho(1, 0) += a1 * std::conj(a0);
        rho(1, 1) += a1 * std::conj(a1);
      }
      EXPECT_GE((rho * rho).trace().real(), 1 - 1e-10);
    }
  }
}

TEST(QftTest, InverseUndoesForward) {
  for (std::optional<int> cutoff :
       {std::optional<int>(), std::optional<int>(3)}) {
    QftSpec fwd{4, false, cutoff};
    QftSpec inv{4, true, cutoff};
    Circuit both = *Concat(BuildQft(fwd), BuildQft(inv));
    for (uint64_t u = 0; u < 16; ++u) {
      auto r = Simulate(both, u, 0);
      EXPECT_NEAR(FidelityToBasis(r->state, u), 1, 1e-10);
    }
  }
  for (int n = 2; n <= 6; ++n) {
    Circuit a = BuildQft({n, false, 3});
    Circuit b = BuildQft({n, true, 3});
    Eigen::MatrixXcd prod = *UnitaryOf(b) * *UnitaryOf(a);
    EXPECT_LT(
        (prod - Eigen::MatrixXcd::Identity(prod.rows(), prod.cols())).norm(),
        1e-10);
  }
}

TEST(QftTest, SwapFreeFormIsNotNearestNeighbor) {
  Circuit mn = BuildQft({4, false, std::nullopt, false});
  EXPECT_FALSE(ValidateNearestNeighbor(mn).empty());
  EXPECT_TRUE(ValidateNearestNeighbor(BuildQft({2, false, std::nullopt, false}))
                  .empty());
  for (uint64_t u = 0; u < 16; ++u) {
    auto r = Simulate(mn, u, 0);
    std::vector<Amplitude> want = PhiState(u, {0, 1, 2, 3});
    for (size_t k = 0; k < want.size(); ++k) {
      EXPECT_NEAR(std::abs(r->state.amplitudes()[k] - want[k]), 0, 1e-12);
    }
  }
}

TEST(QftTest, ApproximationDropsOnlyFineRotations) {
  Circuit q = BuildQft({8, false, 3});
  int rotations = 0;
  for (const Gate& g : q.gates()) {
    if (g.kind == GateKind::kFusedCPhaseSwap) {
      EXPECT_LE(g.phase.exp(), 3);
      ++rotations;
    }
  }
  // Distances 1 and 2 survive: 7 + 6 pairs.
  EXPECT_EQ(rotations, 13);
  EXPECT_EQ(DefaultQftCutoff(256), 10);
}

TEST(PseudoToffoliTest, ActionAndPhase) {
  Circuit c = *BuildPseudoToffoli(0, 1, 2, 3);
  EXPECT_EQ(c.gates().size(), 3u);
  // Basis index bit0 = u, bit1 = v, bit2 = w.
  auto r = Simulate(c, 0b101, 0);
  EXPECT_NEAR(r->state.amplitudes()[0b111].real(), 1, 1e-12);
  r = Simulate(c, 0b110, 0);  // u=0, v=1, w=1.
  EXPECT_NEAR(r->state.amplitudes()[0b110].real(), -1, 1e-12);
  Eigen::MatrixXcd u = *UnitaryOf(c);
  Eigen::MatrixXcd want = Eigen::MatrixXcd::Zero(8, 8);
  for (int k = 0; k < 8; ++k) {
    int bu = k & 1, bv = (k >> 1) & 1, bw = (k >> 2) & 1;
    want(bu && bw ? k ^ 2 : k, k) = (!bu && bv && bw) ? -1 : 1;
  }
  EXPECT_LT((u - want).norm(), 1e-12);
  EXPECT_TRUE(BuildPseudoToffoli(2, 1, 0, 3).ok());
  EXPECT_FALSE(BuildPseudoToffoli(0, 2, 1, 3).ok());
}

TEST(ControlledSwapTest, DepthAndAction) {
  EXPECT_EQ(Depth(BuildControlledSwapCascade(4)), 10);
  for (int n = 1; n <= 12; ++n) {
    Circuit c = BuildControlledSwapCascade(n);
    EXPECT_EQ(Depth(c), 2 * n + 2) << n;
    EXPECT_TRUE(ValidateNearestNeighbor(c).empty());
  }
  Circuit c = BuildControlledSwapCascade(4);
  const auto& in = c.layout_in();
  const auto& out = c.layout_out();
  for (int cbit = 0; cbit <= 1; ++cbit) {
    BitString bits(9);
    bits[in.at("c").positions[0]] = cbit;
    WriteRegister(&bits, in.at("X").positions, 0b1011);
    auto r = SimulateReversible(c, bits);
    ASSERT_TRUE(r.ok()) << r.status();
    EXPECT_EQ(ReadRegister(r->bits, out.at("X").positions),
              cbit ? 0u : 0b1011u);
    EXPECT_EQ(ReadRegister(r->bits, out.at("Y").positions),
              cbit ? 0b1011u : 0u);
    EXPECT_EQ(r->bits[out.at("c").positions[0]], cbit);
  }
}

TEST(ControlledSwapTest, NoPhaseWithZeroTargetAndPhaseOtherwise) {
  const int n = 3;
  Circuit c = BuildControlledSwapCascade(n);
  const auto& in = c.layout_in();
  const auto& out = c.layout_out();
  for (int cbit = 0; cbit <= 1; ++cbit) {
    for (uint64_t x = 0; x < 8; ++x) {
      BitString bits(2 * n + 1);
      bits[0] = cbit;
      WriteRegister(&bits, in.at("X").positions, x);
      uint64_t idx = ReadRegister(bits, {0, 1, 2, 3, 4, 5, 6});
      auto r = Simulate(c, idx, 0);
      BitString ob(2 * n + 1);
      ob[out.at("c").positions[0]] = cbit;
      WriteRegister(&ob, out.at("X").positions, cbit ? 0 : x);
      WriteRegister(&ob, out.at("Y").positions, cbit ? x : 0);
      uint64_t want = ReadRegister(ob, {0, 1, 2, 3, 4, 5, 6});
      EXPECT_NEAR(r->state.amplitudes()[want].real(), 1, 1e-12);
    }
  }
  // Y_0 = 1, X_0 = 0, c = 1 hits the flagged basis state.
  BitString bits(2 * n + 1);
  bits[0] = 1;
  bits[in.at("Y").positions[0]] = 1;
  auto r = Simulate(c, ReadRegister(bits, {0, 1, 2, 3, 4, 5, 6}), 0);
  double total_phase = 0;
  for (const Amplitude& a : r->state.amplitudes()) total_phase += a.real();
  EXPECT_NEAR(total_phase, -1, 1e-12);
}

TEST(MeshTest, Interleaves) {
  EXPECT_TRUE(BuildMesh(1).gates().empty());
  EXPECT_EQ(BuildMesh(2).gates().size(), 1u);
  EXPECT_EQ(Depth(BuildMesh(2)), 1);
  for (int n = 1; n <= 10; ++n) {
    Circuit m = BuildMesh(n);
    EXPECT_LE(Depth(m), n);
    EXPECT_LE(CountSize(m, kNN), n * (n - 1) / 2);
    EXPECT_TRUE(ValidateNearestNeighbor(m).empty());
  }
  const int n = 8;
  Circuit m = BuildMesh(n);
  Circuit u = BuildUnmesh(n);
  for (uint64_t trial = 0; trial < 20; ++trial) {
    uint64_t b = (trial * 37) & 0xff, y = (trial * 91 + 5) & 0xff;
    BitString bits(2 * n);
    WriteRegister(&bits, m.layout_in().at("B").positions, b);
    WriteRegister(&bits, m.layout_in().at("Y").positions, y);
    auto r = SimulateReversible(m, bits);
    for (int i = 0; i < n; ++i) {
      EXPECT_EQ(r->bits[2 * i], (b >> i) & 1);
      EXPECT_EQ(r->bits[2 * i + 1], (y >> i) & 1);
    }
    auto back = SimulateReversible(u, r->bits);
    EXPECT_EQ(back->bits, bits);
  }
}

TEST(FanoutTest, TreeDepthAndInverse) {
  EXPECT_EQ(BuildFanout(1).gates().size(), 1u);
  EXPECT_EQ(Depth(BuildFanout(1), kGeneral), 1);
  EXPECT_EQ(Depth(BuildFanout(7), kGeneral), 3);
  for (int n = 1; n <= 20; ++n) {
    int want = 0;
    while ((1 << want) < n + 1) ++want;
    EXPECT_EQ(Depth(BuildFanout(n), kGeneral), want) << n;
  }
  EXPECT_FALSE(ComputeDepth(BuildFanout(4), kNN).ok());
  Circuit f = BuildFanout(4);
  Circuit both = *Concat(f, *Invert(f));
  for (uint64_t k = 0; k < 32; ++k) {
    auto r = Simulate(both, k, 0);
    EXPECT_NEAR(FidelityToBasis(r->state, k), 1, 1e-12);
  }
  auto r = SimulateReversible(f, {1, 0, 0, 0, 0});
  EXPECT_EQ(r->bits, (BitString{1, 1, 1, 1, 1}));
}

}  // namespace
}  // namespace nnashor
