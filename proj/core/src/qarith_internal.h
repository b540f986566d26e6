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

#ifndef NNASHOR_SRC_QARITH_INTERNAL_H_
#define NNASHOR_SRC_QARITH_INTERNAL_H_

#include <optional>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "nnashor/circuit.h"
#include "nnashor/params.h"
#include "nnashor/systolic.h"

namespace nnashor {
namespace internal {

// Event priorities; lower fires first when two events compete for a wire.
inline constexpr int kPrioTransform = 0;
inline constexpr int kPrioQuotientBit = 1;
inline constexpr int kPrioCross = 2;
inline constexpr int kPrioReturn = 3;
inline constexpr int kPrioMove = 4;
inline constexpr int kPrioReverse = 6;

// Allocates element ids and remembers their names.
class Elements {
 public:
  int New(const std::string& name) {
    names_.push_back(name);
    return static_cast<int>(names_.size()) - 1;
  }
  std::vector<int> NewRegister(const std::string& name, int size) {
    std::vector<int> r;
    for (int i = 0; i < size; ++i) r.push_back(New(name + std::to_string(i)));
    return r;
  }
  const std::string& name(int e) const { return names_[e]; }

 private:
  std::vector<std::string> names_;
};

inline DyadicPhase Turns(const BigInt& num, int exp) {
  return DyadicPhase::FromBig(num, exp);
}

// Controlled rotation fused with a swap; the control is the upper element
// when ctrl_up.
inline EventGate CRzSwap(bool ctrl_up, DyadicPhase p) {
  return EventGate{GateKind::kFusedCRzSwap, ctrl_up, p};
}

// Constants for one modular repeated adder: adds sum_i y_i x_i for the table
// of `a`, estimating the quotient from the top l0 bits.
struct AdderConstants {
  int n = 0;
  int l0 = 0;
  int K = 0;
  std::vector<BigInt> x;      // 2^i a mod m.
  std::vector<BigInt> x_top;  // x_i >> (n - l0).
  BigInt m;
  BigInt m_top;  // ceil(m / 2^(n - l0)).
  BigInt z_top;  // z >> (n - l0).
};
AdderConstants MakeAdderConstants(const MultiplierParams& p, const BigInt& a);

// QFT events between elements el[0..L-1] (el[0] least significant) using
// the given pre/post keys, which the caller has already added. Adds the
// Hadamard on entering post. Forward needs more significant elements above;
// inverse needs less significant elements above. Rotations by 1/2^e with
// e > cutoff become plain swaps.
void AddQftEvents(Template* t, const std::vector<int>& el,
                  const std::string& pre, const std::string& post, bool inverse,
                  std::optional<int> cutoff);

// Modular repeated adder on C (controls), Q (quotient), A (accumulator,
// starting at zero). Takes line order C, Q, A (C[0] and Q[0] and A[0] on
// top) to A, C, Q with A in reverse order. Afterwards A holds
// sum_i c_i x_i - qhat m (mod 2^n), Q is zero and C is unchanged.
Template ModAddTemplate(const std::vector<int>& C, const std::vector<int>& Q,
                        const std::vector<int>& A, const AdderConstants& k,
                        const std::string& tag, std::optional<int> cutoff);

// One step of the quotient loop on Q[0 .. l0+k-1], Q[0] on top.
Template QuotientStepTemplate(const std::vector<int>& Q,
                              const AdderConstants& c, int k,
                              const std::string& tag);
// Forward quotient loop alone, on Q in Fourier form: for k = K..1, subtract
// 2^(k-1) m_top, peel the sign bit, restore.
Template QuotientLoopTemplate(const std::vector<int>& Q,
                              const AdderConstants& k, const std::string& tag);

// One nearest-neighbor multiplier round in its own frame. Line before the
// round: QY, [d], c, B0 Y0 B1 Y1 ..., QZ, Z when the opening controlled swap
// is omitted (it was fused into the previous round), and QY, [d], B0 Y0 ...,
// c, QZ, Z otherwise. With `next`, the extra control d swaps B back out
// for the following round and the closing window half is skipped.
struct RoundOptions {
  bool with_open_swap = true;
  bool with_next = false;
  // Keep an unused d element in the line (last round of a chain).
  bool idle_d = false;
};
absl::StatusOr<Circuit> BuildNearestNeighborRound(const MultiplierParams& p,
                                                  const RoundOptions& o);

// The elements, starting line and template of a round. For the general
// variant the controlled swaps are left out (their control still walks
// through the pairs as plain swaps) and transforms are approximate.
struct RoundPlan {
  Elements el;
  std::vector<int> line;
  Template t;
  std::vector<int> QY, B, Y, QZ, Z;
  int c = -1;
  int d = -1;
};
absl::StatusOr<RoundPlan> PlanRound(const MultiplierParams& p,
                                    const RoundOptions& o);
// Register layout for a line order of the plan's elements.
Layout PlanLayout(const RoundPlan& plan, const std::vector<int>& order);

// A round for the general architecture. Registers never move.
absl::StatusOr<Circuit> BuildGeneralRound(const MultiplierParams& p);

}  // namespace internal
}  // namespace nnashor

#endif  // NNASHOR_SRC_QARITH_INTERNAL_H_
