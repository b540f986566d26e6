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

#include <map>
#include <vector>

#include "nnashor/check.h"
#include "nnashor/qarith.h"
#include "qarith_internal.h"

namespace nnashor {

absl::StatusOr<Circuit> BuildNestedControlledAdder(const XTable& xs,
                                                   bool constant_z,
                                                   const BigInt& z) {
  const int n = xs.n;
  if (n < 2 || static_cast<int>(xs.x.size()) != n) {
    return absl::InvalidArgumentError("nested adder needs n >= 2");
  }
  internal::Elements el;
  std::vector<int> Y = el.NewRegister("Y", n);
  std::vector<int> Z = el.NewRegister("Z", n);
  Template t;
  for (int j = 0; j < n; ++j) {
    if (!constant_z) {
      t.AddPhase(Z[j], "f.pre");
      t.AddPhase(Z[j], "f.post");
    }
    t.AddPhase(Z[j], "acc");
    t.AddPhase(Z[j], "i.pre");
    t.AddPhase(Z[j], "i.post");
    t.AddPhase(Z[j], "ret");
    if (constant_z) {
      t.AddEnter(Z[j], "acc", Gate::H(0));
      t.AddEnter(Z[j], "acc", Gate::Rz(0, internal::Turns(z, j + 1)));
    }
  }
  if (!constant_z) {
    internal::AddQftEvents(&t, Z, "f.pre", "f.post", false, std::nullopt);
  }
  internal::AddQftEvents(&t, Z, "i.pre", "i.post", true, std::nullopt);
  for (int i = 0; i < n; ++i) {
    t.AddPhase(Y[i], "down");
    t.AddPhase(Y[i], "up");
    for (int j = 0; j < n; ++j) {
      t.Cross(Y[i], "down", Z[j], "acc", internal::kPrioCross,
              internal::CRzSwap(true, internal::Turns(xs.x[i], j + 1)));
      t.Cross(Z[j], "ret", Y[i], "up", internal::kPrioReturn);
    }
  }
  // The forward transform wants the high bits on top, the inverse the low
  // bits; with a constant the forward transform is skipped.
  std::vector<int> line = Y;
  if (constant_z) {
    line.insert(line.end(), Z.begin(), Z.end());
  } else {
    line.insert(line.end(), Z.rbegin(), Z.rend());
  }
  absl::StatusOr<Schedule> s = RunSystolic(line, t);
  if (!s.ok()) return s.status();
  Circuit c(2 * n);
  AppendSchedule(*s, 0, &c);
  std::map<int, int> in = PositionsOf(line), out = PositionsOf(s->final_line);
  auto layout = [](const std::map<int, int>& pos, const std::vector<int>& r) {
    std::vector<int> p;
    for (int e : r) p.push_back(pos.at(e));
    return MakeLayout(p);
  };
  NNASHOR_RETURN_IF_ERROR(
      c.SetLayoutIn({{"Y", layout(in, Y)}, {"Z", layout(in, Z)}}));
  NNASHOR_RETURN_IF_ERROR(
      c.SetLayoutOut({{"Y", layout(out, Y)}, {"Z", layout(out, Z)}}));
  return c;
}

}  // namespace nnashor
