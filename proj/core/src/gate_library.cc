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

#include <cstdlib>
#include <numeric>
#include <vector>

#include "absl/strings/str_cat.h"
#include "nnashor/check.h"

namespace nnashor {
namespace {

std::vector<int> Range(int start, int count, int step = 1) {
  std::vector<int> v(count);
  for (int i = 0; i < count; ++i) v[i] = start + i * step;
  return v;
}

}  // namespace

int DefaultQftCutoff(int n) {
  int k = 0;
  while ((1 << k) < n) ++k;
  return k + 2;
}

Circuit BuildQft(const QftSpec& spec) {
  const int n = spec.n;
  NNASHOR_CHECK(n >= 1);
  Circuit c(n);
  auto keep = [&spec](int exp) {
    return !spec.approx_cutoff.has_value() || exp <= *spec.approx_cutoff;
  };
  if (spec.include_swaps) {
    // ord[p]: element on wire p. Element j enters on wire j and, once
    // Fourier, climbs past every lower element still in computational form.
    std::vector<int> ord(n);
    std::iota(ord.begin(), ord.end(), 0);
    for (int j = n - 1; j >= 0; --j) {
      int p = n - 1;
      NNASHOR_CHECK(ord[p] == j);
      c.Add(Gate::H(p));
      while (p > 0 && ord[p - 1] < j) {
        int e = j - ord[p - 1] + 1;
        DyadicPhase angle = DyadicPhase::FromBig(1, e);
        c.Add(keep(e) ? Gate::Fcps(p, p - 1, angle) : Gate::Swap(p, p - 1));
        std::swap(ord[p], ord[p - 1]);
        --p;
      }
    }
    NNASHOR_CHECK_OK(c.SetLayoutIn({{"x", MakeLayout(Range(0, n))}}));
    NNASHOR_CHECK_OK(c.SetLayoutOut({{"x", MakeLayout(Range(n - 1, n, -1))}}));
  } else {
    for (int j = n - 1; j >= 0; --j) {
      c.Add(Gate::H(j));
      for (int i = j - 1; i >= 0; --i) {
        int e = j - i + 1;
        if (keep(e)) c.Add(Gate::CPhase(j, i, DyadicPhase::FromBig(1, e)));
      }
    }
    NNASHOR_CHECK_OK(c.SetLayoutIn({{"x", MakeLayout(Range(0, n))}}));
    NNASHOR_CHECK_OK(c.SetLayoutOut({{"x", MakeLayout(Range(0, n))}}));
  }
  if (spec.inverse) {
    absl::StatusOr<Circuit> inv = Invert(c);
    NNASHOR_CHECK_OK(inv.status());
    return *std::move(inv);
  }
  return c;
}

absl::StatusOr<Circuit> BuildPseudoToffoli(int u, int v, int w, int width) {
  if (std::abs(u - v) != 1 || std::abs(v - w) != 1 || u == w) {
    return absl::InvalidArgumentError(
        absl::StrCat("pseudo-Toffoli wires ", u, ",", v, ",", w,
                     " are not a contiguous run"));
  }
  Circuit c(width);
  NNASHOR_RETURN_IF_ERROR(c.Append(Gate::PtHalfA(v, u)));
  NNASHOR_RETURN_IF_ERROR(c.Append(Gate::CNot(w, v)));
  NNASHOR_RETURN_IF_ERROR(c.Append(Gate::PtHalfB(v, u)));
  return c;
}

Circuit BuildControlledSwapCascade(int n) {
  NNASHOR_CHECK(n >= 1);
  Circuit c(2 * n + 1);
  // Y_i ^= c X_i as a pseudo-Toffoli whose window is opened early, and then
  // X_i ^= Y_i, which equals X_i ^= c Y_i because Y_i was zero.
  for (int i = 0; i < n; ++i) c.Add(Gate::PtHalfA(2 * i + 2, 2 * i + 1));
  for (int i = 0; i < n; ++i) {
    const int x = 2 * i + 1;  // c sits at 2i, then X_i, Y_i.
    c.Add(Gate::Swap(x - 1, x));
    c.Add(Gate::Fcxs(x, x + 1));
    c.Add(Gate::PtHalfBCNot(x, x - 1));
  }
  NNASHOR_CHECK_OK(c.SetLayoutIn({{"c", MakeLayout({0})},
                                  {"X", MakeLayout(Range(1, n, 2))},
                                  {"Y", MakeLayout(Range(2, n, 2))}}));
  NNASHOR_CHECK_OK(c.SetLayoutOut({{"c", MakeLayout({2 * n})},
                                   {"X", MakeLayout(Range(0, n, 2))},
                                   {"Y", MakeLayout(Range(1, n, 2))}}));
  return c;
}

Circuit BuildMesh(int n) {
  NNASHOR_CHECK(n >= 1);
  Circuit c(2 * n);
  // Y_i climbs from n+i to 2i+1.
  for (int i = 0; i < n - 1; ++i) {
    for (int p = n + i; p > 2 * i + 1; --p) c.Add(Gate::Swap(p - 1, p));
  }
  NNASHOR_CHECK_OK(c.SetLayoutIn(
      {{"B", MakeLayout(Range(0, n))}, {"Y", MakeLayout(Range(n, n))}}));
  NNASHOR_CHECK_OK(c.SetLayoutOut(
      {{"B", MakeLayout(Range(0, n, 2))}, {"Y", MakeLayout(Range(1, n, 2))}}));
  return c;
}

Circuit BuildUnmesh(int n) {
  absl::StatusOr<Circuit> inv = Invert(BuildMesh(n));
  NNASHOR_CHECK_OK(inv.status());
  return *std::move(inv);
}

Circuit BuildFanout(int n) {
  NNASHOR_CHECK(n >= 1);
  Circuit c(n + 1);
  std::vector<int> holders = {0};
  int next = 1;
  while (next <= n) {
    std::vector<int> round = holders;
    for (int h : round) {
      if (next > n) break;
      c.Add(Gate::CNot(h, next));
      holders.push_back(next++);
    }
  }
  NNASHOR_CHECK_OK(
      c.SetLayoutIn({{"c", MakeLayout({0})}, {"T", MakeLayout(Range(1, n))}}));
  NNASHOR_CHECK_OK(c.SetLayoutOut(c.layout_in()));
  return c;
}

}  // namespace nnashor
