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

// The modular repeated adder and the quotient estimator.
//
// Q holds V = z_top + sum_i y_i x_top_i in Fourier form (element j carries
// V / 2^(j+1) of a turn). Step k of the loop works on the low L = l0 + k
// elements: subtract 2^(k-1) m_top, inverse QFT, keep the top bit as
// bb_k = 1 - qhat_{k-1}, QFT the rest, and add 2^(k-1) m_top back if bb_k.
// bb_k then rotates A by 2^(k-1) m, which together with the constant
// -(2^K - 1) m leaves A = sum_i y_i x_i - qhat m. The loop is undone in
// reverse afterwards.

#include <string>

#include "absl/strings/str_cat.h"
#include "nnashor/check.h"
#include "nnashor/gate_library.h"
#include "nnashor/qarith.h"
#include "qarith_internal.h"

namespace nnashor {
namespace internal {
namespace {

std::string Key(const std::string& tag, const std::string& what) {
  return absl::StrCat(tag, "/", what);
}
std::string Key(const std::string& tag, const std::string& what, int k) {
  return absl::StrCat(tag, "/", what, "/", k);
}

// Phases of Q[j] for the forward loop, appended in order.
void ForwardLoopPhases(Template* t, int e, int j, const AdderConstants& c,
                       const std::string& tag) {
  for (int k = c.K; k >= 1; --k) {
    const int L = c.l0 + k;
    if (j < L) {
      if (k < c.K) t->AddPhase(e, Key(tag, "ab", k + 1));
      t->AddPhase(e, Key(tag, "iF.pre", k));
      t->AddPhase(e, Key(tag, "iF.post", k));
      if (j == L - 1) t->AddPhase(e, Key(tag, "bd", k));
    }
    if (j < L - 1) {
      t->AddPhase(e, Key(tag, "fF.pre", k));
      t->AddPhase(e, Key(tag, "fF.post", k));
    }
  }
  if (j < c.l0) t->AddPhase(e, Key(tag, "ab", 1));
}

void ForwardLoopEvents(Template* t, const std::vector<int>& Q,
                       const AdderConstants& c, const std::string& tag,
                       std::optional<int> cutoff) {
  for (int k = c.K; k >= 1; --k) {
    const int L = c.l0 + k;
    const BigInt sub = c.m_top << (k - 1);
    for (int j = 0; j < L; ++j) {
      t->AddEnter(Q[j], Key(tag, "iF.pre", k), Gate::Rz(0, Turns(-sub, j + 1)));
    }
    std::vector<int> low(Q.begin(), Q.begin() + L);
    AddQftEvents(t, low, Key(tag, "iF.pre", k), Key(tag, "iF.post", k),
                 /*inverse=*/true, cutoff);
    low.pop_back();
    AddQftEvents(t, low, Key(tag, "fF.pre", k), Key(tag, "fF.post", k),
                 /*inverse=*/false, cutoff);
    const int bb = Q[L - 1];
    for (int i = 0; i < L - 1; ++i) {
      t->Cross(bb, Key(tag, "bd", k), Q[i], Key(tag, "ab", k), kPrioQuotientBit,
               CRzSwap(true, Turns(sub, i + 1)));
    }
  }
}

void ReverseLoopPhases(Template* t, int e, int j, const AdderConstants& c,
                       const std::string& tag) {
  for (int k = 1; k <= c.K; ++k) {
    const int L = c.l0 + k;
    if (j < L - 1) {
      t->AddPhase(e, Key(tag, "sb", k));
      t->AddPhase(e, Key(tag, "iR.pre", k));
      t->AddPhase(e, Key(tag, "iR.post", k));
    }
    if (j == L - 1) t->AddPhase(e, Key(tag, "bu", k));
    if (j < L) {
      t->AddPhase(e, Key(tag, "fR.pre", k));
      t->AddPhase(e, Key(tag, "fR.post", k));
    }
  }
}

void ReverseLoopEvents(Template* t, const std::vector<int>& Q,
                       const AdderConstants& c, const std::string& tag,
                       std::optional<int> cutoff) {
  for (int k = 1; k <= c.K; ++k) {
    const int L = c.l0 + k;
    const BigInt sub = c.m_top << (k - 1);
    const int bb = Q[L - 1];
    for (int i = 0; i < L - 1; ++i) {
      t->Cross(Q[i], Key(tag, "sb", k), bb, Key(tag, "bu", k), kPrioQuotientBit,
               CRzSwap(false, Turns(-sub, i + 1)));
    }
    std::vector<int> low(Q.begin(), Q.begin() + L - 1);
    AddQftEvents(t, low, Key(tag, "iR.pre", k), Key(tag, "iR.post", k),
                 /*inverse=*/true, cutoff);
    low.push_back(bb);
    AddQftEvents(t, low, Key(tag, "fR.pre", k), Key(tag, "fR.post", k),
                 /*inverse=*/false, cutoff);
    for (int j = 0; j < L; ++j) {
      t->AddExit(Q[j], Key(tag, "fR.post", k), Gate::Rz(0, Turns(sub, j + 1)));
    }
  }
}

}  // namespace

AdderConstants MakeAdderConstants(const MultiplierParams& p, const BigInt& a) {
  AdderConstants c;
  c.n = p.n;
  c.l0 = p.l0;
  c.K = p.K();
  c.m = p.m;
  const int d = p.shift();
  XTable xs = MakeXTable(a, p.m, p.n, p.l0);
  c.x = xs.x;
  for (const BigInt& x : xs.x) c.x_top.push_back(x >> d);
  c.m_top = (p.m + (BigInt(1) << d) - 1) >> d;
  c.z_top = p.z >> d;
  return c;
}

void AddQftEvents(Template* t, const std::vector<int>& el,
                  const std::string& pre, const std::string& post, bool inverse,
                  std::optional<int> cutoff) {
  const int L = static_cast<int>(el.size());
  for (int e : el) t->AddEnter(e, post, Gate::H(0));
  for (int lo = 0; lo < L; ++lo) {
    for (int hi = lo + 1; hi < L; ++hi) {
      const int exp = hi - lo + 1;
      EventGate g;
      if (!cutoff.has_value() || exp <= *cutoff) {
        g = EventGate{GateKind::kFusedCPhaseSwap, true,
                      Turns(inverse ? -1 : 1, exp)};
      }
      if (inverse) {
        t->Cross(el[lo], post, el[hi], pre, kPrioTransform, g);
      } else {
        t->Cross(el[hi], post, el[lo], pre, kPrioTransform, g);
      }
    }
  }
}

Template ModAddTemplate(const std::vector<int>& C, const std::vector<int>& Q,
                        const std::vector<int>& A, const AdderConstants& c,
                        const std::string& tag, std::optional<int> cutoff) {
  const int n = c.n;
  const int l = c.l0 + c.K;
  NNASHOR_CHECK(static_cast<int>(C.size()) == n);
  NNASHOR_CHECK(static_cast<int>(A.size()) == n);
  NNASHOR_CHECK(static_cast<int>(Q.size()) == l);
  Template t;

  for (int j = 0; j < l; ++j) {
    t.AddPhase(Q[j], Key(tag, "ydown"));
    ForwardLoopPhases(&t, Q[j], j, c, tag);
    t.AddPhase(Q[j], Key(tag, "pass"));
    ReverseLoopPhases(&t, Q[j], j, c, tag);
    t.AddPhase(Q[j], Key(tag, "yup"));
    t.AddEnter(Q[j], Key(tag, "ydown"), Gate::H(0));
    t.AddEnter(Q[j], Key(tag, "ydown"), Gate::Rz(0, Turns(c.z_top, j + 1)));
  }
  ForwardLoopEvents(&t, Q, c, tag, cutoff);
  ReverseLoopEvents(&t, Q, c, tag, cutoff);
  for (int j = 0; j < l; ++j) {
    t.AddExit(Q[j], Key(tag, "yup"), Gate::Rz(0, Turns(-c.z_top, j + 1)));
    t.AddExit(Q[j], Key(tag, "yup"), Gate::H(0));
  }

  const BigInt a_const = -(((BigInt(1) << c.K) - 1) * c.m);
  for (int i = 0; i < n; ++i) {
    t.AddPhase(A[i], Key(tag, "acc"));
    t.AddPhase(A[i], Key(tag, "pre"));
    t.AddPhase(A[i], Key(tag, "post"));
    t.AddEnter(A[i], Key(tag, "acc"), Gate::H(0));
    t.AddEnter(A[i], Key(tag, "acc"), Gate::Rz(0, Turns(a_const, i + 1)));
  }
  AddQftEvents(&t, A, Key(tag, "pre"), Key(tag, "post"), /*inverse=*/true,
               cutoff);
  for (int j = 0; j < l; ++j) {
    for (int i = 0; i < n; ++i) {
      EventGate g;
      if (j >= c.l0) {
        g = CRzSwap(true, Turns(c.m << (j - c.l0), i + 1));
      }
      t.Cross(Q[j], Key(tag, "pass"), A[i], Key(tag, "pre"), kPrioCross, g);
    }
  }
  for (int i = 0; i < n; ++i) {
    t.AddPhase(C[i], Key(tag, "down"));
    t.AddPhase(C[i], Key(tag, "up"));
    for (int j = 0; j < l; ++j) {
      t.Cross(C[i], Key(tag, "down"), Q[j], Key(tag, "ydown"), kPrioCross,
              CRzSwap(true, Turns(c.x_top[i], j + 1)));
      t.Cross(Q[j], Key(tag, "yup"), C[i], Key(tag, "up"), kPrioReturn,
              CRzSwap(false, Turns(-c.x_top[i], j + 1)));
    }
    for (int a = 0; a < n; ++a) {
      t.Cross(C[i], Key(tag, "down"), A[a], Key(tag, "acc"), kPrioCross,
              CRzSwap(true, Turns(c.x[i], a + 1)));
    }
  }
  return t;
}

Template QuotientStepTemplate(const std::vector<int>& Q,
                              const AdderConstants& c, int k,
                              const std::string& tag) {
  Template t;
  const int L = c.l0 + k;
  for (int j = 0; j < L; ++j) {
    t.AddPhase(Q[j], Key(tag, "iF.pre", k));
    t.AddPhase(Q[j], Key(tag, "iF.post", k));
    if (j == L - 1) {
      t.AddPhase(Q[j], Key(tag, "bd", k));
    } else {
      t.AddPhase(Q[j], Key(tag, "fF.pre", k));
      t.AddPhase(Q[j], Key(tag, "fF.post", k));
      t.AddPhase(Q[j], Key(tag, "ab", k));
    }
  }
  const BigInt sub = c.m_top << (k - 1);
  for (int j = 0; j < L; ++j) {
    t.AddEnter(Q[j], Key(tag, "iF.pre", k), Gate::Rz(0, Turns(-sub, j + 1)));
  }
  std::vector<int> low(Q.begin(), Q.begin() + L);
  AddQftEvents(&t, low, Key(tag, "iF.pre", k), Key(tag, "iF.post", k),
               /*inverse=*/true, std::nullopt);
  low.pop_back();
  AddQftEvents(&t, low, Key(tag, "fF.pre", k), Key(tag, "fF.post", k),
               /*inverse=*/false, std::nullopt);
  for (int i = 0; i < L - 1; ++i) {
    t.Cross(Q[L - 1], Key(tag, "bd", k), Q[i], Key(tag, "ab", k),
            kPrioQuotientBit, CRzSwap(true, Turns(sub, i + 1)));
  }
  return t;
}

Template QuotientLoopTemplate(const std::vector<int>& Q,
                              const AdderConstants& c, const std::string& tag) {
  Template t;
  for (int j = 0; j < static_cast<int>(Q.size()); ++j) {
    ForwardLoopPhases(&t, Q[j], j, c, tag);
  }
  ForwardLoopEvents(&t, Q, c, tag, std::nullopt);
  return t;
}

}  // namespace internal

namespace {

std::vector<int> Iota(int start, int count) {
  std::vector<int> v(count);
  for (int i = 0; i < count; ++i) v[i] = start + i;
  return v;
}

std::vector<int> Positions(const std::map<int, int>& pos,
                           const std::vector<int>& elements) {
  std::vector<int> out;
  for (int e : elements) out.push_back(pos.at(e));
  return out;
}

}  // namespace

absl::StatusOr<QuotientEstimator> BuildQuotientEstimator(
    const MultiplierParams& p) {
  NNASHOR_RETURN_IF_ERROR(Validate(p));
  internal::AdderConstants c = internal::MakeAdderConstants(p, p.a);
  internal::Elements el;
  std::vector<int> Y = el.NewRegister("Y", p.n);
  std::vector<int> Q = el.NewRegister("Q", p.l);

  Template t;
  for (int j = 0; j < p.l; ++j) {
    t.AddPhase(Q[j], "ydown");
    t.AddEnter(Q[j], "ydown", Gate::H(0));
    t.AddEnter(Q[j], "ydown", Gate::Rz(0, internal::Turns(c.z_top, j + 1)));
  }
  for (int i = 0; i < p.n; ++i) {
    t.AddPhase(Y[i], "down");
    for (int j = 0; j < p.l; ++j) {
      t.Cross(Y[i], "down", Q[j], "ydown", internal::kPrioCross,
              internal::CRzSwap(true, internal::Turns(c.x_top[i], j + 1)));
    }
  }
  Template loop = internal::QuotientLoopTemplate(Q, c, "q");
  t.Merge(loop);

  std::vector<int> line = Y;
  line.insert(line.end(), Q.begin(), Q.end());
  absl::StatusOr<Schedule> s = RunSystolic(line, t);
  if (!s.ok()) return s.status();

  QuotientEstimator out{Circuit(p.n + p.l), 0};
  AppendSchedule(*s, 0, &out.circuit);
  NNASHOR_RETURN_IF_ERROR(out.circuit.SetLayoutIn(
      {{"Y", MakeLayout(Iota(0, p.n))}, {"Q", MakeLayout(Iota(p.n, p.l))}}));
  std::map<int, int> pos = PositionsOf(s->final_line);
  std::vector<int> low(Q.begin(), Q.begin() + p.l0);
  std::vector<int> top(Q.begin() + p.l0, Q.end());
  NNASHOR_RETURN_IF_ERROR(
      out.circuit.SetLayoutOut({{"Y", MakeLayout(Positions(pos, Y))},
                                {"R", MakeLayout(Positions(pos, low))},
                                {"S", MakeLayout(Positions(pos, top))}}));

  // Each step on its own, starting from Q in Fourier form; the sum is what
  // the per-step count 4(l0 + k) - 3 describes.
  for (int k = 1; k <= p.K(); ++k) {
    std::vector<int> q(Q.begin(), Q.begin() + p.l0 + k);
    absl::StatusOr<Schedule> ss =
        RunSystolic(q, internal::QuotientStepTemplate(Q, c, k, "q"));
    if (!ss.ok()) return ss.status();
    Circuit sc(static_cast<int>(q.size()));
    AppendSchedule(*ss, 0, &sc);
    absl::StatusOr<int> d = ComputeDepth(sc, CostModel{});
    if (!d.ok()) return d.status();
    out.loop_depth += *d;
  }
  // The whole loop as one schedule, where consecutive steps overlap.
  absl::StatusOr<Schedule> ls = RunSystolic(Q, loop);
  if (!ls.ok()) return ls.status();
  Circuit lc(p.l);
  AppendSchedule(*ls, 0, &lc);
  absl::StatusOr<int> d = ComputeDepth(lc, CostModel{});
  if (!d.ok()) return d.status();
  out.overlapped_loop_depth = *d;
  return out;
}

absl::StatusOr<Circuit> BuildModularRepeatedAdder(const MultiplierParams& p) {
  NNASHOR_RETURN_IF_ERROR(Validate(p));
  internal::AdderConstants c = internal::MakeAdderConstants(p, p.a);
  internal::Elements el;
  std::vector<int> Y = el.NewRegister("Y", p.n);
  std::vector<int> Q = el.NewRegister("Q", p.l);
  std::vector<int> Z = el.NewRegister("Z", p.n);
  std::optional<int> cutoff;
  if (p.variant == Variant::kGeneral && !p.exact_mode) {
    cutoff = DefaultQftCutoff(p.n);
  }
  Template t = internal::ModAddTemplate(Y, Q, Z, c, "a", cutoff);
  std::vector<int> line = Y;
  line.insert(line.end(), Q.begin(), Q.end());
  line.insert(line.end(), Z.begin(), Z.end());
  absl::StatusOr<Schedule> s = RunSystolic(line, t);
  if (!s.ok()) return s.status();
  const int width = static_cast<int>(line.size());
  Circuit circ(width);
  AppendSchedule(*s, 0, &circ);
  std::map<int, int> in = PositionsOf(line);
  std::map<int, int> out = PositionsOf(s->final_line);
  NNASHOR_RETURN_IF_ERROR(
      circ.SetLayoutIn({{"Y", MakeLayout(Positions(in, Y))},
                        {"Q", MakeLayout(Positions(in, Q))},
                        {"Z", MakeLayout(Positions(in, Z))}}));
  NNASHOR_RETURN_IF_ERROR(
      circ.SetLayoutOut({{"Y", MakeLayout(Positions(out, Y))},
                         {"Q", MakeLayout(Positions(out, Q))},
                         {"Z", MakeLayout(Positions(out, Z))}}));
  return circ;
}

}  // namespace nnashor
