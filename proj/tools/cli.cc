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

#include "cli.h"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/str_cat.h"
#include "json.hpp"
#include "nnashor/analysis.h"
#include "nnashor/circuit.h"
#include "nnashor/circuit_io.h"
#include "nnashor/classical.h"
#include "nnashor/params.h"
#include "nnashor/qarith.h"
#include "nnashor/reversible.h"
#include "nnashor/simulator.h"

namespace nnashor {
namespace {

using nlohmann::json;

struct RunConfig {
  std::string command;
  int n = 0;
  // Integers as given; empty when unset.
  std::string a, m, g, b, c, e, z;
  std::optional<int> l0, l, t;
  std::string variant = "nn";
  std::string mode = "approx";
  uint64_t seed = 1;
  int64_t trials = 0;
  std::string output;
  std::string format = "json";

  // build / verify.
  std::string report;
  std::string manifest;
  std::string dump;
  std::string measurements;
  std::string control = "recycled";
  std::optional<int> rounds;
  bool fixed_z = false;
  int block = 0;
  // stats.
  std::string builder;
  std::vector<int> ns;
  // mc.
  std::string kind;
  std::string xs = "random";
};

absl::Status Usage(std::string msg) {
  return absl::InvalidArgumentError(std::move(msg));
}

absl::StatusOr<std::optional<BigInt>> ParseInt(const std::string& name,
                                               const std::string& s) {
  if (s.empty()) return std::optional<BigInt>();
  if (!std::all_of(s.begin(), s.end(),
                   [](char ch) { return ch >= '0' && ch <= '9'; })) {
    return Usage(absl::StrCat(name, " must be a non-negative decimal integer"));
  }
  return std::optional<BigInt>(BigInt(s));
}

absl::StatusOr<BigInt> RequireInt(const std::string& name,
                                  const std::string& s) {
  absl::StatusOr<std::optional<BigInt>> v = ParseInt(name, s);
  if (!v.ok()) return v.status();
  if (!v->has_value()) return Usage(absl::StrCat("--", name, " is required"));
  return **v;
}

std::string Str(const BigInt& v) { return v.str(); }

absl::Status WriteFile(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) return absl::InvalidArgumentError("cannot open " + path);
  f << text;
  f.close();
  if (!f) return absl::InternalError("cannot write " + path);
  return absl::OkStatus();
}

absl::Status Emit(const std::string& path, const std::string& text,
                  std::ostream& out) {
  if (path.empty()) {
    out << text;
    return absl::OkStatus();
  }
  return WriteFile(path, text);
}

// One level of "key: value" lines (text) or a header and a row (csv); nested
// objects are flattened with dots and arrays are dumped whole.
void Flatten(const json& j, const std::string& prefix,
             std::vector<std::pair<std::string, std::string>>* kv) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    const std::string key = prefix.empty() ? it.key() : prefix + "." + it.key();
    if (it->is_object()) {
      Flatten(*it, key, kv);
    } else if (it->is_string()) {
      kv->emplace_back(key, it->get<std::string>());
    } else {
      kv->emplace_back(key, it->dump());
    }
  }
}

std::string Format(const json& j, const std::string& format) {
  if (format == "json") return j.dump(2) + "\n";
  std::vector<std::pair<std::string, std::string>> kv;
  Flatten(j, "", &kv);
  std::string s;
  if (format == "text") {
    for (const auto& [k, v] : kv) s += k + ": " + v + "\n";
    return s;
  }
  auto quote = [](const std::string& v) {
    if (v.find_first_of(",\"\n") == std::string::npos) return v;
    std::string q = "\"";
    for (char ch : v) q += ch == '"' ? std::string("\"\"") : std::string(1, ch);
    return q + "\"";
  };
  for (size_t i = 0; i < kv.size(); ++i) s += (i ? "," : "") + kv[i].first;
  s += "\n";
  for (size_t i = 0; i < kv.size(); ++i) {
    s += (i ? "," : "") + quote(kv[i].second);
  }
  return s + "\n";
}

json Optional(const std::optional<double>& v) {
  return v.has_value() ? json(*v) : json(nullptr);
}

// ---------------------------------------------------------------------------
// Building.

struct Built {
  std::string builder;
  Circuit circuit;
  std::optional<MultiplierParams> mult;
  std::optional<Exponentiation> expo;
  bool nn = true;
  int l0 = 0, l = 0, t = 0;
};

bool IsExponentiation(const RunConfig& cfg) { return !cfg.g.empty(); }

absl::StatusOr<MultiplierOptions> Options(const RunConfig& cfg) {
  MultiplierOptions o;
  o.l0 = cfg.l0;
  o.t = cfg.t;
  absl::StatusOr<std::optional<BigInt>> z = ParseInt("z", cfg.z);
  if (!z.ok()) return z.status();
  o.z = *z;
  o.seed = cfg.seed;
  o.variant =
      cfg.variant == "general" ? Variant::kGeneral : Variant::kNearestNeighbor;
  o.exact_mode = cfg.mode == "exact";
  if (o.exact_mode && cfg.l0.has_value() && *cfg.l0 != cfg.n) {
    return Usage("exact mode needs l0 = n");
  }
  return o;
}

absl::Status CheckL(const RunConfig& cfg, int l0, int l) {
  if (cfg.l.has_value() && *cfg.l != l) {
    return Usage(absl::StrCat("l must equal l0 + ceil(log2 n) = ", l0, " + ",
                              l - l0, " = ", l));
  }
  return absl::OkStatus();
}

absl::StatusOr<Built> Build(const RunConfig& cfg,
                            const std::optional<BigInt>& exponent) {
  if (cfg.n < 1) return Usage("--n must be at least 1");
  absl::StatusOr<BigInt> m = RequireInt("m", cfg.m);
  if (!m.ok()) return m.status();
  absl::StatusOr<MultiplierOptions> o = Options(cfg);
  if (!o.ok()) return o.status();
  const bool classical = cfg.variant == "classical";
  const bool general = cfg.variant == "general";
  ClassicalOptions co;
  co.block = cfg.block;

  Built out;
  out.nn = !general;
  if (IsExponentiation(cfg)) {
    absl::StatusOr<BigInt> g = RequireInt("g", cfg.g);
    if (!g.ok()) return g.status();
    ExponentiationParams ep;
    ep.n = cfg.n;
    ep.g = *g;
    ep.m = *m;
    ep.mult = *o;
    ep.fixed_z = cfg.fixed_z;
    ep.control_mode = cfg.control == "preallocated" ? ControlMode::kPreallocated
                                                    : ControlMode::kRecycled;
    ep.exponent = exponent;
    ep.rounds = cfg.rounds;
    absl::StatusOr<Exponentiation> x =
        classical ? BuildClassicalExponentiation(ep, co)
                  : BuildExponentiation(ep);
    if (!x.ok()) return Usage(std::string(x.status().message()));
    out.builder = classical ? "classical_exponentiation"
                  : general ? "general_exponentiation"
                            : "exponentiation";
    out.circuit = x->circuit;
    out.l = x->l;
    out.l0 = x->l - CeilLog2(cfg.n);
    out.t = o->t.value_or(CeilLog2(cfg.n) + 2);
    out.expo = *std::move(x);
  } else {
    absl::StatusOr<BigInt> a = RequireInt("a", cfg.a);
    if (!a.ok()) return a.status();
    absl::StatusOr<MultiplierParams> p =
        MakeMultiplierParams(cfg.n, *a, *m, *o);
    if (!p.ok()) return Usage(std::string(p.status().message()));
    absl::StatusOr<Circuit> c =
        classical ? BuildClassicalModMul(*p, co) : BuildControlledModMul(*p);
    if (!c.ok()) return Usage(std::string(c.status().message()));
    out.builder = classical ? "classical_multiplier"
                  : general ? "general_multiplier"
                            : "multiplier";
    out.circuit = *std::move(c);
    out.l0 = p->l0;
    out.l = p->l;
    out.t = p->t;
    out.mult = *std::move(p);
  }
  if (absl::Status s = CheckL(cfg, out.l0, out.l); !s.ok()) return s;
  return out;
}

json BuildReport(const RunConfig& cfg, const Built& b, const ResourceReport& r,
                 bool round_trip) {
  const int n = cfg.n;
  json j;
  j["builder"] = b.builder;
  j["variant"] = cfg.variant;
  j["mode"] = cfg.mode;
  j["n"] = n;
  j["m"] = cfg.m;
  if (b.mult.has_value()) {
    j["a"] = Str(b.mult->a);
    j["z"] = Str(b.mult->z);
  } else {
    j["g"] = cfg.g;
    j["rounds"] = b.expo->rounds.size();
    if (!cfg.e.empty()) j["e"] = cfg.e;
  }
  j["l0"] = b.l0;
  j["l"] = b.l;
  j["t"] = b.t;
  j["seed"] = cfg.seed;
  j["depth"] = r.depth;
  j["width"] = r.width;
  j["size"] = r.size;
  j["gates"] = b.circuit.gates().size();

  // Whole 2n-round formulas only apply when all 2n rounds are built.
  std::string formula = b.builder;
  if (b.expo.has_value() && b.expo->rounds.size() != 2u * n) formula = "";
  const Prediction p = PredictResources(formula, n, b.l);
  j["predicted"] = {{"depth", Optional(p.depth)},
                    {"width", Optional(p.width)},
                    {"size", Optional(p.size)}};

  const double lg = CeilLog2(n);
  json fits = json::array();
  if (b.mult.has_value() && b.builder != "classical_multiplier") {
    fits.push_back({{"name", "depth_coefficient"},
                    {"value", (r.depth - 6 * (2 * b.l - lg) * lg) / n}});
    fits.push_back(
        {{"name", "size_coefficient"}, {"value", double(r.size) / n / n}});
  } else if (b.builder == "classical_multiplier" && n > 1) {
    fits.push_back(
        {{"name", "depth_over_n_log2n"}, {"value", r.depth / (n * lg)}});
  }
  j["coefficient_fits"] = fits;

  json checks = json::array();
  bool pass = round_trip;
  if (b.nn) {
    const size_t bad = ValidateNearestNeighbor(b.circuit).size();
    checks.push_back({{"name", "nearest_neighbor"},
                      {"violations", bad},
                      {"pass", bad == 0}});
    pass = pass && bad == 0;
  }
  if (p.width.has_value()) {
    const bool ok = r.width == *p.width;
    checks.push_back({{"name", "width"},
                      {"value", r.width},
                      {"expected", *p.width},
                      {"pass", ok}});
    pass = pass && ok;
  }
  checks.push_back({{"name", "round_trip"}, {"pass", round_trip}});
  j["bound_checks"] = checks;
  j["pass"] = pass;
  return j;
}

absl::StatusOr<int> CmdBuild(const RunConfig& cfg, std::ostream& out) {
  absl::StatusOr<std::optional<BigInt>> e = ParseInt("e", cfg.e);
  if (!e.ok()) return e.status();
  absl::StatusOr<Built> b = Build(cfg, *e);
  if (!b.ok()) return b.status();
  absl::StatusOr<ResourceReport> r =
      MeasureResources(b->circuit, CostModel{.nearest_neighbor = b->nn});
  if (!r.ok()) return r.status();

  const std::string path = cfg.output.empty() ? "circuit.txt" : cfg.output;
  if (absl::Status s = WriteCircuitFile(b->circuit, path); !s.ok()) return s;
  absl::StatusOr<Circuit> back = ReadCircuitFile(path);
  const bool round_trip =
      back.ok() && CircuitToText(*back) == CircuitToText(b->circuit);
  if (!cfg.manifest.empty()) {
    if (!b->expo.has_value()) return Usage("--manifest needs --g");
    if (absl::Status s = WriteFile(cfg.manifest, RoundManifestJson(*b->expo));
        !s.ok()) {
      return s;
    }
  }
  const json report = BuildReport(cfg, *b, *r, round_trip);
  if (absl::Status s = Emit(cfg.report, Format(report, cfg.format), out);
      !s.ok()) {
    return s;
  }
  return report["pass"].get<bool>() ? kExitPass : kExitFail;
}

// ---------------------------------------------------------------------------
// Verification.

BigInt RandomBelow(std::mt19937_64& rng, const BigInt& bound) {
  const int bits = static_cast<int>(msb(bound)) + 1;
  for (;;) {
    BigInt v = 0;
    for (int done = 0; done < bits; done += 64) v = (v << 64) | BigInt(rng());
    v &= (BigInt(1) << bits) - 1;
    if (v < bound) return v;
  }
}

uint64_t Pack(const Layout& layout,
              const std::map<std::string, uint64_t>& values) {
  uint64_t index = 0;
  for (const auto& [name, v] : values) {
    const std::vector<int>& pos = layout.at(name).positions;
    for (size_t i = 0; i < pos.size(); ++i) {
      if ((v >> i) & 1) index |= uint64_t{1} << pos[i];
    }
  }
  return index;
}

uint64_t Unpack(const Layout& layout, const std::string& name, uint64_t index) {
  uint64_t v = 0;
  const std::vector<int>& pos = layout.at(name).positions;
  for (size_t i = 0; i < pos.size(); ++i) v |= ((index >> pos[i]) & 1) << i;
  return v;
}

struct CaseResult {
  uint64_t got = 0;
  double fidelity = 0;  // 1 or 0 on the reversible backend.
  MeasurementRecord record;
};

// Runs from `input` and compares register `reg` against `want`; for quantum
// circuits `exact_state` asks for the whole output basis state rather than
// the register's marginal.
absl::StatusOr<CaseResult> RunCase(const Circuit& c, bool classical,
                                   const std::map<std::string, uint64_t>& input,
                                   const std::string& reg, uint64_t want,
                                   bool exact_state, uint64_t seed) {
  CaseResult res;
  if (classical) {
    BitString bits(c.width(), 0);
    for (const auto& [name, v] : input) {
      WriteRegister(&bits, c.layout_in().at(name).positions, v);
    }
    absl::StatusOr<ReversibleResult> r = SimulateReversible(c, bits);
    if (!r.ok()) return r.status();
    res.got = ReadRegister(r->bits, c.layout_out().at(reg).positions);
    bool clean = true;
    if (exact_state) {
      BitString expect(c.width(), 0);
      for (const auto& [name, v] : input) {
        WriteRegister(&expect, c.layout_out().at(name).positions,
                      name == reg ? want : v);
      }
      clean = expect == r->bits;
    }
    res.fidelity = clean && res.got == want ? 1.0 : 0.0;
    for (const auto& [name, v] : r->measured) {
      res.record.bits[name] = {v, 0.0, static_cast<double>(v)};
    }
    return res;
  }
  absl::StatusOr<SparseState> s =
      SparseState::Basis(c.width(), Pack(c.layout_in(), input));
  if (!s.ok()) return s.status();
  if (absl::Status st = ApplyCircuit(c, seed, &*s, &res.record); !st.ok()) {
    return st;
  }
  double best = -1;
  std::map<uint64_t, double> marginal;
  for (const auto& [index, amp] : s->entries()) {
    marginal[Unpack(c.layout_out(), reg, index)] += std::norm(amp);
  }
  for (const auto& [v, p] : marginal) {
    if (p > best) {
      best = p;
      res.got = v;
    }
  }
  if (exact_state) {
    std::map<std::string, uint64_t> expect = input;
    expect[reg] = want;
    res.fidelity = std::norm(s->Get(Pack(c.layout_out(), expect)));
  } else {
    res.fidelity = marginal.count(want) ? marginal[want] : 0.0;
  }
  return res;
}

std::string MeasurementJson(const MeasurementRecord& r) {
  return r.ToJson() + "\n";
}

absl::StatusOr<int> CmdVerify(const RunConfig& cfg, std::ostream& out) {
  const bool classical = cfg.variant == "classical";
  const bool expo = IsExponentiation(cfg);
  const double min_fidelity = expo ? 0.99 : 1 - 1e-6;
  absl::StatusOr<BigInt> m = RequireInt("m", cfg.m);
  if (!m.ok()) return m.status();
  if (cfg.n < 1 || cfg.n > 62) return Usage("verify needs 1 <= n <= 62");
  const int64_t budget = cfg.trials > 0 ? cfg.trials : 256;
  std::mt19937_64 rng(cfg.seed);

  // (b, c) pairs or exponents.
  std::vector<std::pair<BigInt, int>> cases;
  bool exhaustive = false;
  absl::StatusOr<std::optional<BigInt>> fixed_b = ParseInt("b", cfg.b);
  absl::StatusOr<std::optional<BigInt>> fixed_c = ParseInt("c", cfg.c);
  absl::StatusOr<std::optional<BigInt>> fixed_e = ParseInt("e", cfg.e);
  for (const auto* v : {&fixed_b, &fixed_c, &fixed_e}) {
    if (!v->ok()) return v->status();
  }
  if (expo) {
    const int rounds = cfg.rounds.value_or(2 * cfg.n);
    if (rounds < 1 || rounds > 62) return Usage("rounds must be in [1, 62]");
    const BigInt count = BigInt(1) << rounds;
    if (fixed_e->has_value()) {
      if (**fixed_e >= count) return Usage("e must be below 2^rounds");
      cases.emplace_back(**fixed_e, 0);
    } else if (count <= budget) {
      exhaustive = true;
      for (BigInt e = 0; e < count; ++e) cases.emplace_back(e, 0);
    } else {
      for (int64_t i = 0; i < budget; ++i) {
        cases.emplace_back(RandomBelow(rng, count), 0);
      }
    }
  } else {
    if (fixed_c->has_value() && **fixed_c > 1) return Usage("c must be 0 or 1");
    if (fixed_b->has_value() && **fixed_b >= *m) return Usage("b must be < m");
    std::vector<int> cs = {0, 1};
    if (fixed_c->has_value()) cs = {static_cast<int>(**fixed_c)};
    if (fixed_b->has_value()) {
      for (int c : cs) cases.emplace_back(**fixed_b, c);
    } else if (*m * cs.size() <= budget) {
      exhaustive = true;
      for (int c : cs) {
        for (BigInt b = 0; b < *m; ++b) cases.emplace_back(b, c);
      }
    } else {
      for (int64_t i = 0; i < budget; ++i) {
        const BigInt b = RandomBelow(rng, *m);
        cases.emplace_back(b, cs[rng() % cs.size()]);
      }
    }
  }
  const bool single = cases.size() == 1;
  if ((!cfg.dump.empty() || !cfg.measurements.empty()) && !single) {
    return Usage(
        "--dump and --measurements need a single case (--b and --c, "
        "or --e)");
  }
  if (!cfg.dump.empty() && classical) {
    return Usage("--dump needs a quantum variant");
  }

  std::optional<Built> built;
  if (!expo) {
    absl::StatusOr<Built> b = Build(cfg, std::nullopt);
    if (!b.ok()) return b.status();
    built = *std::move(b);
  }
  int64_t passed = 0;
  double worst = 1.0;
  json failures = json::array();
  std::string builder;
  for (const auto& [v, c] : cases) {
    if (expo) {
      absl::StatusOr<Built> b = Build(cfg, v);
      if (!b.ok()) return b.status();
      built = *std::move(b);
    }
    const Circuit& circ = built->circuit;
    builder = built->builder;
    if (!classical && circ.width() > 64) {
      return Usage(
          absl::StrCat("verify of quantum circuits needs width <= 64, "
                       "got ",
                       circ.width()));
    }
    std::map<std::string, uint64_t> input;
    std::string reg;
    BigInt want;
    if (expo) {
      reg = "W";
      want = PowMod(BigInt(cfg.g), v, *m);
    } else {
      reg = "B";
      input = {{"B", static_cast<uint64_t>(v)}, {"c", uint64_t(c)}};
      want = c ? (built->mult->a * v) % *m : v;
    }
    absl::StatusOr<CaseResult> r =
        RunCase(circ, classical, input, reg, static_cast<uint64_t>(want),
                /*exact_state=*/!expo, cfg.seed);
    if (!r.ok()) return r.status();
    worst = std::min(worst, r->fidelity);
    if (r->fidelity >= min_fidelity) {
      ++passed;
    } else if (failures.size() < 16) {
      json f = {
          {"expected", Str(want)}, {"got", r->got}, {"fidelity", r->fidelity}};
      if (expo) {
        f["e"] = Str(v);
      } else {
        f["b"] = Str(v);
        f["c"] = c;
      }
      failures.push_back(f);
    }
    if (single && !cfg.measurements.empty()) {
      if (absl::Status s =
              WriteFile(cfg.measurements, MeasurementJson(r->record));
          !s.ok()) {
        return s;
      }
    }
    if (single && !cfg.dump.empty()) {
      if (circ.width() > WidthCap()) {
        return Usage(absl::StrCat("--dump needs width <= ", WidthCap(),
                                  " (NNASHOR_MAX_WIDTH), got ", circ.width()));
      }
      absl::StatusOr<SimResult> sim =
          Simulate(circ, Pack(circ.layout_in(), input), cfg.seed);
      if (!sim.ok()) return sim.status();
      if (absl::Status s = DumpAmplitudes(sim->state, cfg.dump); !s.ok()) {
        return s;
      }
    }
  }
  const bool pass = passed == static_cast<int64_t>(cases.size());
  json j = {{"command", "verify"},
            {"builder", builder},
            {"variant", cfg.variant},
            {"mode", cfg.mode},
            {"n", cfg.n},
            {"m", cfg.m},
            {"seed", cfg.seed},
            {"backend", classical ? "reversible" : "sparse_statevector"},
            {"exhaustive", exhaustive},
            {"cases", cases.size()},
            {"passed", passed},
            {"min_fidelity", worst},
            {"fidelity_threshold", min_fidelity},
            {"failures", failures},
            {"pass", pass}};
  if (expo) {
    j["g"] = cfg.g;
  } else {
    j["a"] = cfg.a;
  }
  if (absl::Status s = Emit(cfg.output, Format(j, cfg.format), out); !s.ok()) {
    return s;
  }
  return pass ? kExitPass : kExitFail;
}

// ---------------------------------------------------------------------------
// Analysis.

absl::StatusOr<int> CmdStats(const RunConfig& cfg, std::ostream& out) {
  absl::StatusOr<SweepBuilder> b = ParseSweepBuilder(cfg.builder);
  if (!b.ok()) return Usage(std::string(b.status().message()));
  std::vector<int> ns = cfg.ns;
  if (ns.empty() && cfg.n > 0) ns = {cfg.n};
  if (ns.empty()) return Usage("--ns (or --n) is required");
  for (int n : ns) {
    if (n < 2) return Usage("every n must be at least 2");
  }
  SweepParams p;
  p.l0 = cfg.l0;
  p.exact_mode = cfg.mode == "exact";
  p.seed = cfg.seed;
  absl::StatusOr<SweepReport> r = SweepResources(*b, ns, p);
  if (!r.ok()) return Usage(std::string(r.status().message()));
  std::string text;
  if (cfg.format == "csv") {
    text = SweepReportCsv(*r);
  } else if (cfg.format == "json") {
    text = SweepReportJson(*r) + "\n";
  } else {
    const json j = json::parse(SweepReportJson(*r));
    for (const json& row : j["rows"]) {
      text += absl::StrCat("n=", row["n"].dump(), " l=", row["l"].dump(),
                           " depth=", row["depth"].dump(),
                           " width=", row["width"].dump(),
                           " size=", row["size"].dump(), "\n");
    }
    for (const json& f : j["coefficient_fits"]) {
      text += absl::StrCat(f["name"].get<std::string>(), " = ",
                           f["value"].dump(), "\n");
    }
    text += absl::StrCat("pass: ", j["pass"].dump(), "\n");
  }
  if (absl::Status s = Emit(cfg.output, text, out); !s.ok()) return s;
  return r->pass() ? kExitPass : kExitFail;
}

absl::StatusOr<int> CmdMc(const RunConfig& cfg, std::ostream& out) {
  const int n = cfg.n;
  if (n < 2) return Usage("--n must be at least 2");
  const int64_t trials = cfg.trials > 0 ? cfg.trials : 100000;
  const int t = cfg.t.value_or(CeilLog2(n) + 2);
  if (t < 1 || t > 62) return Usage("t must be in [1, 62]");
  BoundReport r;
  if (cfg.kind == "window") {
    const int l0 = cfg.l0.value_or(DefaultWindow(n));
    if (l0 < 1 || l0 > n) return Usage("l0 must be in [1, n]");
    r = McWindowError(
        n, l0, trials, cfg.seed,
        cfg.xs == "all_ones" ? XsMode::kAllOnes : XsMode::kRandom);
  } else if (cfg.kind == "z_overflow") {
    absl::StatusOr<std::optional<BigInt>> m = ParseInt("m", cfg.m);
    if (!m.ok()) return m.status();
    if (m->has_value() && (**m < 2 || msb(**m) + 1 != unsigned(n))) {
      return Usage("m must have exactly n bits");
    }
    r = McZOverflow(n, *m, t, trials, cfg.seed);
  } else {
    r = McBlockCarry(n, t, trials, cfg.seed);
  }
  r.trials = trials;
  const json j = json::parse(BoundReportJson(r));
  if (absl::Status s = Emit(cfg.output, Format(j, cfg.format), out); !s.ok()) {
    return s;
  }
  return r.pass ? kExitPass : kExitFail;
}

// ---------------------------------------------------------------------------
// Flags.

void AddCommon(CLI::App* app, RunConfig* cfg) {
  app->add_option("--n", cfg->n, "Register size in bits");
  app->add_option("--m", cfg->m, "Modulus");
  app->add_option("--l0", cfg->l0,
                  "Quotient window; default min(n, ceil(3 log2 n) + 2)");
  app->add_option("--t", cfg->t, "Headroom exponent; default ceil(log2 n) + 2");
  app->add_option("--seed", cfg->seed, "Seed for every random choice");
  app->add_option("--trials", cfg->trials, "Trials or sampled cases");
  app->add_option("-o,--output", cfg->output, "Output file");
  app->add_option("--format", cfg->format, "Report format")
      ->check(CLI::IsMember({"json", "text", "csv"}));
  app->add_option("--mode", cfg->mode, "exact forces l0 = n")
      ->check(CLI::IsMember({"exact", "approx"}));
}

void AddCircuit(CLI::App* app, RunConfig* cfg) {
  app->add_option("--variant", cfg->variant, "Circuit family")
      ->check(CLI::IsMember({"nn", "general", "classical"}));
  app->add_option("--a", cfg->a, "Multiplier constant");
  app->add_option("--g", cfg->g, "Base; builds an exponentiation");
  app->add_option("--e", cfg->e, "Known exponent");
  app->add_option("--z", cfg->z, "Offset added to the product");
  app->add_option("--l", cfg->l, "Quotient register size (checked)");
  app->add_option("--rounds", cfg->rounds, "Exponentiation rounds; default 2n");
  app->add_option("--control", cfg->control, "Exponentiation control mode")
      ->check(CLI::IsMember({"recycled", "preallocated"}));
  app->add_flag("--fixed-z", cfg->fixed_z, "Same z in every round");
  app->add_option("--block", cfg->block, "Classical block size; 0 = default");
}

}  // namespace

int RunCli(int argc, const char* const* argv, std::ostream& out,
           std::ostream& err) {
  RunConfig cfg;
  CLI::App app("Nearest-neighbor modular multiplication circuits");
  app.require_subcommand(1);

  CLI::App* build = app.add_subcommand("build", "Write a circuit and report");
  AddCommon(build, &cfg);
  AddCircuit(build, &cfg);
  build->add_option("--report", cfg.report, "Report file; default stdout");
  build->add_option("--manifest", cfg.manifest, "Round manifest JSON");

  CLI::App* verify =
      app.add_subcommand("verify", "Compare circuits against integers");
  AddCommon(verify, &cfg);
  AddCircuit(verify, &cfg);
  verify->add_option("--b", cfg.b, "Only this input");
  verify->add_option("--c", cfg.c, "Only this control value");
  verify->add_option("--dump", cfg.dump, "Amplitude dump of a single case");
  verify->add_option("--measurements", cfg.measurements,
                     "Measurement record of a single case");

  CLI::App* stats = app.add_subcommand("stats", "Resource sweep");
  AddCommon(stats, &cfg);
  stats->add_option("--builder", cfg.builder, "Builder to sweep")->required();
  stats->add_option("--ns", cfg.ns, "Sizes, comma separated")->delimiter(',');

  CLI::App* mc = app.add_subcommand("mc", "Monte Carlo failure rates");
  AddCommon(mc, &cfg);
  mc->add_option("--kind", cfg.kind, "Failure kind")
      ->required()
      ->check(CLI::IsMember({"window", "z_overflow", "block_carry"}));
  mc->add_option("--xs", cfg.xs, "Addend distribution for window")
      ->check(CLI::IsMember({"random", "all_ones"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitPass : kExitUsage;
  }

  absl::StatusOr<int> code;
  if (*build) {
    code = CmdBuild(cfg, out);
  } else if (*verify) {
    code = CmdVerify(cfg, out);
  } else if (*stats) {
    code = CmdStats(cfg, out);
  } else {
    code = CmdMc(cfg, out);
  }
  if (!code.ok()) {
    err << "error: " << code.status().message() << "\n";
    return code.status().code() == absl::StatusCode::kInvalidArgument
               ? kExitUsage
               : kExitFail;
  }
  return *code;
}

}  // namespace nnashor
