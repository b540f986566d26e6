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

// Resource sweeps and formula fits.

#include <cmath>
#include <functional>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "Eigen/Dense"
#include "absl/strings/str_format.h"
#include "json.hpp"
#include "nnashor/analysis.h"
#include "nnashor/check.h"
#include "nnashor/classical.h"
#include "nnashor/gate_library.h"
#include "nnashor/qarith.h"

namespace nnashor {
namespace {

constexpr int kBandFrom = 256;

const std::map<std::string, SweepBuilder>& Names() {
  static const auto* names = new std::map<std::string, SweepBuilder>{
      {"qft", SweepBuilder::kQft},
      {"nested_adder", SweepBuilder::kNestedAdder},
      {"nested_adder_constant_z", SweepBuilder::kNestedAdderConstantZ},
      {"swap_cascade", SweepBuilder::kSwapCascade},
      {"multiplier", SweepBuilder::kMultiplier},
      {"general_multiplier", SweepBuilder::kGeneralMultiplier},
      {"exponentiation_round", SweepBuilder::kExponentiationRound},
      {"classical_multiplier", SweepBuilder::kClassicalMultiplier},
  };
  return *names;
}

// 2^n - 1 and the smallest a >= 3 prime to it.
std::pair<BigInt, BigInt> Constants(int n) {
  const BigInt m = (BigInt(1) << n) - 1;
  BigInt a = 3;
  while (gcd(a, m) != 1) ++a;
  return {m, a};
}

absl::StatusOr<MultiplierParams> Multiplier(int n, const SweepParams& p,
                                            Variant v) {
  auto [m, a] = Constants(n);
  MultiplierOptions o;
  o.l0 = p.l0;
  o.exact_mode = p.exact_mode;
  o.seed = p.seed;
  o.variant = v;
  return MakeMultiplierParams(n, a, m, o);
}

// Terms of a fitted form at one row.
struct Form {
  std::vector<std::string> names;
  std::function<std::vector<double>(const SweepRow&)> terms;
  std::optional<double> leading;  // Formula value of the first coefficient.
  double band = 0.5;
};

double Lg(int n) { return std::log2(static_cast<double>(n)); }

double QuotientTerm(const SweepRow& r) {
  return (2.0 * r.l - Lg(r.n)) * Lg(r.n);
}

Form FormFor(SweepBuilder b) {
  auto linear = [](const SweepRow& r) {
    return std::vector<double>{static_cast<double>(r.n), 1.0};
  };
  auto quotient = [](const SweepRow& r) {
    return std::vector<double>{static_cast<double>(r.n), QuotientTerm(r), 1.0};
  };
  switch (b) {
    case SweepBuilder::kQft:
      return {{"alpha", "gamma"}, linear, 2.0};
    case SweepBuilder::kNestedAdder:
      return {{"alpha", "gamma"}, linear, 6.0};
    case SweepBuilder::kNestedAdderConstantZ:
      return {{"alpha", "gamma"}, linear, 4.0};
    case SweepBuilder::kSwapCascade:
      return {{"alpha", "gamma"}, linear, 2.0};
    case SweepBuilder::kMultiplier:
      return {{"alpha", "beta", "gamma"}, quotient, 11.0};
    case SweepBuilder::kGeneralMultiplier:
      return {{"alpha", "beta", "gamma"}, quotient, 6.0};
    case SweepBuilder::kExponentiationRound:
      return {{"alpha", "beta", "gamma"}, quotient, 9.0};
    case SweepBuilder::kClassicalMultiplier:
      return {{"alpha", "gamma"},
              [](const SweepRow& r) {
                return std::vector<double>{r.n * Lg(r.n), 1.0};
              },
              std::nullopt};
  }
  return {};
}

absl::StatusOr<SweepRow> Measure(SweepBuilder b, int n, const SweepParams& p) {
  SweepRow row;
  row.n = n;
  const CostModel nn;
  std::optional<Circuit> circuit;
  CostModel model = nn;
  switch (b) {
    case SweepBuilder::kQft: {
      QftSpec spec;
      spec.n = n;
      circuit = BuildQft(spec);
      break;
    }
    case SweepBuilder::kNestedAdder:
    case SweepBuilder::kNestedAdderConstantZ: {
      auto [m, a] = Constants(n);
      const bool constant_z = b == SweepBuilder::kNestedAdderConstantZ;
      absl::StatusOr<Circuit> c =
          BuildNestedControlledAdder(MakeXTable(a, m, n, n), constant_z,
                                     constant_z ? BigInt(m / 3) : BigInt(0));
      if (!c.ok()) return c.status();
      circuit = *std::move(c);
      break;
    }
    case SweepBuilder::kSwapCascade:
      circuit = BuildControlledSwapCascade(n);
      break;
    case SweepBuilder::kMultiplier:
    case SweepBuilder::kGeneralMultiplier: {
      const bool general = b == SweepBuilder::kGeneralMultiplier;
      absl::StatusOr<MultiplierParams> mp = Multiplier(
          n, p, general ? Variant::kGeneral : Variant::kNearestNeighbor);
      if (!mp.ok()) return mp.status();
      absl::StatusOr<Circuit> c = BuildControlledModMul(*mp);
      if (!c.ok()) return c.status();
      circuit = *std::move(c);
      if (general) model = CostModel{.nearest_neighbor = false};
      row.l = mp->l;
      break;
    }
    case SweepBuilder::kExponentiationRound: {
      auto [m, a] = Constants(n);
      ExponentiationParams ep;
      ep.n = n;
      ep.g = a;
      ep.m = m;
      ep.mult.l0 = p.l0;
      ep.mult.exact_mode = p.exact_mode;
      ep.mult.seed = p.seed;
      ep.rounds = 3;
      ep.exponent = 5;
      absl::StatusOr<Exponentiation> x = BuildExponentiation(ep);
      if (!x.ok()) return x.status();
      row.l = x->l;
      row.measured.depth = x->rounds[1].depth_end - x->rounds[0].depth_end;
      row.measured.width = UsedWidth(x->circuit);
      row.measured.size = CountSize(x->circuit, nn) / 3;
      break;
    }
    case SweepBuilder::kClassicalMultiplier: {
      absl::StatusOr<MultiplierParams> mp =
          Multiplier(n, p, Variant::kNearestNeighbor);
      if (!mp.ok()) return mp.status();
      absl::StatusOr<Circuit> c = BuildClassicalModMul(*mp);
      if (!c.ok()) return c.status();
      circuit = *std::move(c);
      row.l = mp->l;
      break;
    }
  }
  if (circuit.has_value()) {
    absl::StatusOr<ResourceReport> r = MeasureResources(*circuit, model);
    if (!r.ok()) return r.status();
    row.measured = *r;
  }
  const Prediction pr = PredictResources(SweepBuilderName(b), n, row.l);
  row.depth = pr.depth;
  row.width = pr.width;
  row.size = pr.size;
  const double d = row.measured.depth;
  switch (b) {
    case SweepBuilder::kMultiplier:
    case SweepBuilder::kGeneralMultiplier:
    case SweepBuilder::kExponentiationRound:
      row.depth_coefficient = (d - 6 * QuotientTerm(row)) / n;
      row.size_coefficient = row.measured.size / (static_cast<double>(n) * n);
      break;
    case SweepBuilder::kClassicalMultiplier:
      row.depth_coefficient = d / (n * Lg(n));
      break;
    default:
      row.depth_coefficient = d / n;
      break;
  }
  return row;
}

void AddChecks(SweepBuilder b, const SweepRow& row,
               std::vector<BoundCheck>* out) {
  auto check = [&](const std::string& name, double value, double lo,
                   double hi) {
    out->push_back({name, row.n, value, lo, hi, lo <= value && value <= hi});
  };
  const bool exact = b == SweepBuilder::kQft ||
                     b == SweepBuilder::kNestedAdder ||
                     b == SweepBuilder::kNestedAdderConstantZ ||
                     b == SweepBuilder::kSwapCascade;
  if (exact && row.depth)
    check("depth", row.measured.depth, *row.depth, *row.depth);
  if (row.width) check("width", row.measured.width, *row.width, *row.width);
  if (exact && row.size) check("size", row.measured.size, *row.size, *row.size);
  if (row.n < kBandFrom) return;
  switch (b) {
    case SweepBuilder::kMultiplier:
      check("depth_coefficient", *row.depth_coefficient, 10.5, 11.5);
      check("size_coefficient", *row.size_coefficient, 4.5, 5.5);
      break;
    case SweepBuilder::kGeneralMultiplier:
      check("depth_coefficient", *row.depth_coefficient, 5.5, 6.5);
      check("size_coefficient", *row.size_coefficient, 1.7, 2.5);
      break;
    case SweepBuilder::kExponentiationRound:
      check("depth_coefficient", *row.depth_coefficient, 8.5, 9.8);
      break;
    default:
      break;
  }
}

nlohmann::json Opt(const std::optional<double>& v) {
  return v.has_value() ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

}  // namespace

Prediction PredictResources(const std::string& builder, int n, int l) {
  const double lg = Lg(n);
  const double q = (2.0 * l - lg) * lg;
  const double nn = static_cast<double>(n) * n;
  Prediction p;
  if (builder == "qft") {
    p = {2.0 * n - 3, 1.0 * n, n + n * (n - 1) / 2.0};
  } else if (builder == "nested_adder") {
    p.depth = 6.0 * n - 4;
    p.width = 2.0 * n;
  } else if (builder == "nested_adder_constant_z") {
    p.depth = 4.0 * n - 1;
    p.width = 2.0 * n;
  } else if (builder == "swap_cascade") {
    p.depth = 2.0 * n + 2;
    p.width = 2.0 * n + 1;
  } else if (builder == "multiplier") {
    p = {11.0 * n + 6 * q, 3.0 * n + 2 * l + 1, 5 * nn};
  } else if (builder == "general_multiplier") {
    p = {6.0 * n + 6 * q, 3.0 * n + 2 * l + 1, 2 * nn};
  } else if (builder == "exponentiation_round") {
    p = {9.0 * n + 6 * q, 3.0 * n + 2 * l + 2, 5 * nn};
  } else if (builder == "exponentiation") {
    p = {18 * nn + 12.0 * n * q, 3.0 * n + 2 * l + 2, 10 * nn * n};
  } else if (builder == "general_exponentiation") {
    p = {12 * nn + 60.0 * n * lg * lg, 3.0 * n + 2 * l + 2, 4 * nn * n};
  }
  return p;
}

absl::StatusOr<SweepBuilder> ParseSweepBuilder(const std::string& name) {
  auto it = Names().find(name);
  if (it == Names().end()) {
    return absl::InvalidArgumentError("unknown builder: " + name);
  }
  return it->second;
}

std::string SweepBuilderName(SweepBuilder b) {
  for (const auto& [name, v] : Names()) {
    if (v == b) return name;
  }
  return "?";
}

bool SweepReport::pass() const {
  for (const CoefficientFit& f : fits) {
    if (!f.pass) return false;
  }
  for (const BoundCheck& c : checks) {
    if (!c.pass) return false;
  }
  return true;
}

absl::StatusOr<SweepReport> SweepResources(SweepBuilder b,
                                           const std::vector<int>& ns,
                                           const SweepParams& p) {
  SweepReport report;
  report.builder = b;
  for (int n : ns) {
    if (n < 2) return absl::InvalidArgumentError("n must be at least 2");
    absl::StatusOr<SweepRow> row = Measure(b, n, p);
    if (!row.ok()) return row.status();
    AddChecks(b, *row, &report.checks);
    report.rows.push_back(*std::move(row));
  }
  const Form form = FormFor(b);
  const int terms = static_cast<int>(form.names.size());
  const int rows = static_cast<int>(report.rows.size());
  if (rows >= terms) {
    Eigen::MatrixXd A(rows, terms);
    Eigen::VectorXd y(rows);
    for (int i = 0; i < rows; ++i) {
      const std::vector<double> t = form.terms(report.rows[i]);
      for (int j = 0; j < terms; ++j) A(i, j) = t[j];
      y(i) = report.rows[i].measured.depth;
    }
    const Eigen::VectorXd c = A.colPivHouseholderQr().solve(y);
    for (int j = 0; j < terms; ++j) {
      CoefficientFit f;
      f.name = form.names[j];
      f.value = c(j);
      if (j == 0 && form.leading.has_value()) {
        f.lo = *form.leading - form.band;
        f.hi = *form.leading + form.band;
        f.pass = *f.lo <= f.value && f.value <= *f.hi;
      }
      report.fits.push_back(f);
    }
  }
  return report;
}

std::string SweepReportJson(const SweepReport& r) {
  const std::string name = SweepBuilderName(r.builder);
  nlohmann::json rows = nlohmann::json::array();
  for (const SweepRow& row : r.rows) {
    nlohmann::json checks = nlohmann::json::array();
    for (const BoundCheck& c : r.checks) {
      if (c.n != row.n) continue;
      checks.push_back({{"name", c.name},
                        {"value", c.value},
                        {"lo", c.lo},
                        {"hi", c.hi},
                        {"pass", c.pass}});
    }
    rows.push_back({{"builder", name},
                    {"n", row.n},
                    {"l", row.l},
                    {"depth", row.measured.depth},
                    {"width", row.measured.width},
                    {"size", row.measured.size},
                    {"predicted",
                     {{"depth", Opt(row.depth)},
                      {"width", Opt(row.width)},
                      {"size", Opt(row.size)}}},
                    {"depth_coefficient", Opt(row.depth_coefficient)},
                    {"size_coefficient", Opt(row.size_coefficient)},
                    {"bound_checks", checks}});
  }
  nlohmann::json fits = nlohmann::json::array();
  for (const CoefficientFit& f : r.fits) {
    fits.push_back({{"name", f.name},
                    {"value", f.value},
                    {"lo", Opt(f.lo)},
                    {"hi", Opt(f.hi)},
                    {"pass", f.pass}});
  }
  nlohmann::json j = {{"builder", name},
                      {"rows", rows},
                      {"coefficient_fits", fits},
                      {"pass", r.pass()}};
  return j.dump(2);
}

std::string SweepReportCsv(const SweepReport& r) {
  auto opt = [](const std::optional<double>& v) {
    return v.has_value() ? absl::StrFormat("%.6g", *v) : std::string();
  };
  std::ostringstream out;
  out << "builder,n,l,depth,width,size,predicted_depth,predicted_width,"
         "predicted_size,depth_coefficient,size_coefficient\n";
  for (const SweepRow& row : r.rows) {
    out << SweepBuilderName(r.builder) << ',' << row.n << ',' << row.l << ','
        << row.measured.depth << ',' << row.measured.width << ','
        << row.measured.size << ',' << opt(row.depth) << ',' << opt(row.width)
        << ',' << opt(row.size) << ',' << opt(row.depth_coefficient) << ','
        << opt(row.size_coefficient) << '\n';
  }
  return out.str();
}

}  // namespace nnashor
