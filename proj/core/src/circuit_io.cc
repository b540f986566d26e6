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

#include "nnashor/circuit_io.h"

#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "absl/status/status.h"
#include "absl/strings/numbers.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_join.h"
#include "absl/strings/str_split.h"
#include "absl/strings/strip.h"
#include "nnashor/check.h"

namespace nnashor {
namespace {

void AppendLayout(const char* tag, const Layout& layout, std::string* out) {
  for (const auto& [name, reg] : layout) {
    absl::StrAppend(out, "# ", tag, " ", name, " ",
                    absl::StrJoin(reg.positions, ","),
                    reg.reversed ? " rev" : "", "\n");
  }
}

absl::Status ParseLayoutLine(const std::vector<std::string>& tok,
                             Layout* layout) {
  // tok: "#", tag, name, positions, [rev]
  if (tok.size() < 3 || tok.size() > 5) {
    return absl::InvalidArgumentError("malformed layout line");
  }
  RegisterLayout reg;
  if (tok.size() >= 4) {
    for (absl::string_view p : absl::StrSplit(tok[3], ',', absl::SkipEmpty())) {
      int v;
      if (!absl::SimpleAtoi(p, &v)) {
        return absl::InvalidArgumentError(
            absl::StrCat("bad layout position '", p, "'"));
      }
      reg.positions.push_back(v);
    }
  }
  reg.reversed = tok.size() == 5 && tok[4] == "rev";
  (*layout)[tok[2]] = reg;
  return absl::OkStatus();
}

const std::map<std::string, GateKind>& KindsByName() {
  static const auto* kinds = new std::map<std::string, GateKind>{
      {"h", GateKind::kH},
      {"x", GateKind::kX},
      {"rz", GateKind::kRz},
      {"cphase", GateKind::kCPhase},
      {"cnot", GateKind::kCNot},
      {"swap", GateKind::kSwap},
      {"fcps", GateKind::kFusedCPhaseSwap},
      {"fcrzs", GateKind::kFusedCRzSwap},
      {"fcxs", GateKind::kFusedCNotSwap},
      {"ptha", GateKind::kPtHalfA},
      {"pthb", GateKind::kPtHalfB},
      {"pthbx", GateKind::kPtHalfBCNot},
      {"xptha", GateKind::kCNotPtHalfA},
      {"measure", GateKind::kMeasure},
      {"crz", GateKind::kClassicalRz},
  };
  return *kinds;
}

}  // namespace

std::string CircuitToText(const Circuit& c) {
  std::string out = absl::StrCat("width ", c.width(), "\n");
  if (c.classical()) out += "# classical\n";
  AppendLayout("layout_in", c.layout_in(), &out);
  AppendLayout("layout_out", c.layout_out(), &out);
  for (const Gate& g : c.gates()) {
    out += Mnemonic(g.kind);
    absl::StrAppend(&out, " ", g.a);
    if (Arity(g.kind) == 2) absl::StrAppend(&out, " ", g.b);
    if (HasPhase(g.kind)) absl::StrAppend(&out, " ", g.phase.ToString());
    if (g.bit >= 0) absl::StrAppend(&out, " ", c.bit_names()[g.bit]);
    out += "\n";
  }
  return out;
}

absl::StatusOr<Circuit> ParseCircuit(const std::string& text) {
  Circuit c;
  bool have_width = false;
  bool classical = false;
  Layout in, out;
  int line_no = 0;
  auto error = [&line_no](const std::string& msg) {
    return absl::InvalidArgumentError(
        absl::StrCat("line ", line_no, ": ", msg));
  };
  for (absl::string_view raw : absl::StrSplit(text, '\n')) {
    ++line_no;
    std::vector<std::string> tok =
        absl::StrSplit(raw, absl::ByAnyChar(" \t\r"), absl::SkipEmpty());
    if (tok.empty()) continue;
    if (tok[0][0] == '#') {
      if (tok[0] != "#" || tok.size() < 2) continue;
      if (tok[1] == "classical") {
        classical = true;
      } else if (tok[1] == "layout_in" || tok[1] == "layout_out") {
        absl::Status st =
            ParseLayoutLine(tok, tok[1] == "layout_in" ? &in : &out);
        if (!st.ok()) return error(std::string(st.message()));
      }
      continue;
    }
    // Trailing comments.
    for (size_t i = 0; i < tok.size(); ++i) {
      if (tok[i][0] == '#') {
        tok.resize(i);
        break;
      }
    }
    if (tok[0] == "width") {
      int w;
      if (have_width || tok.size() != 2 || !absl::SimpleAtoi(tok[1], &w) ||
          w < 0) {
        return error("bad width header");
      }
      c = Circuit(w);
      have_width = true;
      continue;
    }
    if (!have_width) return error("gate before width header");
    auto it = KindsByName().find(tok[0]);
    if (it == KindsByName().end()) {
      return error(absl::StrCat("unknown gate '", tok[0], "'"));
    }
    GateKind kind = it->second;
    size_t expected =
        1 + Arity(kind) + (HasPhase(kind) ? 1 : 0) +
        (kind == GateKind::kMeasure || kind == GateKind::kClassicalRz ? 1 : 0);
    if (tok.size() != expected) {
      return error(
          absl::StrCat("expected ", expected - 1, " operands for ", tok[0]));
    }
    Gate g = Gate::Make(kind, 0);
    size_t pos = 1;
    if (!absl::SimpleAtoi(tok[pos++], &g.a)) return error("bad wire");
    if (Arity(kind) == 2 && !absl::SimpleAtoi(tok[pos++], &g.b)) {
      return error("bad wire");
    }
    if (HasPhase(kind)) {
      absl::StatusOr<DyadicPhase> p = DyadicPhase::Parse(tok[pos++]);
      if (!p.ok()) return error(std::string(p.status().message()));
      g.phase = *p;
    }
    absl::Status st;
    if (kind == GateKind::kMeasure) {
      st = c.Measure(g.a, tok[pos]);
    } else if (kind == GateKind::kClassicalRz) {
      st = c.ClassicalRz(g.a, g.phase, tok[pos]);
    } else {
      st = c.Append(g);
    }
    if (!st.ok()) return error(std::string(st.message()));
  }
  if (!have_width) return absl::InvalidArgumentError("missing width header");
  c.set_classical(classical);
  NNASHOR_RETURN_IF_ERROR(c.SetLayoutIn(std::move(in)));
  NNASHOR_RETURN_IF_ERROR(c.SetLayoutOut(std::move(out)));
  return c;
}

absl::StatusOr<Circuit> ReadCircuitFile(const std::string& path) {
  std::ifstream f(path);
  if (!f) return absl::NotFoundError(absl::StrCat("cannot open ", path));
  std::stringstream ss;
  ss << f.rdbuf();
  return ParseCircuit(ss.str());
}

absl::Status WriteCircuitFile(const Circuit& c, const std::string& path) {
  std::ofstream f(path);
  if (!f) return absl::UnavailableError(absl::StrCat("cannot write ", path));
  f << CircuitToText(c);
  return f ? absl::OkStatus()
           : absl::UnavailableError(absl::StrCat("write failed: ", path));
}

}  // namespace nnashor
