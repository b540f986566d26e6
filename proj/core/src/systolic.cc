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

#include "nnashor/systolic.h"

#include <algorithm>
#include <cstdint>
#include <tuple>
#include <unordered_map>
#include <utility>

#include "absl/strings/str_cat.h"
#include "nnashor/check.h"

namespace nnashor {
namespace {

uint64_t PairKey(int up, int lo) {
  return (static_cast<uint64_t>(static_cast<uint32_t>(up)) << 32) |
         static_cast<uint32_t>(lo);
}

EventGate AdjointEventGate(const EventGate& g) {
  // Element roles stay put; only the kind and angle change.
  Gate adj = Adjoint(Gate::Make(g.kind, 0, 1, g.phase));
  return EventGate{adj.kind, g.up_first, adj.phase};
}

std::vector<Gate> AdjointOps(const std::vector<Gate>& ops) {
  std::vector<Gate> r;
  r.reserve(ops.size());
  for (auto it = ops.rbegin(); it != ops.rend(); ++it)
    r.push_back(Adjoint(*it));
  return r;
}

}  // namespace

Template::Phase& Template::Find(int element, const std::string& key) {
  auto& list = phases_[element];
  for (auto it = list.rbegin(); it != list.rend(); ++it) {
    if (it->key == key) return *it;
  }
  NNASHOR_CHECK(false && "unknown phase key");
  return list.front();
}

void Template::AddPhase(int element, const std::string& key) {
  phases_[element].push_back(Phase{key, {}, {}});
}

void Template::AddEnter(int element, const std::string& key, const Gate& op) {
  NNASHOR_CHECK(IsSingleWireUnitary(op.kind));
  Find(element, key).enter.push_back(op);
}

void Template::AddExit(int element, const std::string& key, const Gate& op) {
  NNASHOR_CHECK(IsSingleWireUnitary(op.kind));
  Find(element, key).exit.push_back(op);
}

void Template::Cross(int up, const std::string& up_key, int lo,
                     const std::string& lo_key, int prio, EventGate g) {
  events_.push_back(Event{up, up_key, lo, lo_key, prio, true, g});
}

void Template::Touch(int up, const std::string& up_key, int lo,
                     const std::string& lo_key, int prio, EventGate g) {
  events_.push_back(Event{up, up_key, lo, lo_key, prio, false, g});
}

void Template::Merge(const Template& other) {
  for (const auto& [e, list] : other.phases_) {
    auto& mine = phases_[e];
    mine.insert(mine.end(), list.begin(), list.end());
  }
  events_.insert(events_.end(), other.events_.begin(), other.events_.end());
}

Template Template::Reversed() const {
  Template r;
  for (const auto& [e, list] : phases_) {
    auto& out = r.phases_[e];
    for (auto it = list.rbegin(); it != list.rend(); ++it) {
      out.push_back(
          Phase{it->key, AdjointOps(it->exit), AdjointOps(it->enter)});
    }
  }
  r.events_ = events_;
  for (Event& ev : r.events_) ev.gate = AdjointEventGate(ev.gate);
  return r;
}

std::map<int, int> PositionsOf(const std::vector<int>& line) {
  std::map<int, int> pos;
  for (int p = 0; p < static_cast<int>(line.size()); ++p) pos[line[p]] = p;
  return pos;
}

absl::StatusOr<Schedule> RunSystolic(const std::vector<int>& line,
                                     const Template& t) {
  const int n = static_cast<int>(line.size());
  std::unordered_map<int, int> slot;  // element -> dense index
  for (int p = 0; p < n; ++p) {
    if (!slot.emplace(line[p], p).second) {
      return absl::InvalidArgumentError(
          absl::StrCat("element ", line[p], " appears twice in the line"));
    }
  }
  std::vector<const std::vector<Template::Phase>*> phases(n, nullptr);
  std::vector<std::unordered_map<std::string, int>> key_index(n);
  static const std::vector<Template::Phase> kNone;
  for (int i = 0; i < n; ++i) phases[i] = &kNone;
  for (const auto& [e, list] : t.phases()) {
    auto it = slot.find(e);
    if (it == slot.end()) {
      return absl::InvalidArgumentError(
          absl::StrCat("element ", e, " has phases but is not on the line"));
    }
    phases[it->second] = &list;
    for (int k = 0; k < static_cast<int>(list.size()); ++k) {
      if (!key_index[it->second].emplace(list[k].key, k).second) {
        return absl::InvalidArgumentError(absl::StrCat(
            "element ", e, " has duplicate phase '", list[k].key, "'"));
      }
    }
  }

  const auto& events = t.events();
  const int num_events = static_cast<int>(events.size());
  std::vector<int> ev_up(num_events), ev_lo(num_events);
  std::vector<int> up_phase(num_events), lo_phase(num_events);
  std::vector<std::vector<int>> remaining(n);
  for (int i = 0; i < n; ++i) remaining[i].assign(phases[i]->size(), 0);
  std::unordered_map<uint64_t, std::vector<int>> by_pair;
  for (int id = 0; id < num_events; ++id) {
    const Template::Event& ev = events[id];
    auto u = slot.find(ev.up), l = slot.find(ev.lo);
    if (u == slot.end() || l == slot.end() || ev.up == ev.lo) {
      return absl::InvalidArgumentError(
          absl::StrCat("event ", id, " names elements not on the line"));
    }
    auto ku = key_index[u->second].find(ev.up_key);
    auto kl = key_index[l->second].find(ev.lo_key);
    if (ku == key_index[u->second].end() || kl == key_index[l->second].end()) {
      return absl::InvalidArgumentError(
          absl::StrCat("event ", id, " refers to a missing phase '", ev.up_key,
                       "' / '", ev.lo_key, "'"));
    }
    ev_up[id] = u->second;
    ev_lo[id] = l->second;
    up_phase[id] = ku->second;
    lo_phase[id] = kl->second;
    ++remaining[u->second][ku->second];
    ++remaining[l->second][kl->second];
    by_pair[PairKey(u->second, l->second)].push_back(id);
  }

  Schedule s;
  s.initial_line = line;
  std::vector<int> order(n);  // position -> dense index
  std::vector<int> pos(n);
  for (int p = 0; p < n; ++p) order[p] = pos[p] = p;
  std::vector<int> ptr(n, 0);
  std::vector<char> done(num_events, 0);
  int layer = 0;

  auto emit_ops = [&](int i, const std::vector<Gate>& ops) {
    for (Gate g : ops) {
      g.a = pos[i];
      s.steps.push_back(ScheduleStep{layer, -1, line[i], -1, g});
    }
  };
  auto advance = [&](int i) {
    const auto& list = *phases[i];
    while (ptr[i] < static_cast<int>(list.size()) &&
           remaining[i][ptr[i]] == 0) {
      emit_ops(i, list[ptr[i]].exit);
      ++ptr[i];
      if (ptr[i] < static_cast<int>(list.size()))
        emit_ops(i, list[ptr[i]].enter);
    }
  };
  int unfinished = 0;
  for (int i = 0; i < n; ++i) {
    if (phases[i]->empty()) continue;
    emit_ops(i, phases[i]->front().enter);
    advance(i);
    if (ptr[i] < static_cast<int>(phases[i]->size())) ++unfinished;
  }

  std::vector<std::tuple<int, int, int>> cand;  // (prio, position, event)
  std::vector<char> used(n, 0);
  std::vector<int> touched;
  while (unfinished > 0) {
    ++layer;
    cand.clear();
    for (int p = 0; p + 1 < n; ++p) {
      const int a = order[p], b = order[p + 1];
      if (ptr[a] >= static_cast<int>(phases[a]->size()) ||
          ptr[b] >= static_cast<int>(phases[b]->size())) {
        continue;
      }
      auto it = by_pair.find(PairKey(a, b));
      if (it == by_pair.end()) continue;
      for (int id : it->second) {
        if (!done[id] && up_phase[id] == ptr[a] && lo_phase[id] == ptr[b]) {
          cand.emplace_back(events[id].prio, p, id);
          break;
        }
      }
    }
    if (cand.empty()) {
      std::string stuck;
      for (int i = 0; i < n && stuck.size() < 400; ++i) {
        if (ptr[i] < static_cast<int>(phases[i]->size())) {
          absl::StrAppend(&stuck, " ", line[i], "@", pos[i], ":",
                          (*phases[i])[ptr[i]].key);
        }
      }
      return absl::InternalError(
          absl::StrCat("systolic deadlock at layer ", layer, ";", stuck));
    }
    std::sort(cand.begin(), cand.end());
    std::fill(used.begin(), used.end(), 0);
    touched.clear();
    for (const auto& [prio, p, id] : cand) {
      if (used[p] || used[p + 1]) continue;
      used[p] = used[p + 1] = 1;
      const int a = order[p], b = order[p + 1];
      const Template::Event& ev = events[id];
      Gate g = Gate::Make(ev.gate.kind, ev.gate.up_first ? p : p + 1,
                          ev.gate.up_first ? p + 1 : p, ev.gate.phase);
      s.steps.push_back(ScheduleStep{layer, id, line[a], line[b], g});
      done[id] = 1;
      --remaining[a][ptr[a]];
      --remaining[b][ptr[b]];
      if (ev.swap) {
        std::swap(order[p], order[p + 1]);
        pos[a] = p + 1;
        pos[b] = p;
      }
      touched.push_back(a);
      touched.push_back(b);
    }
    for (int i : touched) {
      const bool was_live = ptr[i] < static_cast<int>(phases[i]->size());
      advance(i);
      if (was_live && ptr[i] >= static_cast<int>(phases[i]->size())) {
        --unfinished;
      }
    }
  }
  for (int id = 0; id < num_events; ++id) {
    if (!done[id]) {
      return absl::InternalError(absl::StrCat("event ", id, " never fired"));
    }
  }
  s.layers = layer;
  s.final_line.resize(n);
  for (int p = 0; p < n; ++p) s.final_line[p] = line[order[p]];
  return s;
}

void AppendSchedule(const Schedule& s, int offset, Circuit* c) {
  for (const ScheduleStep& step : s.steps) {
    Gate g = step.gate;
    g.a += offset;
    if (g.b >= 0) g.b += offset;
    c->Add(g);
  }
}

}  // namespace nnashor
