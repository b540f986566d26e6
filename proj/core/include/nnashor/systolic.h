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

// Greedy systolic scheduling on a line of qubits.
//
// Each logical element (qubit) owns an ordered list of phases. A phase is a
// set of pairwise events with other elements plus single-wire ops run when the
// phase starts and when it ends. Events inside a phase may fire in any order,
// so they must commute. An event fires when its two elements are adjacent
// (in the stated upper/lower order) and both have it in their current phase.
// "Cross" events exchange the two elements' positions, "touch" events do not.

#ifndef NNASHOR_SYSTOLIC_H_
#define NNASHOR_SYSTOLIC_H_

#include <map>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "nnashor/circuit.h"
#include "nnashor/gate.h"

namespace nnashor {

// Gate carried by an event. Operand a is the upper element when up_first.
struct EventGate {
  GateKind kind = GateKind::kSwap;
  bool up_first = true;
  DyadicPhase phase;
};

class Template {
 public:
  struct Phase {
    std::string key;
    std::vector<Gate> enter;  // Single-wire ops; the wire is filled in later.
    std::vector<Gate> exit;
  };
  struct Event {
    int up = 0;
    std::string up_key;
    int lo = 0;
    std::string lo_key;
    int prio = 0;
    bool swap = true;
    EventGate gate;
  };

  void AddPhase(int element, const std::string& key);
  void AddEnter(int element, const std::string& key, const Gate& op);
  void AddExit(int element, const std::string& key, const Gate& op);
  void Cross(int up, const std::string& up_key, int lo,
             const std::string& lo_key, int prio, EventGate g = {});
  void Touch(int up, const std::string& up_key, int lo,
             const std::string& lo_key, int prio, EventGate g);

  // Appends other's phases after this template's, element by element.
  void Merge(const Template& other);
  // Runs every phase backwards with adjoint gates. Element roles in each
  // event are unchanged.
  Template Reversed() const;

  const std::map<int, std::vector<Phase>>& phases() const { return phases_; }
  const std::vector<Event>& events() const { return events_; }

 private:
  Phase& Find(int element, const std::string& key);

  std::map<int, std::vector<Phase>> phases_;
  std::vector<Event> events_;
};

struct ScheduleStep {
  int layer = 0;
  int event = -1;  // Index into Template::events(), or -1 for a phase op.
  int up = -1;     // Elements involved; lo is -1 for phase ops.
  int lo = -1;
  Gate gate;  // With wires set to line positions.
};

struct Schedule {
  int layers = 0;
  std::vector<int> initial_line;
  std::vector<int> final_line;
  std::vector<ScheduleStep> steps;  // In emission order.
};

// Runs the greedy engine: each layer takes, for every adjacent pair, the
// first ready event between them, sorts by (priority, position) and fires a
// disjoint subset. Fails on deadlock. Elements in `line` without phases stay
// idle but can be crossed by events that name them.
absl::StatusOr<Schedule> RunSystolic(const std::vector<int>& line,
                                     const Template& t);

// Gates of a schedule, in order, with line position p mapped to wire
// offset + p.
void AppendSchedule(const Schedule& s, int offset, Circuit* c);

// Position of each element in a line.
std::map<int, int> PositionsOf(const std::vector<int>& line);

}  // namespace nnashor

#endif  // NNASHOR_SYSTOLIC_H_
