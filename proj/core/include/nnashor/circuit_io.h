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

#ifndef NNASHOR_CIRCUIT_IO_H_
#define NNASHOR_CIRCUIT_IO_H_

#include <string>

#include "absl/status/statusor.h"
#include "nnashor/circuit.h"

namespace nnashor {

// Line-oriented text form: a "width N" header, one gate per line, '#'
// comments. Layouts travel as "# layout_in NAME p0,p1,... [rev]" comments and
// classical circuits carry a "# classical" marker line.
std::string CircuitToText(const Circuit& c);
absl::StatusOr<Circuit> ParseCircuit(const std::string& text);

absl::StatusOr<Circuit> ReadCircuitFile(const std::string& path);
absl::Status WriteCircuitFile(const Circuit& c, const std::string& path);

}  // namespace nnashor

#endif  // NNASHOR_CIRCUIT_IO_H_
