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

// Command-line front end: build, verify, stats and mc.

#ifndef NNASHOR_TOOLS_CLI_H_
#define NNASHOR_TOOLS_CLI_H_

#include <ostream>

namespace nnashor {

// Exit codes.
inline constexpr int kExitPass = 0;
inline constexpr int kExitFail = 1;   // A check or comparison failed.
inline constexpr int kExitUsage = 2;  // Bad flags or parameters.

// argv[0] is the program name. Reports go to `out` unless --output names a
// file; diagnostics go to `err`.
int RunCli(int argc, const char* const* argv, std::ostream& out,
           std::ostream& err);

}  // namespace nnashor

#endif  // NNASHOR_TOOLS_CLI_H_
