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

#ifndef NNASHOR_CHECK_H_
#define NNASHOR_CHECK_H_

#include <cstdio>
#include <cstdlib>

#include "absl/status/status.h"

namespace nnashor {
namespace internal {

[[noreturn]] inline void CheckFailed(const char* file, int line,
                                     const char* what) {
  std::fprintf(stderr, "%s:%d: check failed: %s\n", file, line, what);
  std::abort();
}

}  // namespace internal
}  // namespace nnashor

// Invariant checks inside builders. These guard programming errors, not user
// input, and stay enabled in release builds.
#define NNASHOR_CHECK(cond)                                                   \
  do {                                                                        \
    if (!(cond)) ::nnashor::internal::CheckFailed(__FILE__, __LINE__, #cond); \
  } while (0)

#define NNASHOR_CHECK_OK(expr)                                          \
  do {                                                                  \
    const ::absl::Status _nnashor_st = (expr);                          \
    if (!_nnashor_st.ok()) {                                            \
      ::nnashor::internal::CheckFailed(__FILE__, __LINE__,              \
                                       _nnashor_st.ToString().c_str()); \
    }                                                                   \
  } while (0)

#define NNASHOR_RETURN_IF_ERROR(expr)          \
  do {                                         \
    const ::absl::Status _nnashor_st = (expr); \
    if (!_nnashor_st.ok()) return _nnashor_st; \
  } while (0)

#endif  // NNASHOR_CHECK_H_
