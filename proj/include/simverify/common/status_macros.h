// Copyright 2026 The simverify Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SIMVERIFY_COMMON_STATUS_MACROS_H_
#define SIMVERIFY_COMMON_STATUS_MACROS_H_

#include "absl/status/status.h"
#include "absl/status/statusor.h"

#define SIMVERIFY_CONCAT_INNER(a, b) a##b
#define SIMVERIFY_CONCAT(a, b) SIMVERIFY_CONCAT_INNER(a, b)

#define SIMVERIFY_RETURN_IF_ERROR(expr)      \
  do {                                       \
    const absl::Status _status = (expr);     \
    if (!_status.ok()) return _status;       \
  } while (0)

#define SIMVERIFY_ASSIGN_OR_RETURN_IMPL(tmp, lhs, rexpr) \
  auto tmp = (rexpr);                                    \
  if (!tmp.ok()) return tmp.status();                    \
  lhs = std::move(tmp).value()

#define SIMVERIFY_ASSIGN_OR_RETURN(lhs, rexpr) \
  SIMVERIFY_ASSIGN_OR_RETURN_IMPL(             \
      SIMVERIFY_CONCAT(_statusor_, __LINE__), lhs, rexpr)

#endif  // SIMVERIFY_COMMON_STATUS_MACROS_H_
