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


#ifndef SIMVERIFY_SERVER_ERRORS_H_
#define SIMVERIFY_SERVER_ERRORS_H_

#include <string>

#include "absl/status/status.h"
#include "absl/strings/string_view.h"

namespace simverify::server {

// Protocol-level error codes. Each travels inside an absl::Status as a
// payload so the HTTP layer can map it without parsing messages.
enum class ErrorCode {
  kUnknownDataset,
  kUnknownVariable,
  kBudgetExceeded,
  kInvalidQuery,
  kInvalidDataset,
  kBadRequest,
  kInternal,
};

absl::string_view ErrorCodeName(ErrorCode code);  // e.g. "BUDGET_EXCEEDED"
int HttpStatusFor(ErrorCode code);

absl::Status MakeError(ErrorCode code, absl::string_view message);

// The code attached by MakeError(), or a best-effort mapping of the
// canonical status code for statuses from elsewhere.
ErrorCode ErrorCodeOf(const absl::Status& status);

}  // namespace simverify::server

#endif  // SIMVERIFY_SERVER_ERRORS_H_
