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


#include "simverify/server/errors.h"


#include "absl/strings/cord.h"

namespace simverify::server {
namespace {

constexpr char kPayloadUrl[] = "type.simverify/error_code";

constexpr ErrorCode kAllCodes[] = {
    ErrorCode::kUnknownDataset, ErrorCode::kUnknownVariable,
    ErrorCode::kBudgetExceeded, ErrorCode::kInvalidQuery,
    ErrorCode::kInvalidDataset, ErrorCode::kBadRequest,
    ErrorCode::kInternal,
};

absl::StatusCode CanonicalCodeFor(ErrorCode code) {
  switch (code) {
    case ErrorCode::kUnknownDataset:
    case ErrorCode::kUnknownVariable:
      return absl::StatusCode::kNotFound;
    case ErrorCode::kBudgetExceeded:
      return absl::StatusCode::kResourceExhausted;
    case ErrorCode::kInvalidQuery:
    case ErrorCode::kInvalidDataset:
    case ErrorCode::kBadRequest:
      return absl::StatusCode::kInvalidArgument;
    case ErrorCode::kInternal:
      break;
  }
  return absl::StatusCode::kInternal;
}

}  // namespace

absl::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kUnknownDataset:
      return "UNKNOWN_DATASET";
    case ErrorCode::kUnknownVariable:
      return "UNKNOWN_VARIABLE";
    case ErrorCode::kBudgetExceeded:
      return "BUDGET_EXCEEDED";
    case ErrorCode::kInvalidQuery:
      return "INVALID_QUERY";
    case ErrorCode::kInvalidDataset:
      return "INVALID_DATASET";
    case ErrorCode::kBadRequest:
      return "BAD_REQUEST";
    case ErrorCode::kInternal:
      break;
  }
  return "INTERNAL";
}

int HttpStatusFor(ErrorCode code) {
  switch (code) {
    case ErrorCode::kUnknownDataset:
    case ErrorCode::kUnknownVariable:
      return 404;
    case ErrorCode::kBudgetExceeded:
      return 402;
    case ErrorCode::kInvalidQuery:
    case ErrorCode::kInvalidDataset:
      return 422;
    case ErrorCode::kBadRequest:
      return 400;
    case ErrorCode::kInternal:
      break;
  }
  return 500;
}

absl::Status MakeError(ErrorCode code, absl::string_view message) {
  absl::Status status(CanonicalCodeFor(code), message);
  status.SetPayload(kPayloadUrl, absl::Cord(ErrorCodeName(code)));
  return status;
}

ErrorCode ErrorCodeOf(const absl::Status& status) {
  if (auto payload = status.GetPayload(kPayloadUrl)) {
    for (ErrorCode code : kAllCodes) {
      if (*payload == ErrorCodeName(code)) return code;
    }
  }
  switch (status.code()) {
    case absl::StatusCode::kInvalidArgument:
    case absl::StatusCode::kOutOfRange:
    case absl::StatusCode::kFailedPrecondition:
      return ErrorCode::kInvalidQuery;
    case absl::StatusCode::kNotFound:
      return ErrorCode::kUnknownDataset;
    case absl::StatusCode::kResourceExhausted:
      return ErrorCode::kBudgetExceeded;
    default:
      return ErrorCode::kInternal;
  }
}

}  // namespace simverify::server
