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


#include "simverify/server/budget_ledger.h"

#include <algorithm>
#include <utility>

#include "absl/strings/str_format.h"
#include "simverify/common/numeric.h"
#include "simverify/server/errors.h"

namespace simverify::server {

double BudgetLedger::spent() const {
  CompensatedSum sum;
  for (const LedgerEntry& entry : log_) sum.Add(entry.epsilon);
  return sum.Result();
}

double BudgetLedger::remaining() const {
  return std::max(0.0, total_ - spent());
}

absl::Status BudgetLedger::CheckDebit(double epsilon) const {
  if (!(epsilon > 0.0)) {
    return MakeError(ErrorCode::kInvalidQuery, "epsilon must be positive");
  }
  const double spent_now = spent();
  if (spent_now + epsilon > total_ + kSlack) {
    return MakeError(
        ErrorCode::kBudgetExceeded,
        absl::StrFormat("Query needs epsilon %g but only %g of %g remains",
                        epsilon, std::max(0.0, total_ - spent_now), total_));
  }
  return absl::OkStatus();
}

absl::Status BudgetLedger::TryDebit(LedgerEntry entry) {
  if (absl::Status status = CheckDebit(entry.epsilon); !status.ok()) {
    return status;
  }
  log_.push_back(std::move(entry));
  return absl::OkStatus();
}

}  // namespace simverify::server
