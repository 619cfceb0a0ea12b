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


#ifndef SIMVERIFY_SERVER_BUDGET_LEDGER_H_
#define SIMVERIFY_SERVER_BUDGET_LEDGER_H_

#include <cstdint>
#include <string>
#include <vector>

#include "absl/status/status.h"

namespace simverify::server {

struct LedgerEntry {
  std::string query_id;
  double epsilon = 0.0;
  int64_t timestamp_ms = 0;  // Unix epoch milliseconds

  friend bool operator==(const LedgerEntry&, const LedgerEntry&) = default;
};

// Privacy budget of one dataset under sequential composition. Not
// thread-safe; the owner serializes access.
class BudgetLedger {
 public:
  // Rounding in sums like 0.1 + 0.2 + ... must not reject the query that
  // exactly exhausts the budget, so debits may overshoot by this much.
  static constexpr double kSlack = 1e-9;

  explicit BudgetLedger(double total_epsilon) : total_(total_epsilon) {}

  // OK if a debit of epsilon would currently be accepted.
  absl::Status CheckDebit(double epsilon) const;

  // Appends the entry if spent + epsilon <= total (+ kSlack); otherwise
  // returns BUDGET_EXCEEDED and leaves the ledger unchanged.
  absl::Status TryDebit(LedgerEntry entry);

  double total() const { return total_; }
  // Compensated sum of the log.
  double spent() const;
  // total - spent, never negative.
  double remaining() const;
  const std::vector<LedgerEntry>& log() const { return log_; }

 private:
  double total_;
  std::vector<LedgerEntry> log_;
};

}  // namespace simverify::server

#endif  // SIMVERIFY_SERVER_BUDGET_LEDGER_H_
