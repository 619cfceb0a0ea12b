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


#ifndef SIMVERIFY_SERVER_SERVICE_H_
#define SIMVERIFY_SERVER_SERVICE_H_

#include <cstdint>
#include <fstream>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/string_view.h"
#include "json.hpp"
#include "simverify/common/rng.h"
#include "simverify/posterior/posterior.h"
#include "simverify/server/budget_ledger.h"
#include "simverify/survey/survey_sample.h"
#include "simverify/verification/tolerance.h"

namespace simverify::server {

struct ServiceConfig {
  // Append-only JSON-lines journal. Empty keeps all state in memory.
  std::string journal_path;
  int default_gibbs_iters = posterior::kDefaultIters;
  int default_gibbs_burnin = posterior::kDefaultBurnin;
  int max_gibbs_iters = 1000000;
  int max_partitions = 1000;
  // Mixed into every query seed so that a caller-chosen seed does not reveal
  // the Laplace noise. Unset: taken from the journal, or drawn at random on
  // first start and journaled.
  std::optional<uint64_t> noise_secret;
};

struct AnalysisQuery {
  std::string variable = "x";
  survey::EstimandKind estimand = survey::EstimandKind::kTotal;
  double estimate0 = 0.0;
  double sd0 = 0.0;
  verification::ToleranceSpec tolerance;
  int num_partitions = 0;
  double epsilon = 0.0;
  std::optional<int> gibbs_iters;
  std::optional<int> gibbs_burnin;
  std::optional<uint64_t> seed;
};

// Everything released for one query. Only noisy or post-processed values;
// there is no slot for the raw count or partition estimates.
struct QueryResponse {
  std::string query_id;
  double s_noisy = 0.0;
  posterior::PosteriorResult posterior;
  double epsilon_spent = 0.0;
  double epsilon_remaining = 0.0;
};

struct BudgetStatus {
  double total = 0.0;
  double spent = 0.0;
  double remaining = 0.0;
  std::vector<LedgerEntry> query_log;

  friend bool operator==(const BudgetStatus&, const BudgetStatus&) = default;
};

// Thread-safe. Each dataset's ledger is a serialization point: a query's
// budget is checked, journaled and debited under that dataset's lock, and
// the verification itself runs after the lock is released.
class VerificationService {
 public:
  // Opens (creating if needed) the journal and replays it.
  static absl::StatusOr<std::unique_ptr<VerificationService>> Open(
      ServiceConfig config);

  VerificationService(const VerificationService&) = delete;
  VerificationService& operator=(const VerificationService&) = delete;

  absl::StatusOr<std::string> RegisterDataset(survey::SurveySample sample,
                                              double total_epsilon);

  absl::StatusOr<QueryResponse> SubmitQuery(absl::string_view dataset_id,
                                            const AnalysisQuery& query);

  absl::StatusOr<BudgetStatus> GetBudgetStatus(
      absl::string_view dataset_id) const;

  const ServiceConfig& config() const { return config_; }

 private:
  struct Dataset {
    Dataset(std::string id, survey::SurveySample sample, double total_epsilon,
            int64_t created_at_ms)
        : id(std::move(id)),
          sample(std::move(sample)),
          created_at_ms(created_at_ms),
          ledger(total_epsilon) {}

    const std::string id;
    const survey::SurveySample sample;
    const int64_t created_at_ms;
    mutable std::mutex mu;
    BudgetLedger ledger;
  };

  explicit VerificationService(ServiceConfig config);

  // Returns the byte length of the intact prefix.
  absl::StatusOr<uint64_t> Replay(std::istream& in);
  absl::Status AppendJournal(const nlohmann::json& line);
  absl::Status ValidateQuery(const Dataset& dataset,
                             const AnalysisQuery& query) const;
  Dataset* FindDataset(absl::string_view dataset_id) const;
  uint64_t RandomWord();

  ServiceConfig config_;
  std::optional<uint64_t> noise_secret_;

  mutable std::shared_mutex datasets_mu_;
  std::map<std::string, std::unique_ptr<Dataset>, std::less<>> datasets_;

  std::mutex journal_mu_;
  std::ofstream journal_;

  std::mutex rng_mu_;
  Rng id_rng_;
};

// JSON codecs for the HTTP protocol. Field errors map to INVALID_QUERY or
// INVALID_DATASET.
absl::StatusOr<AnalysisQuery> ParseAnalysisQuery(const nlohmann::json& json);
nlohmann::json ToJson(const AnalysisQuery& query);

struct Registration {
  survey::SurveySample sample;
  double total_epsilon = 0.0;
};
// {records: [{id, x, pi, w}...], n, N, total_epsilon}
absl::StatusOr<Registration> ParseRegistration(const nlohmann::json& json);
nlohmann::json RegistrationJson(const survey::SurveySample& sample,
                                double total_epsilon);

// {query_id, s_noisy, posterior: {...}, epsilon_spent, epsilon_remaining}
nlohmann::json ToJson(const QueryResponse& response);
// {total, spent, remaining, query_log: [{query_id, epsilon, timestamp_ms}]}
nlohmann::json ToJson(const BudgetStatus& status);

}  // namespace simverify::server

#endif  // SIMVERIFY_SERVER_SERVICE_H_
