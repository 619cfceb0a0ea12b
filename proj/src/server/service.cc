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


#include "simverify/server/service.h"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <limits>
#include <random>
#include <sstream>
#include <utility>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "simverify/common/status_macros.h"
#include "simverify/server/errors.h"
#include "simverify/verification/verify.h"

namespace simverify::server {
namespace {

using nlohmann::json;

// Sub-stream of the effective query seed used by the Gibbs sampler; streams
// 0 and 1 belong to Verify().
constexpr uint64_t kPosteriorStream = 2;

int64_t NowMs() {
  return std::chrono::duration_cast<std::chrono::milliseconds>(
             std::chrono::system_clock::now().time_since_epoch())
      .count();
}

// Typed field access that reports the offending key.
class FieldReader {
 public:
  FieldReader(const json& object, ErrorCode code) : object_(object), code_(code) {}

  absl::Status RequireObject() const {
    if (!object_.is_object()) return Error("Expected a JSON object");
    return absl::OkStatus();
  }

  bool Has(const char* key) const {
    return object_.is_object() && object_.contains(key);
  }

  absl::StatusOr<double> Number(const char* key) const {
    if (!Has(key)) return Missing(key);
    const json& value = object_.at(key);
    if (!value.is_number()) return Error(absl::StrCat("'", key, "' must be a number"));
    const double number = value.get<double>();
    if (!std::isfinite(number)) {
      return Error(absl::StrCat("'", key, "' must be finite"));
    }
    return number;
  }

  absl::StatusOr<int64_t> Integer(const char* key) const {
    if (!Has(key)) return Missing(key);
    const json& value = object_.at(key);
    if (!value.is_number_integer()) {
      return Error(absl::StrCat("'", key, "' must be an integer"));
    }
    if (value.is_number_unsigned() &&
        value.get<uint64_t>() >
            static_cast<uint64_t>(std::numeric_limits<int64_t>::max())) {
      return Error(absl::StrCat("'", key, "' is out of range"));
    }
    return value.get<int64_t>();
  }

  absl::StatusOr<uint64_t> Unsigned(const char* key) const {
    if (!Has(key)) return Missing(key);
    const json& value = object_.at(key);
    if (!value.is_number_unsigned()) {
      return Error(absl::StrCat("'", key, "' must be a nonnegative integer"));
    }
    return value.get<uint64_t>();
  }

  absl::StatusOr<std::string> String(const char* key) const {
    if (!Has(key)) return Missing(key);
    const json& value = object_.at(key);
    if (!value.is_string()) return Error(absl::StrCat("'", key, "' must be a string"));
    return value.get<std::string>();
  }

  absl::StatusOr<int> Int(const char* key) const {
    SIMVERIFY_ASSIGN_OR_RETURN(int64_t value, Integer(key));
    if (value < std::numeric_limits<int>::min() ||
        value > std::numeric_limits<int>::max()) {
      return Error(absl::StrCat("'", key, "' is out of range"));
    }
    return static_cast<int>(value);
  }

  absl::Status Error(absl::string_view message) const {
    return MakeError(code_, message);
  }

 private:
  absl::Status Missing(const char* key) const {
    return Error(absl::StrCat("Missing field '", key, "'"));
  }

  const json& object_;
  ErrorCode code_;
};

// Re-tags a validation status from a lower layer with a protocol code.
absl::Status Retag(const absl::Status& status, ErrorCode code) {
  if (status.ok()) return status;
  return MakeError(code, status.message());
}

json EntryJson(const LedgerEntry& entry) {
  return json{{"query_id", entry.query_id},
              {"epsilon", entry.epsilon},
              {"timestamp_ms", entry.timestamp_ms}};
}

}  // namespace

absl::StatusOr<AnalysisQuery> ParseAnalysisQuery(const json& body) {
  const ErrorCode kCode = ErrorCode::kInvalidQuery;
  FieldReader reader(body, kCode);
  SIMVERIFY_RETURN_IF_ERROR(reader.RequireObject());
  AnalysisQuery query;
  SIMVERIFY_ASSIGN_OR_RETURN(query.variable, reader.String("variable"));
  SIMVERIFY_ASSIGN_OR_RETURN(std::string estimand, reader.String("estimand"));
  absl::StatusOr<survey::EstimandKind> kind = survey::ParseEstimand(estimand);
  SIMVERIFY_RETURN_IF_ERROR(Retag(kind.status(), kCode));
  query.estimand = *kind;
  SIMVERIFY_ASSIGN_OR_RETURN(query.estimate0, reader.Number("estimate0"));
  SIMVERIFY_ASSIGN_OR_RETURN(query.sd0, reader.Number("sd0"));
  SIMVERIFY_ASSIGN_OR_RETURN(query.epsilon, reader.Number("epsilon"));
  if (reader.Has("M") && reader.Has("m")) {
    return reader.Error("Give the partition count as 'M' or 'm', not both");
  }
  SIMVERIFY_ASSIGN_OR_RETURN(query.num_partitions,
                             reader.Int(reader.Has("m") ? "m" : "M"));

  if (!reader.Has("tolerance")) return reader.Error("Missing field 'tolerance'");
  FieldReader tolerance(body.at("tolerance"), kCode);
  SIMVERIFY_RETURN_IF_ERROR(tolerance.RequireObject());
  SIMVERIFY_ASSIGN_OR_RETURN(std::string tolerance_kind, tolerance.String("kind"));
  absl::StatusOr<verification::ToleranceKind> parsed_kind =
      verification::ParseToleranceKind(tolerance_kind);
  SIMVERIFY_RETURN_IF_ERROR(Retag(parsed_kind.status(), kCode));
  query.tolerance.kind = *parsed_kind;
  SIMVERIFY_ASSIGN_OR_RETURN(query.tolerance.alpha, tolerance.Number("alpha"));
  if (tolerance.Has("mode")) {
    SIMVERIFY_ASSIGN_OR_RETURN(std::string mode, tolerance.String("mode"));
    absl::StatusOr<verification::IntervalMode> parsed_mode =
        verification::ParseIntervalMode(mode);
    SIMVERIFY_RETURN_IF_ERROR(Retag(parsed_mode.status(), kCode));
    query.tolerance.mode = *parsed_mode;
  }
  if (tolerance.Has("gamma") && !body.at("tolerance").at("gamma").is_null()) {
    SIMVERIFY_ASSIGN_OR_RETURN(query.tolerance.gamma, tolerance.Number("gamma"));
  }

  if (reader.Has("gibbs")) {
    FieldReader gibbs(body.at("gibbs"), kCode);
    SIMVERIFY_RETURN_IF_ERROR(gibbs.RequireObject());
    if (gibbs.Has("iters")) {
      SIMVERIFY_ASSIGN_OR_RETURN(query.gibbs_iters, gibbs.Int("iters"));
    }
    if (gibbs.Has("burnin")) {
      SIMVERIFY_ASSIGN_OR_RETURN(query.gibbs_burnin, gibbs.Int("burnin"));
    }
  }
  if (reader.Has("seed") && !body.at("seed").is_null()) {
    SIMVERIFY_ASSIGN_OR_RETURN(query.seed, reader.Unsigned("seed"));
  }
  return query;
}

json ToJson(const AnalysisQuery& query) {
  json tolerance{
      {"kind", std::string(verification::ToleranceKindName(query.tolerance.kind))},
      {"alpha", query.tolerance.alpha},
      {"mode", std::string(verification::IntervalModeName(query.tolerance.mode))}};
  if (query.tolerance.gamma) tolerance["gamma"] = *query.tolerance.gamma;
  json body{{"variable", query.variable},
            {"estimand", std::string(survey::EstimandName(query.estimand))},
            {"estimate0", query.estimate0},
            {"sd0", query.sd0},
            {"tolerance", tolerance},
            {"M", query.num_partitions},
            {"epsilon", query.epsilon}};
  json gibbs = json::object();
  if (query.gibbs_iters) gibbs["iters"] = *query.gibbs_iters;
  if (query.gibbs_burnin) gibbs["burnin"] = *query.gibbs_burnin;
  if (!gibbs.empty()) body["gibbs"] = gibbs;
  if (query.seed) body["seed"] = *query.seed;
  return body;
}

absl::StatusOr<Registration> ParseRegistration(const json& body) {
  const ErrorCode kCode = ErrorCode::kInvalidDataset;
  FieldReader reader(body, kCode);
  SIMVERIFY_RETURN_IF_ERROR(reader.RequireObject());
  SIMVERIFY_ASSIGN_OR_RETURN(double total_epsilon,
                             reader.Number("total_epsilon"));
  SIMVERIFY_ASSIGN_OR_RETURN(uint64_t population_size, reader.Unsigned("N"));
  if (!reader.Has("records") || !body.at("records").is_array()) {
    return reader.Error("'records' must be an array");
  }
  const json& rows = body.at("records");
  if (reader.Has("n")) {
    SIMVERIFY_ASSIGN_OR_RETURN(uint64_t n, reader.Unsigned("n"));
    if (n != rows.size()) {
      return reader.Error(absl::StrCat("'n' is ", n, " but ", rows.size(),
                                       " records were sent"));
    }
  }
  std::vector<survey::SampleRecord> records;
  records.reserve(rows.size());
  for (const json& row : rows) {
    FieldReader field(row, kCode);
    SIMVERIFY_RETURN_IF_ERROR(field.RequireObject());
    survey::SampleRecord record;
    SIMVERIFY_ASSIGN_OR_RETURN(record.id, field.Unsigned("id"));
    SIMVERIFY_ASSIGN_OR_RETURN(record.x, field.Number("x"));
    SIMVERIFY_ASSIGN_OR_RETURN(record.pi, field.Number("pi"));
    if (field.Has("w")) {
      SIMVERIFY_ASSIGN_OR_RETURN(record.w, field.Number("w"));
    } else {
      record.w = 1.0 / record.pi;
    }
    records.push_back(record);
  }
  absl::StatusOr<survey::SurveySample> sample =
      survey::SurveySample::Create(std::move(records), population_size);
  SIMVERIFY_RETURN_IF_ERROR(Retag(sample.status(), kCode));
  return Registration{*std::move(sample), total_epsilon};
}

json RegistrationJson(const survey::SurveySample& sample, double total_epsilon) {
  json records = json::array();
  for (const survey::SampleRecord& r : sample.records()) {
    records.push_back({{"id", r.id}, {"x", r.x}, {"pi", r.pi}, {"w", r.w}});
  }
  return json{{"records", std::move(records)},
              {"n", sample.size()},
              {"N", sample.population_size()},
              {"total_epsilon", total_epsilon}};
}

json ToJson(const QueryResponse& response) {
  return json{{"query_id", response.query_id},
              {"s_noisy", response.s_noisy},
              {"posterior", posterior::ToJson(response.posterior)},
              {"epsilon_spent", response.epsilon_spent},
              {"epsilon_remaining", response.epsilon_remaining}};
}

json ToJson(const BudgetStatus& status) {
  json log = json::array();
  for (const LedgerEntry& entry : status.query_log) log.push_back(EntryJson(entry));
  return json{{"total", status.total},
              {"spent", status.spent},
              {"remaining", status.remaining},
              {"query_log", std::move(log)}};
}

VerificationService::VerificationService(ServiceConfig config)
    : config_(std::move(config)), id_rng_([] {
        std::random_device device;
        return (static_cast<uint64_t>(device()) << 32) ^ device();
      }()) {}

absl::StatusOr<std::unique_ptr<VerificationService>> VerificationService::Open(
    ServiceConfig config) {
  if (config.default_gibbs_burnin < 0 ||
      config.default_gibbs_iters <= config.default_gibbs_burnin ||
      config.default_gibbs_iters > config.max_gibbs_iters) {
    return absl::InvalidArgumentError(
        "Need max_gibbs_iters >= gibbs iters > gibbs burnin >= 0");
  }
  if (config.max_partitions < 2) {
    return absl::InvalidArgumentError("max M must be at least 2");
  }
  std::unique_ptr<VerificationService> service(
      new VerificationService(std::move(config)));
  const std::string& path = service->config_.journal_path;
  if (!path.empty()) {
    if (std::ifstream in(path); in) {
      SIMVERIFY_ASSIGN_OR_RETURN(uint64_t intact_bytes, service->Replay(in));
      in.close();
      std::error_code error;
      if (std::filesystem::file_size(path, error) != intact_bytes) {
        std::filesystem::resize_file(path, intact_bytes, error);
        if (error) {
          return absl::UnavailableError(absl::StrCat(
              "Cannot drop torn journal tail: ", error.message()));
        }
      }
    }
    service->journal_.open(path, std::ios::app);
    if (!service->journal_) {
      return absl::UnavailableError(
          absl::StrCat("Cannot open journal for append: ", path));
    }
  }
  if (!service->noise_secret_.has_value()) {
    service->noise_secret_ = service->config_.noise_secret.value_or(
        service->RandomWord());
    SIMVERIFY_RETURN_IF_ERROR(service->AppendJournal(
        json{{"type", "secret"}, {"noise_secret", *service->noise_secret_}}));
  }
  return service;
}

absl::StatusOr<uint64_t> VerificationService::Replay(std::istream& in) {
  std::string line;
  int line_number = 0;
  uint64_t intact_bytes = 0;
  while (std::getline(in, line)) {
    ++line_number;
    // A final line without its newline is a torn write that never reached a
    // caller, so it is dropped.
    if (in.eof()) break;
    intact_bytes += line.size() + 1;
    if (line.empty()) continue;
    json entry = json::parse(line, nullptr, /*allow_exceptions=*/false);
    if (entry.is_discarded()) {
      return absl::DataLossError(
          absl::StrCat("Journal line ", line_number, " is not valid JSON"));
    }
    const std::string type = entry.value("type", "");
    if (type == "secret") {
      const uint64_t secret = entry.at("noise_secret").get<uint64_t>();
      if (config_.noise_secret && *config_.noise_secret != secret) {
        return absl::FailedPreconditionError(
            "Configured noise secret differs from the journal's");
      }
      noise_secret_ = secret;
    } else if (type == "register") {
      absl::StatusOr<Registration> registration =
          ParseRegistration(entry.at("dataset"));
      if (!registration.ok()) {
        return absl::DataLossError(absl::StrCat(
            "Journal line ", line_number, ": ", registration.status().message()));
      }
      const std::string id = entry.at("dataset_id").get<std::string>();
      datasets_[id] = std::make_unique<Dataset>(
          id, std::move(registration->sample), registration->total_epsilon,
          entry.at("created_at_ms").get<int64_t>());
    } else if (type == "debit") {
      Dataset* dataset = FindDataset(entry.at("dataset_id").get<std::string>());
      if (dataset == nullptr) {
        return absl::DataLossError(absl::StrCat(
            "Journal line ", line_number, " debits an unknown dataset"));
      }
      absl::Status status = dataset->ledger.TryDebit(
          LedgerEntry{entry.at("query_id").get<std::string>(),
                      entry.at("epsilon").get<double>(),
                      entry.at("timestamp_ms").get<int64_t>()});
      if (!status.ok()) {
        return absl::DataLossError(absl::StrCat("Journal line ", line_number,
                                                ": ", status.message()));
      }
    } else {
      return absl::DataLossError(absl::StrCat("Journal line ", line_number,
                                              " has unknown type '", type, "'"));
    }
  }
  return intact_bytes;
}

absl::Status VerificationService::AppendJournal(const json& line) {
  if (config_.journal_path.empty()) return absl::OkStatus();
  std::lock_guard<std::mutex> lock(journal_mu_);
  journal_ << line.dump() << '\n';
  journal_.flush();
  if (!journal_) {
    return MakeError(ErrorCode::kInternal, "Journal write failed");
  }
  return absl::OkStatus();
}

uint64_t VerificationService::RandomWord() {
  std::lock_guard<std::mutex> lock(rng_mu_);
  return id_rng_.engine()();
}

VerificationService::Dataset* VerificationService::FindDataset(
    absl::string_view dataset_id) const {
  auto it = datasets_.find(dataset_id);
  return it == datasets_.end() ? nullptr : it->second.get();
}

absl::StatusOr<std::string> VerificationService::RegisterDataset(
    survey::SurveySample sample, double total_epsilon) {
  if (!(total_epsilon > 0.0) || !std::isfinite(total_epsilon)) {
    return MakeError(ErrorCode::kInvalidDataset,
                     "total_epsilon must be positive and finite");
  }
  if (sample.size() < 2) {
    return MakeError(ErrorCode::kInvalidDataset,
                     "A dataset needs at least two records");
  }
  const int64_t created_at = NowMs();
  std::unique_lock<std::shared_mutex> lock(datasets_mu_);
  std::string id;
  do {
    id = absl::StrFormat("%016x", RandomWord());
  } while (datasets_.count(id) > 0);
  SIMVERIFY_RETURN_IF_ERROR(
      AppendJournal(json{{"type", "register"},
                         {"dataset_id", id},
                         {"created_at_ms", created_at},
                         {"dataset", RegistrationJson(sample, total_epsilon)}}));
  datasets_[id] = std::make_unique<Dataset>(id, std::move(sample),
                                            total_epsilon, created_at);
  return id;
}

absl::Status VerificationService::ValidateQuery(const Dataset& dataset,
                                                const AnalysisQuery& query) const {
  auto invalid = [](absl::string_view message) {
    return MakeError(ErrorCode::kInvalidQuery, message);
  };
  if (query.num_partitions < 2) return invalid("M must be at least 2");
  if (query.num_partitions > config_.max_partitions) {
    return invalid(absl::StrCat("M may be at most ", config_.max_partitions));
  }
  if (static_cast<size_t>(query.num_partitions) > dataset.sample.size()) {
    return invalid("M exceeds the number of records in the dataset");
  }
  if (!(query.epsilon > 0.0) || !std::isfinite(query.epsilon)) {
    return invalid("epsilon must be positive and finite");
  }
  if (!(query.sd0 >= 0.0) || !std::isfinite(query.sd0)) {
    return invalid("sd0 must be nonnegative and finite");
  }
  if (!std::isfinite(query.estimate0)) return invalid("estimate0 must be finite");
  if (absl::Status status = query.tolerance.Validate(); !status.ok()) {
    return invalid(status.message());
  }
  const int iters = query.gibbs_iters.value_or(config_.default_gibbs_iters);
  const int burnin = query.gibbs_burnin.value_or(config_.default_gibbs_burnin);
  if (burnin < 0 || iters <= burnin) {
    return invalid("Gibbs settings need iters > burnin >= 0");
  }
  if (iters > config_.max_gibbs_iters) {
    return invalid(
        absl::StrCat("Gibbs iters may be at most ", config_.max_gibbs_iters));
  }
  return absl::OkStatus();
}

absl::StatusOr<QueryResponse> VerificationService::SubmitQuery(
    absl::string_view dataset_id, const AnalysisQuery& query) {
  Dataset* dataset;
  {
    std::shared_lock<std::shared_mutex> lock(datasets_mu_);
    dataset = FindDataset(dataset_id);
  }
  if (dataset == nullptr) {
    return MakeError(ErrorCode::kUnknownDataset,
                     absl::StrCat("No dataset '", dataset_id, "'"));
  }
  if (query.variable != "x") {
    return MakeError(ErrorCode::kUnknownVariable,
                     absl::StrCat("Dataset has no variable '", query.variable,
                                  "'; available: x"));
  }
  SIMVERIFY_RETURN_IF_ERROR(ValidateQuery(*dataset, query));
  const uint64_t seed = query.seed.has_value() ? *query.seed : RandomWord();

  QueryResponse response;
  {
    std::lock_guard<std::mutex> lock(dataset->mu);
    LedgerEntry entry{absl::StrCat("q", dataset->ledger.log().size() + 1),
                      query.epsilon, NowMs()};
    SIMVERIFY_RETURN_IF_ERROR(dataset->ledger.CheckDebit(entry.epsilon));
    SIMVERIFY_RETURN_IF_ERROR(AppendJournal(json{{"type", "debit"},
                                                 {"dataset_id", dataset->id},
                                                 {"query_id", entry.query_id},
                                                 {"epsilon", entry.epsilon},
                                                 {"timestamp_ms", entry.timestamp_ms}}));
    SIMVERIFY_RETURN_IF_ERROR(dataset->ledger.TryDebit(std::move(entry)));
    response.query_id = dataset->ledger.log().back().query_id;
    response.epsilon_spent = dataset->ledger.spent();
    response.epsilon_remaining = dataset->ledger.remaining();
  }

  const uint64_t effective_seed = DeriveSeed(*noise_secret_, {seed});
  absl::StatusOr<verification::VerificationResult> verified =
      verification::Verify(dataset->sample, query.estimate0, query.sd0,
                           query.estimand, query.tolerance,
                           query.num_partitions, query.epsilon, effective_seed);
  if (!verified.ok()) {
    return MakeError(ErrorCode::kInternal, verified.status().message());
  }
  absl::StatusOr<posterior::PosteriorResult> posterior =
      posterior::GibbsPosterior(
          verified->s_noisy, query.num_partitions, query.epsilon,
          query.gibbs_iters.value_or(config_.default_gibbs_iters),
          query.gibbs_burnin.value_or(config_.default_gibbs_burnin),
          DeriveSeed(effective_seed, {kPosteriorStream}));
  if (!posterior.ok()) {
    return MakeError(ErrorCode::kInternal, posterior.status().message());
  }
  response.s_noisy = verified->s_noisy;
  response.posterior = *std::move(posterior);
  return response;
}

absl::StatusOr<BudgetStatus> VerificationService::GetBudgetStatus(
    absl::string_view dataset_id) const {
  Dataset* dataset;
  {
    std::shared_lock<std::shared_mutex> lock(datasets_mu_);
    dataset = FindDataset(dataset_id);
  }
  if (dataset == nullptr) {
    return MakeError(ErrorCode::kUnknownDataset,
                     absl::StrCat("No dataset '", dataset_id, "'"));
  }
  std::lock_guard<std::mutex> lock(dataset->mu);
  return BudgetStatus{dataset->ledger.total(), dataset->ledger.spent(),
                      dataset->ledger.remaining(), dataset->ledger.log()};
}

}  // namespace simverify::server
