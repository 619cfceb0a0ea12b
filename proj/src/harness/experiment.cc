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


#include "simverify/harness/experiment.h"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <ostream>
#include <thread>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_split.h"
#include "simverify/common/csv.h"
#include "simverify/common/numeric.h"
#include "simverify/common/rng.h"
#include "simverify/common/status_macros.h"
#include "simverify/survey/estimators.h"
#include "simverify/survey/pps.h"
#include "simverify/verification/verify.h"

namespace simverify::harness {
namespace {

using nlohmann::json;
using survey::EstimandKind;
using synthesis::Provenance;
using verification::IntervalMode;

// Position of one cell inside its (n_k, M) design block.
struct CellCoordinates {
  size_t alpha_index;
  IntervalMode mode;
  Provenance synth;
  EstimandKind estimand;
};

// Cell order: n_k, then M, then synthesizer, estimand, interval mode and
// alpha, with alpha varying fastest.
std::vector<CellCoordinates> CellsPerDesign(const ExperimentConfig& config) {
  std::vector<CellCoordinates> cells;
  for (Provenance synth : config.synth_modes) {
    for (EstimandKind estimand : config.estimands) {
      for (IntervalMode mode : config.interval_modes) {
        for (size_t a = 0; a < config.alpha_grid.size(); ++a) {
          cells.push_back({a, mode, synth, estimand});
        }
      }
    }
  }
  return cells;
}

template <typename T, typename Parse>
absl::StatusOr<std::vector<T>> ParseNameList(const json& value,
                                             absl::string_view key,
                                             Parse parse) {
  if (!value.is_array()) {
    return absl::InvalidArgumentError(absl::StrCat("'", key, "' must be a list"));
  }
  std::vector<T> parsed;
  for (const json& item : value) {
    if (!item.is_string()) {
      return absl::InvalidArgumentError(
          absl::StrCat("'", key, "' entries must be strings"));
    }
    SIMVERIFY_ASSIGN_OR_RETURN(T entry, parse(item.get<std::string>()));
    parsed.push_back(entry);
  }
  return parsed;
}

template <typename T>
absl::StatusOr<T> Get(const json& object, const char* key) {
  try {
    return object.at(key).get<T>();
  } catch (const json::exception& e) {
    return absl::InvalidArgumentError(
        absl::StrCat("Config field '", key, "': ", e.what()));
  }
}

template <typename T>
absl::Status GetIfPresent(const json& object, const char* key, T& out) {
  if (!object.contains(key)) return absl::OkStatus();
  SIMVERIFY_ASSIGN_OR_RETURN(out, Get<T>(object, key));
  return absl::OkStatus();
}

}  // namespace

absl::Status ExperimentConfig::Validate() const {
  auto invalid = [](auto&&... parts) {
    return absl::InvalidArgumentError(absl::StrCat(parts...));
  };
  if (population_size < 2) return invalid("N must be at least 2");
  if (reps < 1) return invalid("reps must be at least 1");
  if (nk_grid.empty() || m_grid.empty() || alpha_grid.empty() ||
      interval_modes.empty() || synth_modes.empty() || estimands.empty()) {
    return invalid("Every grid must be nonempty");
  }
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
    return invalid("epsilon must be positive and finite");
  }
  for (double alpha : alpha_grid) {
    if (!(alpha > 0.0) || !std::isfinite(alpha)) {
      return invalid("alpha values must be positive, got ", alpha);
    }
  }
  for (int n_k : nk_grid) {
    if (n_k < 1) return invalid("n_k values must be positive, got ", n_k);
    for (int m : m_grid) {
      if (m < 1) return invalid("M values must be positive, got ", m);
      const uint64_t n = static_cast<uint64_t>(n_k) * static_cast<uint64_t>(m);
      if (n > population_size) {
        return invalid("n_k * M = ", n, " exceeds N = ", population_size);
      }
      if (n < 2) return invalid("n_k * M must be at least 2");
    }
  }
  if (gibbs_burnin < 0 || gibbs_iters <= gibbs_burnin) {
    return invalid("Need gibbs_iters > gibbs_burnin >= 0");
  }
  if (threads < 0) return invalid("threads must be nonnegative");
  return absl::OkStatus();
}

size_t ExperimentConfig::NumCells() const {
  return nk_grid.size() * m_grid.size() * alpha_grid.size() *
         interval_modes.size() * synth_modes.size() * estimands.size();
}

ExperimentConfig DeskPreset() { return ExperimentConfig(); }

ExperimentConfig FullScalePreset() {
  ExperimentConfig config;
  config.population_size = 10000000;
  config.reps = 200;
  config.nk_grid = {500, 20000, 50000};
  config.m_grid = {25, 50, 90};
  return config;
}

absl::StatusOr<ExperimentConfig> ParseExperimentConfig(const json& body) {
  if (!body.is_object()) {
    return absl::InvalidArgumentError("Experiment config must be a JSON object");
  }
  ExperimentConfig config;
  SIMVERIFY_RETURN_IF_ERROR(GetIfPresent(body, "N", config.population_size));
  SIMVERIFY_RETURN_IF_ERROR(GetIfPresent(body, "reps", config.reps));
  SIMVERIFY_RETURN_IF_ERROR(GetIfPresent(body, "nk_grid", config.nk_grid));
  SIMVERIFY_RETURN_IF_ERROR(GetIfPresent(body, "M_grid", config.m_grid));
  SIMVERIFY_RETURN_IF_ERROR(GetIfPresent(body, "alpha_grid", config.alpha_grid));
  SIMVERIFY_RETURN_IF_ERROR(GetIfPresent(body, "epsilon", config.epsilon));
  SIMVERIFY_RETURN_IF_ERROR(GetIfPresent(body, "base_seed", config.base_seed));
  SIMVERIFY_RETURN_IF_ERROR(GetIfPresent(body, "gibbs_iters", config.gibbs_iters));
  SIMVERIFY_RETURN_IF_ERROR(
      GetIfPresent(body, "gibbs_burnin", config.gibbs_burnin));
  SIMVERIFY_RETURN_IF_ERROR(GetIfPresent(body, "threads", config.threads));
  if (body.contains("interval_modes")) {
    SIMVERIFY_ASSIGN_OR_RETURN(
        config.interval_modes,
        ParseNameList<IntervalMode>(body["interval_modes"], "interval_modes",
                                    verification::ParseIntervalMode));
  }
  if (body.contains("synth_modes")) {
    SIMVERIFY_ASSIGN_OR_RETURN(
        config.synth_modes,
        ParseNameList<Provenance>(body["synth_modes"], "synth_modes",
                                  synthesis::ParseProvenance));
  }
  if (body.contains("estimands")) {
    SIMVERIFY_ASSIGN_OR_RETURN(
        config.estimands,
        ParseNameList<EstimandKind>(body["estimands"], "estimands",
                                    survey::ParseEstimand));
  }
  if (body.contains("population")) {
    const json& population = body["population"];
    if (!population.is_object()) {
      return absl::InvalidArgumentError("'population' must be an object");
    }
    survey::PopulationModel& model = config.population;
    SIMVERIFY_RETURN_IF_ERROR(GetIfPresent(population, "z_lower", model.z_lower));
    SIMVERIFY_RETURN_IF_ERROR(GetIfPresent(population, "z_upper", model.z_upper));
    SIMVERIFY_RETURN_IF_ERROR(
        GetIfPresent(population, "x_intercept", model.x_intercept));
    SIMVERIFY_RETURN_IF_ERROR(GetIfPresent(population, "x_slope", model.x_slope));
    SIMVERIFY_RETURN_IF_ERROR(
        GetIfPresent(population, "x_spread", model.x_spread));
    std::string spread_kind;
    SIMVERIFY_RETURN_IF_ERROR(
        GetIfPresent(population, "spread_kind", spread_kind));
    if (spread_kind == "sd") {
      model.spread_kind = survey::PopulationModel::SpreadKind::kStandardDeviation;
    } else if (spread_kind == "variance" || spread_kind.empty()) {
      model.spread_kind = survey::PopulationModel::SpreadKind::kVariance;
    } else {
      return absl::InvalidArgumentError(absl::StrCat(
          "spread_kind must be \"variance\" or \"sd\", got \"", spread_kind, "\""));
    }
  }
  SIMVERIFY_RETURN_IF_ERROR(config.Validate());
  return config;
}

json ToJson(const ExperimentConfig& config) {
  json modes = json::array(), synths = json::array(), estimands = json::array();
  for (IntervalMode mode : config.interval_modes) {
    modes.push_back(std::string(verification::IntervalModeName(mode)));
  }
  for (Provenance synth : config.synth_modes) {
    synths.push_back(std::string(synthesis::ProvenanceName(synth)));
  }
  for (EstimandKind kind : config.estimands) {
    estimands.push_back(std::string(survey::EstimandName(kind)));
  }
  const survey::PopulationModel& model = config.population;
  return json{
      {"N", config.population_size},
      {"reps", config.reps},
      {"nk_grid", config.nk_grid},
      {"M_grid", config.m_grid},
      {"alpha_grid", config.alpha_grid},
      {"epsilon", config.epsilon},
      {"interval_modes", modes},
      {"synth_modes", synths},
      {"estimands", estimands},
      {"base_seed", config.base_seed},
      {"gibbs_iters", config.gibbs_iters},
      {"gibbs_burnin", config.gibbs_burnin},
      {"threads", config.threads},
      {"population",
       {{"z_lower", model.z_lower},
        {"z_upper", model.z_upper},
        {"x_intercept", model.x_intercept},
        {"x_slope", model.x_slope},
        {"x_spread", model.x_spread},
        {"spread_kind",
         model.spread_kind == survey::PopulationModel::SpreadKind::kVariance
             ? "variance"
             : "sd"}}}};
}

absl::StatusOr<std::vector<ReplicateRow>> RunExperiment(
    const ExperimentConfig& config) {
  SIMVERIFY_RETURN_IF_ERROR(config.Validate());
  const uint64_t base = config.base_seed;
  SIMVERIFY_ASSIGN_OR_RETURN(
      survey::Population population,
      survey::GeneratePopulation(config.population_size,
                                 DeriveSeed(base, {kPopulationTag}),
                                 config.population));
  const double total = population.Total();
  const double mean = population.Mean();

  struct Design {
    int n_k;
    int m;
    const survey::PpsDesign* pps;
  };
  std::map<size_t, survey::PpsDesign> pps_by_size;
  std::vector<Design> designs;
  for (int n_k : config.nk_grid) {
    for (int m : config.m_grid) {
      const size_t n = static_cast<size_t>(n_k) * m;
      auto it = pps_by_size.find(n);
      if (it == pps_by_size.end()) {
        SIMVERIFY_ASSIGN_OR_RETURN(survey::PpsDesign pps,
                                   survey::PpsDesign::Create(population, n));
        it = pps_by_size.emplace(n, std::move(pps)).first;
      }
      designs.push_back({n_k, m, &it->second});
    }
  }

  const std::vector<CellCoordinates> cells = CellsPerDesign(config);
  const size_t reps = static_cast<size_t>(config.reps);
  std::vector<ReplicateRow> rows(designs.size() * cells.size() * reps);

  // Fills the rows of every cell of one (design, rep) pair.
  auto run_job = [&](size_t design_index, size_t rep) -> absl::Status {
    const Design& design = designs[design_index];
    const uint64_t n_k = static_cast<uint64_t>(design.n_k);
    const uint64_t m = static_cast<uint64_t>(design.m);
    const survey::SurveySample sample =
        design.pps->Draw(population, DeriveSeed(base, {kSampleTag, n_k, m, rep}));
    const size_t n0 = sample.size();

    std::map<Provenance, synthesis::SyntheticData> synthetic;
    for (Provenance synth : config.synth_modes) {
      const uint64_t seed = DeriveSeed(
          base, {kSynthesisTag, n_k, m, static_cast<uint64_t>(synth), rep});
      absl::StatusOr<synthesis::SyntheticData> data =
          synth == Provenance::kFaithfulSrs
              ? synthesis::SynthesizeSrs(population, n0, seed)
              : synthesis::SynthesizeBiased(sample, n0, seed);
      if (!data.ok()) return data.status();
      synthetic.emplace(synth, *std::move(data));
    }

    SIMVERIFY_ASSIGN_OR_RETURN(double ht_total,
                               survey::HorvitzThompsonTotal(sample));
    SIMVERIFY_ASSIGN_OR_RETURN(double ratio_mean, survey::RatioMean(sample, 1.0));

    for (size_t c = 0; c < cells.size(); ++c) {
      const CellCoordinates& cell = cells[c];
      const double alpha = config.alpha_grid[cell.alpha_index];
      const bool is_total = cell.estimand == EstimandKind::kTotal;
      SIMVERIFY_ASSIGN_OR_RETURN(
          survey::SrsEstimate analyst,
          survey::EstimateFromSrs(synthetic.at(cell.synth).x,
                                  config.population_size, cell.estimand));

      verification::ToleranceSpec trusted_spec;
      trusted_spec.kind = verification::ToleranceKind::kSdMultiple;
      trusted_spec.alpha = alpha;
      trusted_spec.mode = IntervalMode::kFixed;
      SIMVERIFY_ASSIGN_OR_RETURN(
          verification::Interval trusted_interval,
          verification::BuildInterval(analyst.estimate, analyst.sd,
                                      trusted_spec, design.m));
      const double tau_hat = is_total ? ht_total : ratio_mean;

      verification::ToleranceSpec spec = trusted_spec;
      spec.mode = cell.mode;
      const uint64_t verify_seed = DeriveSeed(
          base, {kVerifyTag, n_k, m, std::bit_cast<uint64_t>(alpha),
                 static_cast<uint64_t>(cell.mode),
                 static_cast<uint64_t>(cell.synth),
                 static_cast<uint64_t>(cell.estimand), rep});
      absl::StatusOr<verification::VerificationResult> verified =
          design.m == 1
              ? verification::internal::VerifyAllowingSinglePartition(
                    sample, analyst.estimate, analyst.sd, cell.estimand, spec,
                    design.m, config.epsilon, verify_seed)
              : verification::Verify(sample, analyst.estimate, analyst.sd,
                                     cell.estimand, spec, design.m,
                                     config.epsilon, verify_seed);
      if (!verified.ok()) return verified.status();
      SIMVERIFY_ASSIGN_OR_RETURN(
          posterior::PosteriorResult posterior,
          posterior::GibbsPosterior(verified->s_noisy, design.m, config.epsilon,
                                    config.gibbs_iters, config.gibbs_burnin,
                                    DeriveSeed(verify_seed, {kPosteriorStream})));

      const size_t cell_id = design_index * cells.size() + c;
      ReplicateRow& row = rows[cell_id * reps + rep];
      row.cell_id = static_cast<int>(cell_id);
      row.rep = static_cast<int>(rep);
      row.population_size = config.population_size;
      row.n_k = design.n_k;
      row.num_partitions = design.m;
      row.alpha = alpha;
      row.epsilon = config.epsilon;
      row.interval_mode = cell.mode;
      row.synth_mode = cell.synth;
      row.estimand = cell.estimand;
      row.trusted_tau_true = is_total ? total : mean;
      row.trusted_tau_hat = tau_hat;
      row.tau0_hat = analyst.estimate;
      row.sd0 = analyst.sd;
      row.trusted_q = trusted_interval.Contains(tau_hat) ? 1 : 0;
      row.s_noisy = verified->s_noisy;
      row.posterior_median = posterior.median;
    }
    return absl::OkStatus();
  };

  const size_t num_jobs = designs.size() * reps;
  size_t num_threads = config.threads > 0
                           ? static_cast<size_t>(config.threads)
                           : std::max(1u, std::thread::hardware_concurrency());
  num_threads = std::min(num_threads, num_jobs);

  std::atomic<size_t> next_job{0};
  std::mutex error_mu;
  absl::Status first_error;
  auto worker = [&] {
    for (size_t job = next_job++; job < num_jobs; job = next_job++) {
      absl::Status status = run_job(job / reps, job % reps);
      if (!status.ok()) {
        std::lock_guard<std::mutex> lock(error_mu);
        if (first_error.ok()) first_error = status;
        next_job = num_jobs;
      }
    }
  };
  std::vector<std::thread> pool;
  for (size_t t = 1; t < num_threads; ++t) pool.emplace_back(worker);
  worker();
  for (std::thread& thread : pool) thread.join();
  SIMVERIFY_RETURN_IF_ERROR(first_error);
  return rows;
}

void WriteReplicateCsv(std::span<const ReplicateRow> rows, std::ostream& out) {
  out << kReplicateHeader << "\n";
  for (const ReplicateRow& row : rows) {
    out << row.cell_id << ',' << row.rep << ',' << row.population_size << ','
        << row.n_k << ',' << row.num_partitions << ','
        << FormatDouble(row.alpha) << ',' << FormatDouble(row.epsilon) << ','
        << verification::IntervalModeName(row.interval_mode) << ','
        << synthesis::ProvenanceName(row.synth_mode) << ','
        << survey::EstimandName(row.estimand) << ','
        << FormatDouble(row.trusted_tau_true) << ','
        << FormatDouble(row.trusted_tau_hat) << ','
        << FormatDouble(row.tau0_hat) << ',' << FormatDouble(row.sd0) << ','
        << row.trusted_q << ',' << FormatDouble(row.s_noisy) << ','
        << FormatDouble(row.posterior_median) << "\n";
  }
}

absl::StatusOr<std::vector<ReplicateRow>> ReadReplicateCsv(std::istream& in) {
  SIMVERIFY_ASSIGN_OR_RETURN(CsvTable table, ReadCsv(in));
  const std::vector<std::string> columns = absl::StrSplit(kReplicateHeader, ',');
  std::vector<size_t> index;
  for (const std::string& column : columns) {
    SIMVERIFY_ASSIGN_OR_RETURN(size_t i, table.ColumnIndex(column));
    index.push_back(i);
  }
  auto integer = [](absl::string_view field) -> absl::StatusOr<int> {
    SIMVERIFY_ASSIGN_OR_RETURN(uint64_t value, ParseUint(field));
    if (value > static_cast<uint64_t>(std::numeric_limits<int>::max())) {
      return absl::InvalidArgumentError(absl::StrCat("Value too large: ", field));
    }
    return static_cast<int>(value);
  };
  std::vector<ReplicateRow> rows;
  for (const std::vector<std::string>& fields : table.rows) {
    auto field = [&](size_t column) -> const std::string& {
      return fields[index[column]];
    };
    ReplicateRow row;
    SIMVERIFY_ASSIGN_OR_RETURN(row.cell_id, integer(field(0)));
    SIMVERIFY_ASSIGN_OR_RETURN(row.rep, integer(field(1)));
    SIMVERIFY_ASSIGN_OR_RETURN(row.population_size, ParseUint(field(2)));
    SIMVERIFY_ASSIGN_OR_RETURN(row.n_k, integer(field(3)));
    SIMVERIFY_ASSIGN_OR_RETURN(row.num_partitions, integer(field(4)));
    SIMVERIFY_ASSIGN_OR_RETURN(row.alpha, ParseDouble(field(5)));
    SIMVERIFY_ASSIGN_OR_RETURN(row.epsilon, ParseDouble(field(6)));
    SIMVERIFY_ASSIGN_OR_RETURN(row.interval_mode,
                               verification::ParseIntervalMode(field(7)));
    SIMVERIFY_ASSIGN_OR_RETURN(row.synth_mode,
                               synthesis::ParseProvenance(field(8)));
    SIMVERIFY_ASSIGN_OR_RETURN(row.estimand, survey::ParseEstimand(field(9)));
    SIMVERIFY_ASSIGN_OR_RETURN(row.trusted_tau_true, ParseDouble(field(10)));
    SIMVERIFY_ASSIGN_OR_RETURN(row.trusted_tau_hat, ParseDouble(field(11)));
    SIMVERIFY_ASSIGN_OR_RETURN(row.tau0_hat, ParseDouble(field(12)));
    SIMVERIFY_ASSIGN_OR_RETURN(row.sd0, ParseDouble(field(13)));
    SIMVERIFY_ASSIGN_OR_RETURN(row.trusted_q, integer(field(14)));
    if (row.trusted_q > 1) {
      return absl::InvalidArgumentError("trusted_Q must be 0 or 1");
    }
    SIMVERIFY_ASSIGN_OR_RETURN(row.s_noisy, ParseDouble(field(15)));
    SIMVERIFY_ASSIGN_OR_RETURN(row.posterior_median, ParseDouble(field(16)));
    rows.push_back(row);
  }
  return rows;
}

absl::StatusOr<double> ComputeRFull(std::span<const int> q_values) {
  if (q_values.empty()) {
    return absl::InvalidArgumentError("r_full needs at least one replicate");
  }
  double sum = 0.0;
  for (int q : q_values) sum += q;
  return sum / static_cast<double>(q_values.size());
}

absl::StatusOr<std::vector<CellSummary>> Summarize(
    std::span<const ReplicateRow> rows) {
  std::map<int, std::vector<const ReplicateRow*>> by_cell;
  for (const ReplicateRow& row : rows) by_cell[row.cell_id].push_back(&row);

  std::vector<CellSummary> summaries;
  for (const auto& [cell_id, cell_rows] : by_cell) {
    const ReplicateRow& first = *cell_rows.front();
    CellSummary summary;
    summary.cell_id = cell_id;
    summary.population_size = first.population_size;
    summary.n_k = first.n_k;
    summary.num_partitions = first.num_partitions;
    summary.alpha = first.alpha;
    summary.epsilon = first.epsilon;
    summary.interval_mode = first.interval_mode;
    summary.synth_mode = first.synth_mode;
    summary.estimand = first.estimand;
    summary.reps = static_cast<int>(cell_rows.size());

    std::vector<int> q;
    std::vector<double> medians;
    for (const ReplicateRow* row : cell_rows) {
      q.push_back(row->trusted_q);
      medians.push_back(row->posterior_median);
    }
    SIMVERIFY_ASSIGN_OR_RETURN(summary.r_full, ComputeRFull(q));
    std::vector<double> sorted = medians;
    std::sort(sorted.begin(), sorted.end());
    summary.median_q25 = SortedQuantile(sorted, 0.25);
    summary.median_q50 = SortedMedian(sorted);
    summary.median_q75 = SortedQuantile(sorted, 0.75);
    std::vector<double> gaps;
    int below = 0;
    for (double median : medians) {
      gaps.push_back(std::abs(median - summary.r_full));
      if (median < 0.1) ++below;
    }
    summary.median_mean = StableSum(medians) / medians.size();
    summary.mean_abs_gap = StableSum(gaps) / gaps.size();
    summary.share_below_0_1 = static_cast<double>(below) / medians.size();
    summaries.push_back(summary);
  }
  return summaries;
}

void WriteSummaryCsv(std::span<const CellSummary> summaries, std::ostream& out) {
  out << kSummaryHeader << "\n";
  for (const CellSummary& s : summaries) {
    out << s.cell_id << ',' << s.population_size << ',' << s.n_k << ','
        << s.num_partitions << ',' << FormatDouble(s.alpha) << ','
        << FormatDouble(s.epsilon) << ','
        << verification::IntervalModeName(s.interval_mode) << ','
        << synthesis::ProvenanceName(s.synth_mode) << ','
        << survey::EstimandName(s.estimand) << ',' << s.reps << ','
        << FormatDouble(s.r_full) << ',' << FormatDouble(s.median_q25) << ','
        << FormatDouble(s.median_q50) << ',' << FormatDouble(s.median_q75)
        << ',' << FormatDouble(s.median_mean) << ','
        << FormatDouble(s.mean_abs_gap) << ','
        << FormatDouble(s.share_below_0_1) << "\n";
  }
}

}  // namespace simverify::harness
