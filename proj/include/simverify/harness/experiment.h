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


#ifndef SIMVERIFY_HARNESS_EXPERIMENT_H_
#define SIMVERIFY_HARNESS_EXPERIMENT_H_

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "json.hpp"
#include "simverify/posterior/posterior.h"
#include "simverify/survey/population.h"
#include "simverify/survey/survey_sample.h"
#include "simverify/synthesis/synthesis.h"
#include "simverify/verification/tolerance.h"

namespace simverify::harness {

// A repeated-sampling experiment. Every combination of the grids below is a
// cell; each cell is replicated `reps` times.
struct ExperimentConfig {
  uint64_t population_size = 200000;  // "N" in JSON
  int reps = 50;
  std::vector<int> nk_grid = {100, 500};
  std::vector<int> m_grid = {25, 50};  // "M_grid" in JSON
  std::vector<double> alpha_grid = {1, 3, 5};
  double epsilon = 1.0;
  std::vector<verification::IntervalMode> interval_modes = {
      verification::IntervalMode::kFixed, verification::IntervalMode::kAdjusted};
  std::vector<synthesis::Provenance> synth_modes = {
      synthesis::Provenance::kFaithfulSrs, synthesis::Provenance::kBiasedNormal};
  std::vector<survey::EstimandKind> estimands = {survey::EstimandKind::kTotal,
                                                 survey::EstimandKind::kMean};
  uint64_t base_seed = 1;
  int gibbs_iters = posterior::kDefaultIters;
  int gibbs_burnin = posterior::kDefaultBurnin;
  // Worker threads; 0 means one per hardware thread.
  int threads = 0;
  survey::PopulationModel population;

  // reps >= 1, nonempty positive grids, n_k * M <= N and >= 2 for every
  // grid pair, epsilon > 0, iters > burnin >= 0.
  absl::Status Validate() const;

  // Number of cells; cell ids run over [0, NumCells()).
  size_t NumCells() const;
};

// N = 200000, 50 reps, n_k in {100, 500}, M in {25, 50}, alpha in {1, 3, 5},
// epsilon = 1, every mode, synthesizer and estimand.
ExperimentConfig DeskPreset();
// N = 10^7, 200 reps, n_k in {500, 20000, 50000}, M in {25, 50, 90}.
ExperimentConfig FullScalePreset();

// JSON with the field names listed in the CSV header: N, reps, nk_grid,
// M_grid, alpha_grid, epsilon, interval_modes, synth_modes, estimands,
// base_seed, plus optional gibbs_iters, gibbs_burnin, threads and
// population {z_lower, z_upper, x_intercept, x_slope, x_spread,
// spread_kind: "variance" | "sd"}. Omitted fields keep the desk defaults.
absl::StatusOr<ExperimentConfig> ParseExperimentConfig(const nlohmann::json& json);
nlohmann::json ToJson(const ExperimentConfig& config);

// One replicate of one cell. Columns prefixed trusted_ hold confidential
// intermediates that only a research harness can see.
struct ReplicateRow {
  int cell_id = 0;
  int rep = 0;
  uint64_t population_size = 0;
  int n_k = 0;
  int num_partitions = 0;
  double alpha = 0.0;
  double epsilon = 0.0;
  verification::IntervalMode interval_mode = verification::IntervalMode::kFixed;
  synthesis::Provenance synth_mode = synthesis::Provenance::kFaithfulSrs;
  survey::EstimandKind estimand = survey::EstimandKind::kTotal;
  double trusted_tau_true = 0.0;
  double trusted_tau_hat = 0.0;
  double tau0_hat = 0.0;
  double sd0 = 0.0;
  int trusted_q = 0;
  double s_noisy = 0.0;
  double posterior_median = 0.0;

  friend bool operator==(const ReplicateRow&, const ReplicateRow&) = default;
};

inline constexpr char kReplicateHeader[] =
    "cell_id,rep,N,n_k,M,alpha,epsilon,interval_mode,synth_mode,estimand,"
    "trusted_tau_true,trusted_tau_hat,tau0_hat,sd0,trusted_Q,s_noisy,"
    "posterior_median";

// Seed tags. With base seed b, replicate r and grid values (n_k, M):
//   population          DeriveSeed(b, {kPopulationTag})
//   PPS sample          DeriveSeed(b, {kSampleTag, n_k, M, r})
//   synthetic data      DeriveSeed(b, {kSynthesisTag, n_k, M, synth, r})
//   verify + posterior  DeriveSeed(b, {kVerifyTag, n_k, M, bits(alpha),
//                                      mode, synth, estimand, r})
// Keys are grid values rather than positions, so a run over a sub-grid
// reproduces the matching rows of the full run. The posterior uses
// sub-stream 2 of the verify seed.
inline constexpr uint64_t kPopulationTag = 1;
inline constexpr uint64_t kSampleTag = 2;
inline constexpr uint64_t kSynthesisTag = 3;
inline constexpr uint64_t kVerifyTag = 4;
inline constexpr uint64_t kPosteriorStream = 2;

// Runs the whole grid. One population is generated; for each (n_k, M, rep)
// one PPS sample of n = n_k * M is drawn and one synthetic dataset of size
// n0 = n per synthesizer is reused across alpha, interval mode and
// estimand. Q compares the full-sample estimate with the fixed interval
// tau0_hat +- alpha * sd0. Rows come back ordered by (cell_id, rep) and are
// identical for any thread count. M = 1 is accepted as a diagnostic.
absl::StatusOr<std::vector<ReplicateRow>> RunExperiment(
    const ExperimentConfig& config);

void WriteReplicateCsv(std::span<const ReplicateRow> rows, std::ostream& out);
absl::StatusOr<std::vector<ReplicateRow>> ReadReplicateCsv(std::istream& in);

// Mean of 0/1 indicators. Rejects an empty list.
absl::StatusOr<double> ComputeRFull(std::span<const int> q_values);

struct CellSummary {
  int cell_id = 0;
  uint64_t population_size = 0;
  int n_k = 0;
  int num_partitions = 0;
  double alpha = 0.0;
  double epsilon = 0.0;
  verification::IntervalMode interval_mode = verification::IntervalMode::kFixed;
  synthesis::Provenance synth_mode = synthesis::Provenance::kFaithfulSrs;
  survey::EstimandKind estimand = survey::EstimandKind::kTotal;
  int reps = 0;
  double r_full = 0.0;
  // Quartiles and mean of the replicate posterior medians.
  double median_q25 = 0.0;
  double median_q50 = 0.0;
  double median_q75 = 0.0;
  double median_mean = 0.0;
  // Mean over reps of |posterior_median - r_full|.
  double mean_abs_gap = 0.0;
  // Share of reps with posterior_median < 0.1.
  double share_below_0_1 = 0.0;
};

inline constexpr char kSummaryHeader[] =
    "cell_id,N,n_k,M,alpha,epsilon,interval_mode,synth_mode,estimand,reps,"
    "r_full,median_q25,median_q50,median_q75,median_mean,mean_abs_gap,"
    "share_below_0_1";

// One summary per cell, ordered by cell_id.
absl::StatusOr<std::vector<CellSummary>> Summarize(
    std::span<const ReplicateRow> rows);
void WriteSummaryCsv(std::span<const CellSummary> summaries, std::ostream& out);

}  // namespace simverify::harness

#endif  // SIMVERIFY_HARNESS_EXPERIMENT_H_
