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


// Acceptance checks. Prints one PASS/FAIL line per criterion with the
// measured values, then a tally. Exit status is nonzero only if a check
// could not be evaluated at all.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "absl/strings/str_format.h"
#include "httplib.h"
#include "json.hpp"
#include "simverify/common/rng.h"
#include "simverify/harness/experiment.h"
#include "simverify/posterior/posterior.h"
#include "simverify/server/http_server.h"
#include "simverify/server/service.h"
#include "simverify/survey/estimators.h"
#include "simverify/survey/population.h"
#include "simverify/survey/pps.h"
#include "simverify/verification/laplace_mechanism.h"
#include "simverify/verification/partition.h"
#include "simverify/verification/verify.h"
#include "stat_test_util.h"

namespace simverify {
namespace {

using harness::CellSummary;
using survey::EstimandKind;
using synthesis::Provenance;
using verification::IntervalMode;

// Pinned tolerances.
constexpr double kHtRelativeError = 0.01;
constexpr double kUnweightedRatioLo = 1.14;
constexpr double kUnweightedRatioHi = 1.20;
constexpr double kSurveyRuntimeSeconds = 30.0;
constexpr double kGibbsOracleGap = 0.01;
constexpr double kGibbsGridRuntimeSeconds = 60.0;
constexpr double kAnalyticLimitTolerance = 0.005;
constexpr double kKsSignificance = 0.001;
constexpr double kCalibrationMaxGap = 0.15;
constexpr double kFixedRFullFloor = 0.4;
constexpr double kFixedMargin = 0.2;
constexpr double kDetectionThreshold = 0.1;
constexpr double kDetectionMinShare = 0.9;
constexpr double kDeskRuntimeSeconds = 600.0;

int g_passed = 0;
int g_failed = 0;

void Report(const std::string& name, bool pass, const std::string& detail) {
  std::printf("%s %s: %s\n", pass ? "PASS" : "FAIL", name.c_str(),
              detail.c_str());
  std::fflush(stdout);
  (pass ? g_passed : g_failed)++;
}

double SecondsSince(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
      .count();
}

void CheckSurveyEstimators() {
  constexpr size_t kN = 100000;
  constexpr size_t kSampleSize = 2000;
  constexpr int kReps = 500;
  const auto start = std::chrono::steady_clock::now();
  auto population = survey::GeneratePopulation(kN, 101).value();
  auto design = survey::PpsDesign::Create(population, kSampleSize).value();
  const double tau = population.Total();
  double ht_sum = 0.0, unweighted_sum = 0.0;
  for (uint64_t rep = 0; rep < kReps; ++rep) {
    auto sample = design.Draw(population, DeriveSeed(102, {rep}));
    ht_sum += survey::HorvitzThompsonTotal(sample).value();
    double x_sum = 0.0;
    for (const auto& record : sample.records()) x_sum += record.x;
    unweighted_sum += kN * x_sum / sample.size();
  }
  const double seconds = SecondsSince(start);
  const double relative = std::abs(ht_sum / kReps - tau) / tau;
  Report("HT unbiasedness",
         relative < kHtRelativeError && seconds < kSurveyRuntimeSeconds,
         absl::StrFormat("|mean(tau_hat)-tau|/tau = %.5f (< %.2f), tau = %.1f, "
                         "%d reps in %.1f s",
                         relative, kHtRelativeError, tau, kReps, seconds));
  const double ratio = unweighted_sum / kReps / tau;
  Report("Unweighted-bias ratio",
         ratio >= kUnweightedRatioLo && ratio <= kUnweightedRatioHi &&
             seconds < kSurveyRuntimeSeconds,
         absl::StrFormat("mean(N*xbar)/tau = %.4f (in [%.2f, %.2f]; analytic "
                         "%.4f), %.1f s",
                         ratio, kUnweightedRatioLo, kUnweightedRatioHi,
                         (20.0 / 3 + 5) / 10, seconds));
}

void CheckGibbsAgainstOracle() {
  const auto start = std::chrono::steady_clock::now();
  double worst = 0.0;
  std::string worst_at;
  uint64_t seed = 500;
  for (int m : {10, 25, 50}) {
    for (double epsilon : {0.5, 1.0, 5.0}) {
      for (double s_noisy : {-1.0, 0.0, m / 2.0, 1.0 * m, m + 1.0}) {
        auto gibbs = posterior::GibbsPosterior(s_noisy, m, epsilon, 20000,
                                               posterior::kDefaultBurnin, ++seed)
                         .value();
        const double oracle =
            posterior::OraclePosteriorMedian(s_noisy, m, epsilon, 4000).value();
        const double gap = std::abs(gibbs.median - oracle);
        if (gap > worst) {
          worst = gap;
          worst_at = absl::StrFormat("M=%d eps=%g s=%g", m, epsilon, s_noisy);
        }
      }
    }
  }
  const double seconds = SecondsSince(start);
  Report("Gibbs vs oracle",
         worst < kGibbsOracleGap && seconds < kGibbsGridRuntimeSeconds,
         absl::StrFormat("max |gibbs - oracle| = %.4f at %s (< %.2f) over 45 "
                         "points in %.1f s",
                         worst, worst_at, kGibbsOracleGap, seconds));
}

void CheckAnalyticLimit() {
  auto result = posterior::GibbsPosterior(25, 25, 1e9, posterior::kDefaultIters,
                                          posterior::kDefaultBurnin, 601)
                    .value();
  const double expected = std::pow(0.5, 1.0 / 26);
  Report("Analytic limit",
         std::abs(result.median - expected) <= kAnalyticLimitTolerance,
         absl::StrFormat("median = %.4f, 0.5^(1/26) = %.4f (+- %.3f)",
                         result.median, expected, kAnalyticLimitTolerance));
}

// Every record of every sample is replaced, in turn, by every other
// record's values and by a set of extreme records, with the partition
// assignment held fixed. Several intervals per sample are tried.
void CheckSensitivity() {
  int64_t swaps = 0;
  int worst = 0;
  for (size_t n : {6, 12, 20, 30}) {
    for (int m = 2; m <= 6; ++m) {
      if (static_cast<size_t>(m) > n) continue;
      Rng rng(DeriveSeed(700, {n, static_cast<uint64_t>(m)}));
      std::vector<survey::SampleRecord> records;
      for (size_t i = 0; i < n; ++i) {
        records.push_back(survey::SampleRecord::Make(
            i, 20 * rng.UniformOpen() - 5, 0.01 + 0.99 * rng.UniformOpen()));
      }
      auto sample = survey::SurveySample::Create(records, 10000).value();
      auto scheme =
          verification::Partition(sample, m, DeriveSeed(701, {n})).value();
      std::vector<std::pair<double, double>> candidates = {
          {0.0, 1.0}, {1e9, 1e-6}, {-1e9, 1e-6}, {1e-9, 0.5}};
      for (const auto& record : records) candidates.push_back({record.x, record.pi});

      for (EstimandKind kind : {EstimandKind::kTotal, EstimandKind::kMean}) {
        auto base = verification::PartitionEstimates(sample, scheme, kind).value();
        std::vector<double> sorted = base;
        std::sort(sorted.begin(), sorted.end());
        std::vector<verification::Interval> intervals = {
            {sorted.front(), sorted.back()},
            {sorted.front(), sorted[m / 2]},
            {sorted[m / 2], sorted[m / 2]},
            {-1e300, 1e300}};
        for (const auto& interval : intervals) {
          const int base_count = verification::CountWithin(base, interval);
          for (size_t i = 0; i < n; ++i) {
            for (const auto& [x, pi] : candidates) {
              std::vector<survey::SampleRecord> neighbor = records;
              neighbor[i] = survey::SampleRecord::Make(i, x, pi);
              auto neighbor_sample =
                  survey::SurveySample::Create(neighbor, 10000).value();
              auto estimates = verification::PartitionEstimates(
                                   neighbor_sample, scheme, kind)
                                   .value();
              worst = std::max(
                  worst,
                  std::abs(verification::CountWithin(estimates, interval) -
                           base_count));
              ++swaps;
            }
          }
        }
      }
    }
  }
  Report("Sensitivity", worst <= 1,
         absl::StrFormat("max |delta S| = %d over %d swaps (n <= 30, M = 2..6)",
                         worst, swaps));
}

void CheckMechanism() {
  bool pass = true;
  std::string detail;
  for (double epsilon : {0.5, 1.0, 5.0}) {
    Rng rng(DeriveSeed(800, {static_cast<uint64_t>(epsilon * 10)}));
    std::vector<double> noise;
    for (int i = 0; i < 10000; ++i) {
      noise.push_back(
          verification::PrivatizeCount(0, epsilon, rng.UniformOpen()).value());
    }
    const double d = testing::KsStatistic(noise, [&](double x) {
      return testing::LaplaceCdf(x, 1.0 / epsilon);
    });
    const double p = testing::KsPValue(d, noise.size());
    pass = pass && p > kKsSignificance;
    detail += absl::StrFormat("eps=%g: D=%.4f p=%.3f; ", epsilon, d, p);
  }
  Report("Mechanism distribution", pass,
         detail + absl::StrFormat("(p > %g)", kKsSignificance));
}

void CheckDeskRun() {
  harness::ExperimentConfig config = harness::DeskPreset();
  config.m_grid = {25};
  config.base_seed = 2026;
  const auto start = std::chrono::steady_clock::now();
  auto rows = harness::RunExperiment(config);
  const double seconds = SecondsSince(start);
  if (!rows.ok()) {
    Report("Faithful calibration", false, std::string(rows.status().message()));
    Report("Fixed-interval shortfall", false, "desk run failed");
    Report("Biased-synthesis detection", false, "desk run failed");
    return;
  }
  auto summaries = harness::Summarize(*rows).value();
  auto label = [](const CellSummary& s) {
    return absl::StrFormat("%s n_k=%d a=%g", survey::EstimandName(s.estimand),
                           s.n_k, s.alpha);
  };

  double worst_gap = 0.0;
  std::string worst_gap_at;
  bool fixed_ok = true;
  int fixed_cells = 0;
  std::string fixed_detail;
  bool detection_ok = true;
  double worst_share = 1.0;
  std::string detection_failures;
  for (const CellSummary& s : summaries) {
    const bool faithful = s.synth_mode == Provenance::kFaithfulSrs;
    if (faithful && s.interval_mode == IntervalMode::kAdjusted) {
      if (s.mean_abs_gap > worst_gap) {
        worst_gap = s.mean_abs_gap;
        worst_gap_at = label(s);
      }
    }
    if (faithful && s.interval_mode == IntervalMode::kFixed &&
        s.r_full > kFixedRFullFloor) {
      ++fixed_cells;
      const bool ok = s.median_mean < s.r_full - kFixedMargin;
      fixed_ok = fixed_ok && ok;
      if (!ok) {
        fixed_detail += absl::StrFormat(" [%s: mean %.3f vs r_full %.2f]",
                                       label(s), s.median_mean, s.r_full);
      }
    }
    if (!faithful && s.interval_mode == IntervalMode::kAdjusted) {
      worst_share = std::min(worst_share, s.share_below_0_1);
      if (s.share_below_0_1 < kDetectionMinShare) {
        detection_ok = false;
        detection_failures += absl::StrFormat(" [%s: %.2f]", label(s),
                                          s.share_below_0_1);
      }
    }
  }
  const bool in_time = seconds < kDeskRuntimeSeconds;
  Report("Faithful calibration", worst_gap <= kCalibrationMaxGap && in_time,
         absl::StrFormat("max per-cell mean |median - r_full| = %.3f at %s "
                         "(<= %.2f), desk run %d rows in %.1f s",
                         worst_gap, worst_gap_at, kCalibrationMaxGap, rows->size(),
                         seconds));
  Report("Fixed-interval shortfall", fixed_ok && fixed_cells > 0 && in_time,
         absl::StrFormat("%d fixed-interval cells with r_full > %.1f, all with "
                         "mean median < r_full - %.1f%s",
                         fixed_cells, kFixedRFullFloor, kFixedMargin,
                         fixed_ok ? "" : " except" + fixed_detail));
  Report("Biased-synthesis detection", detection_ok && in_time,
         absl::StrFormat("lowest share of medians < %.1f = %.2f (need >= %.2f "
                         "in every biased adjusted cell)%s",
                         kDetectionThreshold, worst_share, kDetectionMinShare,
                         detection_ok ? "" : "; short cells:" + detection_failures));
}

survey::SurveySample ServerSample() {
  auto population = survey::GeneratePopulation(20000, 900).value();
  return survey::DrawPpsSample(population, 500, 901).value();
}

server::AnalysisQuery ServerQuery(uint64_t seed) {
  server::AnalysisQuery query;
  query.estimand = EstimandKind::kTotal;
  query.estimate0 = 200000;
  query.sd0 = 2000;
  query.tolerance.alpha = 3;
  query.num_partitions = 25;
  query.epsilon = 1.0;
  query.seed = seed;
  return query;
}

void CheckBudgetSafety() {
  server::ServiceConfig config;
  config.noise_secret = 902;
  auto service = server::VerificationService::Open(config).value();
  server::HttpServer http(service.get());
  const int port = http.Bind("127.0.0.1", 0).value();
  std::thread serving([&] { (void)http.Serve(); });
  http.WaitUntilReady();

  httplib::Client client("127.0.0.1", port);
  auto created = client.Post(
      "/datasets", server::RegistrationJson(ServerSample(), 10.0).dump(),
      "application/json");
  const std::string id =
      nlohmann::json::parse(created->body)["dataset_id"].get<std::string>();

  const std::set<std::string> allowed = {"query_id", "s_noisy", "posterior",
                                         "epsilon_spent", "epsilon_remaining"};
  const std::set<std::string> allowed_posterior = {
      "median", "q05", "q25", "q75", "q95", "iters", "burnin"};
  std::atomic<int> accepted{0}, rejected{0}, other{0}, leaky{0};
  std::vector<std::thread> clients;
  for (int i = 0; i < 64; ++i) {
    clients.emplace_back([&, i] {
      httplib::Client c("127.0.0.1", port);
      auto res = c.Post("/datasets/" + id + "/verify",
                        server::ToJson(ServerQuery(i)).dump(),
                        "application/json");
      if (!res) {
        ++other;
        return;
      }
      if (res->status == 200) {
        ++accepted;
        auto body = nlohmann::json::parse(res->body);
        for (const auto& [key, value] : body.items()) {
          if (!allowed.count(key)) ++leaky;
        }
        for (const auto& [key, value] : body["posterior"].items()) {
          if (!allowed_posterior.count(key)) ++leaky;
        }
      } else if (res->status == 402) {
        ++rejected;
      } else {
        ++other;
      }
    });
  }
  for (std::thread& t : clients) t.join();
  const double spent = service->GetBudgetStatus(id)->spent;
  http.Stop();
  serving.join();
  Report("Budget safety",
         accepted == 10 && rejected == 54 && other == 0 && spent == 10.0 &&
             leaky == 0,
         absl::StrFormat("%d accepted, %d BUDGET_EXCEEDED, %d other; spent = "
                         "%g; %d unexpected response fields",
                         accepted.load(), rejected.load(), other.load(), spent,
                         leaky.load()));
}

void CheckDeterminism() {
  harness::ExperimentConfig config;
  config.population_size = 20000;
  config.reps = 4;
  config.nk_grid = {40};
  config.m_grid = {25};
  config.base_seed = 77;
  config.gibbs_iters = 4000;
  config.gibbs_burnin = 400;
  auto csv = [&](int threads) {
    config.threads = threads;
    std::ostringstream out;
    harness::WriteReplicateCsv(harness::RunExperiment(config).value(), out);
    return out.str();
  };
  const std::string first = csv(1);
  const bool harness_same = first == csv(1) && first == csv(4);

  auto sample = ServerSample();
  verification::ToleranceSpec spec;
  spec.alpha = 3;
  auto verify = [&] {
    return verification::ToJson(
               verification::Verify(sample, 200000, 2000, EstimandKind::kTotal,
                                    spec, 25, 1.0, 903)
                   .value())
        .dump();
  };
  const bool verify_same = verify() == verify();

  server::ServiceConfig service_config;
  service_config.noise_secret = 904;
  auto service = server::VerificationService::Open(service_config).value();
  auto a = service->RegisterDataset(sample, 5.0).value();
  auto b = service->RegisterDataset(sample, 5.0).value();
  const bool server_same =
      server::ToJson(service->SubmitQuery(a, ServerQuery(5)).value()).dump() ==
      server::ToJson(service->SubmitQuery(b, ServerQuery(5)).value()).dump();

  Report("Determinism", harness_same && verify_same && server_same,
         absl::StrFormat("harness CSV identical across runs and thread counts: "
                         "%s; verify: %s; server replay: %s (%d CSV bytes)",
                         harness_same ? "yes" : "no",
                         verify_same ? "yes" : "no",
                         server_same ? "yes" : "no", first.size()));
}

}  // namespace
}  // namespace simverify

int main() {
  simverify::CheckSurveyEstimators();
  simverify::CheckGibbsAgainstOracle();
  simverify::CheckAnalyticLimit();
  simverify::CheckSensitivity();
  simverify::CheckMechanism();
  simverify::CheckDeskRun();
  simverify::CheckBudgetSafety();
  simverify::CheckDeterminism();
  std::printf("%d passed, %d failed\n", simverify::g_passed,
              simverify::g_failed);
  return 0;
}
