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


#include "simverify/posterior/posterior.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "simverify/common/numeric.h"

namespace simverify::posterior {
namespace {

absl::Status ValidateModel(double s_noisy, int m, double epsilon) {
  if (m < 1) {
    return absl::InvalidArgumentError(
        absl::StrCat("M must be at least 1, got ", m));
  }
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
    return absl::InvalidArgumentError(
        absl::StrCat("epsilon must be positive and finite, got ", epsilon));
  }
  if (!std::isfinite(s_noisy)) {
    return absl::InvalidArgumentError("s_noisy must be finite");
  }
  return absl::OkStatus();
}

double BetaDraw(double a, double b, Rng& rng) {
  std::gamma_distribution<double> ga(a, 1.0);
  std::gamma_distribution<double> gb(b, 1.0);
  while (true) {
    const double x = ga(rng.engine());
    const double y = gb(rng.engine());
    const double r = x / (x + y);
    if (r > 0.0 && r < 1.0) return r;
  }
}

// The parts of the S | r log weight that do not depend on r, cached once per
// chain: -epsilon |s_noisy - S| - lgamma(S + 1) - lgamma(M - S + 1).
class SConditional {
 public:
  SConditional(double s_noisy, int m, double epsilon) : base_(m + 1) {
    for (int s = 0; s <= m; ++s) {
      base_[s] = -epsilon * std::abs(s_noisy - s) - std::lgamma(s + 1.0) -
                 std::lgamma(m - s + 1.0);
    }
    weights_.resize(m + 1);
  }

  // Fills weights_ with the unnormalized probabilities scaled so the largest
  // is 1, and returns their sum.
  double Evaluate(double r) {
    const int m = static_cast<int>(base_.size()) - 1;
    const double log_r = std::log(r);
    const double log_1mr = std::log1p(-r);
    double max_log = -std::numeric_limits<double>::infinity();
    for (int s = 0; s <= m; ++s) {
      weights_[s] = base_[s] + s * log_r + (m - s) * log_1mr;
      max_log = std::max(max_log, weights_[s]);
    }
    double total = 0.0;
    for (double& w : weights_) {
      w = std::exp(w - max_log);
      total += w;
    }
    return total;
  }

  int Sample(double r, Rng& rng) {
    const double total = Evaluate(r);
    const double target = rng.UniformOpen() * total;
    double cumulative = 0.0;
    for (size_t s = 0; s < weights_.size(); ++s) {
      cumulative += weights_[s];
      if (target < cumulative) return static_cast<int>(s);
    }
    // Rounding left target at the very top; take the last nonzero weight.
    for (size_t s = weights_.size(); s-- > 0;) {
      if (weights_[s] > 0.0) return static_cast<int>(s);
    }
    return 0;
  }

  const std::vector<double>& weights() const { return weights_; }

 private:
  std::vector<double> base_;
  std::vector<double> weights_;
};

}  // namespace

nlohmann::json ToJson(const PosteriorResult& result, bool include_draws) {
  nlohmann::json json{{"median", result.median}, {"q05", result.q05},
                      {"q25", result.q25},       {"q75", result.q75},
                      {"q95", result.q95},       {"iters", result.iters},
                      {"burnin", result.burnin}};
  if (include_draws) json["draws"] = result.draws;
  return json;
}

absl::StatusOr<double> SampleRGivenS(int s, int m, Rng& rng) {
  if (m < 1 || s < 0 || s > m) {
    return absl::InvalidArgumentError(
        absl::StrCat("S must lie in [0, M] with M >= 1, got S=", s, ", M=", m));
  }
  return BetaDraw(s + 1.0, m - s + 1.0, rng);
}

absl::StatusOr<std::vector<double>> SGivenRProbabilities(double r,
                                                         double s_noisy, int m,
                                                         double epsilon) {
  if (absl::Status status = ValidateModel(s_noisy, m, epsilon); !status.ok()) {
    return status;
  }
  if (!(r > 0.0 && r < 1.0)) {
    return absl::InvalidArgumentError(
        absl::StrCat("r must lie in (0, 1), got ", r));
  }
  SConditional conditional(s_noisy, m, epsilon);
  const double total = conditional.Evaluate(r);
  std::vector<double> probabilities = conditional.weights();
  for (double& p : probabilities) p /= total;
  return probabilities;
}

absl::StatusOr<int> SampleSGivenR(double r, double s_noisy, int m,
                                  double epsilon, Rng& rng) {
  if (absl::Status status = ValidateModel(s_noisy, m, epsilon); !status.ok()) {
    return status;
  }
  if (!(r > 0.0 && r < 1.0)) {
    return absl::InvalidArgumentError(
        absl::StrCat("r must lie in (0, 1), got ", r));
  }
  SConditional conditional(s_noisy, m, epsilon);
  return conditional.Sample(r, rng);
}

absl::StatusOr<PosteriorResult> GibbsPosterior(double s_noisy, int m,
                                               double epsilon, int iters,
                                               int burnin, uint64_t seed) {
  if (absl::Status status = ValidateModel(s_noisy, m, epsilon); !status.ok()) {
    return status;
  }
  if (burnin < 0 || iters <= burnin) {
    return absl::InvalidArgumentError(absl::StrCat(
        "Need iters > burnin >= 0, got iters=", iters, ", burnin=", burnin));
  }
  Rng rng(seed);
  SConditional conditional(s_noisy, m, epsilon);
  int s = static_cast<int>(
      std::clamp(std::round(s_noisy), 0.0, static_cast<double>(m)));

  PosteriorResult result;
  result.iters = iters;
  result.burnin = burnin;
  result.draws.reserve(iters - burnin);
  for (int t = 0; t < iters; ++t) {
    const double r = BetaDraw(s + 1.0, m - s + 1.0, rng);
    s = conditional.Sample(r, rng);
    if (t >= burnin) result.draws.push_back(r);
  }

  std::vector<double> sorted = result.draws;
  std::sort(sorted.begin(), sorted.end());
  result.median = SortedMedian(sorted);
  result.q05 = SortedQuantile(sorted, 0.05);
  result.q25 = SortedQuantile(sorted, 0.25);
  result.q75 = SortedQuantile(sorted, 0.75);
  result.q95 = SortedQuantile(sorted, 0.95);
  return result;
}

absl::StatusOr<double> OraclePosteriorMedian(double s_noisy, int m,
                                             double epsilon, int grid_size) {
  if (absl::Status status = ValidateModel(s_noisy, m, epsilon); !status.ok()) {
    return status;
  }
  if (grid_size < 1000) {
    return absl::InvalidArgumentError(
        absl::StrCat("grid_size must be at least 1000, got ", grid_size));
  }
  // log of exp(-epsilon |s_noisy - S|) * C(M, S), shifted by its maximum.
  std::vector<double> log_prior(m + 1);
  for (int s = 0; s <= m; ++s) {
    log_prior[s] = -epsilon * std::abs(s_noisy - s) + std::lgamma(m + 1.0) -
                   std::lgamma(s + 1.0) - std::lgamma(m - s + 1.0);
  }
  const double shift = *std::max_element(log_prior.begin(), log_prior.end());
  for (double& v : log_prior) v -= shift;

  // Marginal density on the grid r_i = i / grid_size. The endpoint terms
  // use the convention 0^0 = 1.
  std::vector<double> density(grid_size + 1);
  for (int i = 0; i <= grid_size; ++i) {
    const double r = static_cast<double>(i) / grid_size;
    double value = 0.0;
    for (int s = 0; s <= m; ++s) {
      double log_binomial_kernel = 0.0;
      if (s > 0) log_binomial_kernel += s * std::log(r);
      if (m - s > 0) log_binomial_kernel += (m - s) * std::log1p(-r);
      value += std::exp(log_prior[s] + log_binomial_kernel);
    }
    density[i] = value;
  }

  const double h = 1.0 / grid_size;
  std::vector<double> cdf(grid_size + 1, 0.0);
  for (int i = 1; i <= grid_size; ++i) {
    cdf[i] = cdf[i - 1] + 0.5 * h * (density[i - 1] + density[i]);
  }
  const double half = 0.5 * cdf.back();
  const auto upper = std::lower_bound(cdf.begin(), cdf.end(), half);
  const size_t i = static_cast<size_t>(upper - cdf.begin());
  if (i == 0) return 0.0;
  const double fraction = (half - cdf[i - 1]) / (cdf[i] - cdf[i - 1]);
  return (static_cast<double>(i - 1) + fraction) * h;
}

}  // namespace simverify::posterior
