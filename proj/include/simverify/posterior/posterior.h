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


#ifndef SIMVERIFY_POSTERIOR_POSTERIOR_H_
#define SIMVERIFY_POSTERIOR_POSTERIOR_H_

#include <cstdint>
#include <vector>

#include "absl/status/statusor.h"
#include "json.hpp"
#include "simverify/common/rng.h"

namespace simverify::posterior {

// Hierarchical model for a released count s_noisy:
//   s_noisy | S ~ Laplace(S, 1/epsilon)
//   S | r       ~ Binomial(M, r)
//   r           ~ Beta(1, 1)
// where r is the probability that a random partition estimate lands inside
// the tolerance interval.

inline constexpr int kDefaultIters = 20000;
inline constexpr int kDefaultBurnin = 2000;

struct PosteriorResult {
  // Retained draws of r in chain order, all in (0, 1).
  std::vector<double> draws;
  double median = 0.0;
  double q05 = 0.0;
  double q25 = 0.0;
  double q75 = 0.0;
  double q95 = 0.0;
  int iters = 0;
  int burnin = 0;
};

// {"median", "q05", "q25", "q75", "q95", "iters", "burnin"}, plus "draws"
// when include_draws is set.
nlohmann::json ToJson(const PosteriorResult& result, bool include_draws = false);

// One draw from the full conditional r | S, which is Beta(S + 1, M - S + 1).
absl::StatusOr<double> SampleRGivenS(int s, int m, Rng& rng);

// Normalized full conditional of S | r, s_noisy over {0, ..., M}. The
// weight of S is exp(-epsilon |s_noisy - S|) r^S (1 - r)^(M - S) /
// (Gamma(S + 1) Gamma(M - S + 1)), normalized in log space.
absl::StatusOr<std::vector<double>> SGivenRProbabilities(double r,
                                                         double s_noisy, int m,
                                                         double epsilon);

// One draw from SGivenRProbabilities() by inverse CDF.
absl::StatusOr<int> SampleSGivenR(double r, double s_noisy, int m,
                                  double epsilon, Rng& rng);

// Two-block Gibbs sampler over (S, r) started at S = clamp(round(s_noisy),
// 0, M). The first `burnin` of `iters` sweeps are discarded.
absl::StatusOr<PosteriorResult> GibbsPosterior(double s_noisy, int m,
                                               double epsilon, int iters,
                                               int burnin, uint64_t seed);

// Median of p(r | s_noisy) by direct numerical integration: the marginal
// sum over S is evaluated on a uniform grid of grid_size intervals covering
// [0, 1], normalized with the trapezoid rule and inverted by linear
// interpolation. Requires grid_size >= 1000.
absl::StatusOr<double> OraclePosteriorMedian(double s_noisy, int m,
                                             double epsilon, int grid_size);

}  // namespace simverify::posterior

#endif  // SIMVERIFY_POSTERIOR_POSTERIOR_H_
