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

#ifndef SIMVERIFY_SURVEY_ESTIMATORS_H_
#define SIMVERIFY_SURVEY_ESTIMATORS_H_

#include <span>

#include "absl/status/statusor.h"
#include "simverify/survey/survey_sample.h"

namespace simverify::survey {

// Horvitz-Thompson total: sum of w_i * x_i.
absl::StatusOr<double> HorvitzThompsonTotal(const SurveySample& sample);

// Survey-weighted ratio estimator of the population mean,
//   sum(w_i * inflation * x_i) / sum(w_i * inflation).
// The inflation factor cancels; it is accepted so partition estimates can be
// written in the same form as partition totals.
absl::StatusOr<double> RatioMean(const SurveySample& sample, double inflation);

// Span forms used for partition subsets. Both require a nonempty span.
double InflatedWeightedTotal(std::span<const SampleRecord> records,
                             double inflation);
double InflatedRatioMean(std::span<const SampleRecord> records,
                         double inflation);

struct SrsEstimate {
  double estimate = 0.0;
  double sd = 0.0;
};

// Analyst-side estimate from synthetic data treated as a simple random
// sample of size n0 from a population of size N:
//   Total: N * mean,  variance N^2 (1 - n0/N) s^2 / n0
//   Mean:  mean,      variance     (1 - n0/N) s^2 / n0
// with s^2 the n0 - 1 denominator sample variance.
absl::StatusOr<SrsEstimate> EstimateFromSrs(std::span<const double> synth_x,
                                            uint64_t population_size,
                                            EstimandKind kind);

}  // namespace simverify::survey

#endif  // SIMVERIFY_SURVEY_ESTIMATORS_H_
