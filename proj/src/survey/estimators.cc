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

#include "simverify/survey/estimators.h"

#include <algorithm>
#include <cmath>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "simverify/common/numeric.h"

namespace simverify::survey {

double InflatedWeightedTotal(std::span<const SampleRecord> records,
                             double inflation) {
  CompensatedSum sum;
  for (const SampleRecord& r : records) sum.Add(r.w * inflation * r.x);
  return sum.Result();
}

double InflatedRatioMean(std::span<const SampleRecord> records,
                         double inflation) {
  CompensatedSum numerator;
  CompensatedSum denominator;
  for (const SampleRecord& r : records) {
    const double weight = r.w * inflation;
    numerator.Add(weight * r.x);
    denominator.Add(weight);
  }
  return numerator.Result() / denominator.Result();
}

absl::StatusOr<double> HorvitzThompsonTotal(const SurveySample& sample) {
  if (sample.empty()) {
    return absl::InvalidArgumentError("Cannot estimate from an empty sample.");
  }
  return InflatedWeightedTotal(sample.records(), 1.0);
}

absl::StatusOr<double> RatioMean(const SurveySample& sample,
                                 double inflation) {
  if (sample.empty()) {
    return absl::InvalidArgumentError("Cannot estimate from an empty sample.");
  }
  if (!(inflation > 0.0) || !std::isfinite(inflation)) {
    return absl::InvalidArgumentError(
        absl::StrCat("Inflation factor must be positive, got ", inflation));
  }
  return InflatedRatioMean(sample.records(), inflation);
}

absl::StatusOr<SrsEstimate> EstimateFromSrs(std::span<const double> synth_x,
                                            uint64_t population_size,
                                            EstimandKind kind) {
  const size_t n0 = synth_x.size();
  if (n0 < 2) {
    return absl::InvalidArgumentError(absl::StrCat(
        "Need at least 2 synthetic values for a variance, got ", n0));
  }
  if (n0 > population_size) {
    return absl::InvalidArgumentError(
        absl::StrCat("Synthetic size ", n0, " exceeds population size ",
                     population_size));
  }
  // Shifted by the first value so a constant column has exactly zero spread.
  const double shift = synth_x[0];
  CompensatedSum shifted_sum;
  for (double x : synth_x) shifted_sum.Add(x - shift);
  const double shifted_mean = shifted_sum.Result() / static_cast<double>(n0);
  const double mean = shift + shifted_mean;
  CompensatedSum squares;
  for (double x : synth_x) {
    const double d = (x - shift) - shifted_mean;
    squares.Add(d * d);
  }
  const double s2 = squares.Result() / static_cast<double>(n0 - 1);
  const double fpc =
      1.0 - static_cast<double>(n0) / static_cast<double>(population_size);
  const double mean_variance = std::max(0.0, fpc * s2 / static_cast<double>(n0));

  const double big_n = static_cast<double>(population_size);
  if (kind == EstimandKind::kTotal) {
    return SrsEstimate{big_n * mean, big_n * std::sqrt(mean_variance)};
  }
  return SrsEstimate{mean, std::sqrt(mean_variance)};
}

}  // namespace simverify::survey
