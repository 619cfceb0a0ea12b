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

#include "simverify/survey/population.h"

#include <cmath>
#include <random>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "simverify/common/numeric.h"
#include "simverify/common/rng.h"

namespace simverify::survey {

double PopulationModel::XStandardDeviation() const {
  return spread_kind == SpreadKind::kVariance ? std::sqrt(x_spread) : x_spread;
}

absl::StatusOr<Population> Population::Create(std::vector<double> x,
                                              std::vector<double> z) {
  if (x.empty()) {
    return absl::InvalidArgumentError("Population must have at least one unit.");
  }
  if (x.size() != z.size()) {
    return absl::InvalidArgumentError(
        absl::StrCat("Column length mismatch: x has ", x.size(),
                     " values, z has ", z.size()));
  }
  for (size_t i = 0; i < z.size(); ++i) {
    if (!(z[i] > 0.0) || !std::isfinite(z[i])) {
      return absl::InvalidArgumentError(
          absl::StrCat("Size variable must be positive; unit ", i, " has z=",
                       z[i]));
    }
    if (!std::isfinite(x[i])) {
      return absl::InvalidArgumentError(
          absl::StrCat("Unit ", i, " has non-finite x"));
    }
  }
  return Population(std::move(x), std::move(z));
}

double Population::Total() const { return StableSum(x_); }

double Population::Mean() const {
  return Total() / static_cast<double>(x_.size());
}

absl::StatusOr<Population> GeneratePopulation(size_t n, uint64_t seed,
                                              const PopulationModel& model) {
  if (n < 2) {
    return absl::InvalidArgumentError(
        absl::StrCat("Population size must be at least 2, got ", n));
  }
  if (model.x_spread < 0.0) {
    return absl::InvalidArgumentError("x_spread must be nonnegative.");
  }
  if (model.fixed_z.has_value() && model.fixed_z->size() != n) {
    return absl::InvalidArgumentError(
        absl::StrCat("fixed_z has ", model.fixed_z->size(),
                     " values but N=", n));
  }
  if (!model.fixed_z.has_value() &&
      !(model.z_upper > model.z_lower && model.z_lower >= 0.0)) {
    return absl::InvalidArgumentError(
        "z range must satisfy 0 <= z_lower < z_upper.");
  }

  Rng rng(seed);
  std::vector<double> z(n);
  if (model.fixed_z.has_value()) {
    z = *model.fixed_z;
  } else {
    const double width = model.z_upper - model.z_lower;
    for (double& zi : z) zi = model.z_lower + width * rng.UniformOpen();
  }

  const double sd = model.XStandardDeviation();
  std::vector<double> x(n);
  std::normal_distribution<double> noise(0.0, 1.0);
  for (size_t i = 0; i < n; ++i) {
    double mean = model.x_intercept + model.x_slope * z[i];
    x[i] = sd > 0.0 ? mean + sd * noise(rng.engine()) : mean;
  }
  return Population::Create(std::move(x), std::move(z));
}

}  // namespace simverify::survey
