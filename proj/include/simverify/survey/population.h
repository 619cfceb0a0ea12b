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

#ifndef SIMVERIFY_SURVEY_POPULATION_H_
#define SIMVERIFY_SURVEY_POPULATION_H_

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "absl/status/statusor.h"

namespace simverify::survey {

// Generative model for a synthetic finite population of (x, z) pairs:
//   z ~ Uniform(z_lower, z_upper)          (or the explicit fixed_z values)
//   x | z ~ Normal(x_intercept + x_slope * z, x_spread)
// where x_spread is read as a variance or a standard deviation according to
// spread_kind. A zero spread makes x a deterministic function of z.
struct PopulationModel {
  enum class SpreadKind { kVariance, kStandardDeviation };

  double z_lower = 0.0;
  double z_upper = 10.0;
  double x_intercept = 5.0;
  double x_slope = 1.0;
  double x_spread = 2.0;
  SpreadKind spread_kind = SpreadKind::kVariance;
  std::optional<std::vector<double>> fixed_z;

  double XStandardDeviation() const;
};

// A finite population. Unit ids are the contiguous indices 0..N-1, so values
// are stored as two parallel columns.
class Population {
 public:
  // Validates N >= 1, equal column lengths, and z > 0 everywhere.
  static absl::StatusOr<Population> Create(std::vector<double> x,
                                           std::vector<double> z);

  size_t size() const { return x_.size(); }
  double x(size_t id) const { return x_[id]; }
  double z(size_t id) const { return z_[id]; }
  std::span<const double> x_values() const { return x_; }
  std::span<const double> z_values() const { return z_; }

  // Sum and average of x over all N units.
  double Total() const;
  double Mean() const;

  friend bool operator==(const Population&, const Population&) = default;

 private:
  Population(std::vector<double> x, std::vector<double> z)
      : x_(std::move(x)), z_(std::move(z)) {}

  std::vector<double> x_;
  std::vector<double> z_;
};

// Draws N units from `model`. Deterministic given (n, seed, model).
absl::StatusOr<Population> GeneratePopulation(
    size_t n, uint64_t seed, const PopulationModel& model = PopulationModel());

}  // namespace simverify::survey

#endif  // SIMVERIFY_SURVEY_POPULATION_H_
