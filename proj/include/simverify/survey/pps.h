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

// Probability-proportional-to-size sampling without replacement.

#ifndef SIMVERIFY_SURVEY_PPS_H_
#define SIMVERIFY_SURVEY_PPS_H_

#include <cstdint>
#include <span>
#include <vector>

#include "absl/status/statusor.h"
#include "simverify/survey/population.h"
#include "simverify/survey/survey_sample.h"

namespace simverify::survey {

// First-order inclusion probabilities pi_i = n z_i / sum(z) for a fixed-size
// design of n units. Units whose value would exceed 1 become certainty units
// (pi = 1); the remaining probabilities are recomputed from the reduced n
// and the z-sum over non-certainty units, repeated until no new certainty
// unit appears. The result sums to n.
absl::StatusOr<std::vector<double>> ComputeInclusionProbabilities(
    std::span<const double> z, size_t n);

// Randomized systematic PPS: certainty units are taken outright, the frame
// of remaining units is put in uniformly random order, and n' units are
// selected at the points u, u+1, ..., u+n'-1 on the cumulated pi scale for a
// single uniform u. Each unit's realized inclusion probability equals its
// pi. Returns selected unit indices in ascending order.
std::vector<size_t> SystematicPpsSelect(std::span<const double> pi, size_t n,
                                        uint64_t seed);

// A PPS design over one population and sample size; caches the inclusion
// probabilities so repeated draws skip the certainty recursion.
class PpsDesign {
 public:
  static absl::StatusOr<PpsDesign> Create(const Population& population,
                                          size_t n);

  size_t sample_size() const { return n_; }
  std::span<const double> inclusion_probabilities() const { return pi_; }

  // Draws one sample. `population` must be the one the design was built on.
  SurveySample Draw(const Population& population, uint64_t seed) const;

 private:
  PpsDesign(std::vector<double> pi, size_t n) : pi_(std::move(pi)), n_(n) {}

  std::vector<double> pi_;
  size_t n_;
};

absl::StatusOr<SurveySample> DrawPpsSample(const Population& population,
                                           size_t n, uint64_t seed);

}  // namespace simverify::survey

#endif  // SIMVERIFY_SURVEY_PPS_H_
