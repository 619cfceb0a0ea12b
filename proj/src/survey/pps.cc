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

#include "simverify/survey/pps.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "simverify/common/numeric.h"
#include "simverify/common/rng.h"
#include "simverify/common/status_macros.h"

namespace simverify::survey {

absl::StatusOr<std::vector<double>> ComputeInclusionProbabilities(
    std::span<const double> z, size_t n) {
  const size_t population_size = z.size();
  if (n == 0) {
    return absl::InvalidArgumentError("Sample size must be positive.");
  }
  if (n > population_size) {
    return absl::InvalidArgumentError(
        absl::StrCat("Sample size ", n, " exceeds population size ",
                     population_size));
  }
  for (size_t i = 0; i < population_size; ++i) {
    if (!(z[i] > 0.0) || !std::isfinite(z[i])) {
      return absl::InvalidArgumentError(
          absl::StrCat("Size variable must be positive; unit ", i, " has z=",
                       z[i]));
    }
  }

  std::vector<double> pi(population_size, 0.0);
  std::vector<bool> certain(population_size, false);
  size_t remaining_n = n;
  while (true) {
    CompensatedSum z_sum;
    for (size_t i = 0; i < population_size; ++i) {
      if (!certain[i]) z_sum.Add(z[i]);
    }
    const double scale = static_cast<double>(remaining_n) / z_sum.Result();
    size_t new_certainties = 0;
    for (size_t i = 0; i < population_size; ++i) {
      if (certain[i]) continue;
      pi[i] = scale * z[i];
      if (pi[i] >= 1.0) {
        pi[i] = 1.0;
        certain[i] = true;
        ++new_certainties;
      }
    }
    if (new_certainties == 0) break;
    remaining_n -= new_certainties;
    if (remaining_n == 0) break;  // every unit is a certainty unit
  }
  return pi;
}

std::vector<size_t> SystematicPpsSelect(std::span<const double> pi, size_t n,
                                        uint64_t seed) {
  std::vector<size_t> selected;
  selected.reserve(n);
  std::vector<size_t> frame;
  frame.reserve(pi.size());
  for (size_t i = 0; i < pi.size(); ++i) {
    if (pi[i] >= 1.0) {
      selected.push_back(i);
    } else {
      frame.push_back(i);
    }
  }
  const size_t certainties = selected.size();
  const size_t target_count = n > certainties ? n - certainties : 0;

  Rng rng(seed);
  rng.Shuffle(std::span<size_t>(frame));
  double target = rng.UniformOpen();
  CompensatedSum cumulated;
  std::vector<bool> taken(frame.size(), false);
  size_t drawn = 0;
  for (size_t f = 0; f < frame.size() && drawn < target_count; ++f) {
    cumulated.Add(pi[frame[f]]);
    if (target < cumulated.Result()) {
      selected.push_back(frame[f]);
      taken[f] = true;
      ++drawn;
      target += 1.0;
    }
  }
  // Rounding in the cumulated sum can leave the last point just past the
  // end of the frame; close the gap from the tail of the frame order.
  for (size_t f = frame.size(); f > 0 && drawn < target_count; --f) {
    if (!taken[f - 1]) {
      selected.push_back(frame[f - 1]);
      ++drawn;
    }
  }
  std::sort(selected.begin(), selected.end());
  return selected;
}

absl::StatusOr<PpsDesign> PpsDesign::Create(const Population& population,
                                            size_t n) {
  SIMVERIFY_ASSIGN_OR_RETURN(
      std::vector<double> pi,
      ComputeInclusionProbabilities(population.z_values(), n));
  return PpsDesign(std::move(pi), n);
}

SurveySample PpsDesign::Draw(const Population& population,
                             uint64_t seed) const {
  std::vector<size_t> units = SystematicPpsSelect(pi_, n_, seed);
  std::vector<SampleRecord> records;
  records.reserve(units.size());
  for (size_t id : units) {
    records.push_back(SampleRecord::Make(id, population.x(id), pi_[id]));
  }
  // Records are valid by construction; Create only re-checks invariants.
  return SurveySample::Create(std::move(records), population.size()).value();
}

absl::StatusOr<SurveySample> DrawPpsSample(const Population& population,
                                           size_t n, uint64_t seed) {
  SIMVERIFY_ASSIGN_OR_RETURN(PpsDesign design,
                             PpsDesign::Create(population, n));
  return design.Draw(population, seed);
}

}  // namespace simverify::survey
