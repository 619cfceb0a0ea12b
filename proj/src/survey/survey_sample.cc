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

#include "simverify/survey/survey_sample.h"

#include <algorithm>
#include <cmath>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"

namespace simverify::survey {

absl::string_view EstimandName(EstimandKind kind) {
  return kind == EstimandKind::kTotal ? "total" : "mean";
}

absl::StatusOr<EstimandKind> ParseEstimand(absl::string_view name) {
  if (name == "total") return EstimandKind::kTotal;
  if (name == "mean") return EstimandKind::kMean;
  return absl::InvalidArgumentError(
      absl::StrCat("Unknown estimand '", name, "'; expected total or mean"));
}

absl::StatusOr<SurveySample> SurveySample::Create(
    std::vector<SampleRecord> records, uint64_t population_size) {
  if (records.size() > population_size) {
    return absl::InvalidArgumentError(
        absl::StrCat("Sample size ", records.size(),
                     " exceeds population size ", population_size));
  }
  for (SampleRecord& r : records) {
    if (!(r.pi > 0.0 && r.pi <= 1.0)) {
      return absl::InvalidArgumentError(absl::StrCat(
          "Record ", r.id, ": inclusion probability ", r.pi,
          " is outside (0, 1]"));
    }
    if (!std::isfinite(r.x)) {
      return absl::InvalidArgumentError(
          absl::StrCat("Record ", r.id, ": x is not finite"));
    }
    if (!(std::abs(r.w * r.pi - 1.0) <= 1e-9)) {
      return absl::InvalidArgumentError(absl::StrCat(
          "Record ", r.id, ": weight ", r.w, " is not 1/pi for pi=", r.pi));
    }
    r.w = 1.0 / r.pi;
  }
  std::sort(records.begin(), records.end(),
            [](const SampleRecord& a, const SampleRecord& b) {
              return a.id < b.id;
            });
  auto dup = std::adjacent_find(
      records.begin(), records.end(),
      [](const SampleRecord& a, const SampleRecord& b) { return a.id == b.id; });
  if (dup != records.end()) {
    return absl::InvalidArgumentError(
        absl::StrCat("Duplicate record id ", dup->id));
  }
  return SurveySample(std::move(records), population_size);
}

std::vector<double> SurveySample::XValues() const {
  std::vector<double> x;
  x.reserve(records_.size());
  for (const SampleRecord& r : records_) x.push_back(r.x);
  return x;
}

}  // namespace simverify::survey
