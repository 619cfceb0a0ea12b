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

#ifndef SIMVERIFY_SURVEY_SURVEY_SAMPLE_H_
#define SIMVERIFY_SURVEY_SURVEY_SAMPLE_H_

#include <cstdint>
#include <span>
#include <vector>

#include "absl/status/statusor.h"
#include "absl/strings/string_view.h"

namespace simverify::survey {

enum class EstimandKind { kTotal, kMean };

absl::string_view EstimandName(EstimandKind kind);  // "total" / "mean"
absl::StatusOr<EstimandKind> ParseEstimand(absl::string_view name);

// One sampled unit. `w` is always exactly 1.0 / pi.
struct SampleRecord {
  uint64_t id = 0;
  double x = 0.0;
  double pi = 1.0;
  double w = 1.0;

  static SampleRecord Make(uint64_t id, double x, double pi) {
    return SampleRecord{id, x, pi, 1.0 / pi};
  }

  friend bool operator==(const SampleRecord&, const SampleRecord&) = default;
};

// Confidential survey data: records sorted by id, each carrying its
// inclusion probability and base weight, plus the size of the population it
// was drawn from.
class SurveySample {
 public:
  // Validates 0 < pi <= 1, |w * pi - 1| <= 1e-9, unique ids, finite x and
  // n <= population_size. Weights are then normalized to exactly 1 / pi and
  // records are sorted by id.
  static absl::StatusOr<SurveySample> Create(std::vector<SampleRecord> records,
                                             uint64_t population_size);

  size_t size() const { return records_.size(); }
  bool empty() const { return records_.empty(); }
  uint64_t population_size() const { return population_size_; }
  std::span<const SampleRecord> records() const { return records_; }
  const SampleRecord& record(size_t i) const { return records_[i]; }

  // The x column in record order.
  std::vector<double> XValues() const;

  friend bool operator==(const SurveySample&, const SurveySample&) = default;

 private:
  SurveySample(std::vector<SampleRecord> records, uint64_t population_size)
      : records_(std::move(records)), population_size_(population_size) {}

  std::vector<SampleRecord> records_;
  uint64_t population_size_ = 0;
};

}  // namespace simverify::survey

#endif  // SIMVERIFY_SURVEY_SURVEY_SAMPLE_H_
