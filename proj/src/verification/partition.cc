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

#include "simverify/verification/partition.h"

#include <algorithm>
#include <numeric>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "simverify/common/rng.h"
#include "simverify/survey/estimators.h"

namespace simverify::verification {

absl::StatusOr<PartitionScheme> PartitionScheme::FromAssignment(
    std::vector<int> assignment, int num_partitions) {
  if (num_partitions < 1) {
    return absl::InvalidArgumentError("Number of partitions must be positive.");
  }
  std::vector<std::vector<size_t>> members(num_partitions);
  for (size_t i = 0; i < assignment.size(); ++i) {
    const int k = assignment[i];
    if (k < 0 || k >= num_partitions) {
      return absl::InvalidArgumentError(
          absl::StrCat("Record ", i, " assigned to partition ", k,
                       " outside 0..", num_partitions - 1));
    }
    members[k].push_back(i);
  }
  auto [smallest, largest] = std::minmax_element(
      members.begin(), members.end(),
      [](const auto& a, const auto& b) { return a.size() < b.size(); });
  if (smallest->empty()) {
    return absl::InvalidArgumentError("Every partition must be nonempty.");
  }
  if (largest->size() - smallest->size() > 1) {
    return absl::InvalidArgumentError(
        absl::StrCat("Partition sizes must differ by at most one; got ",
                     smallest->size(), " and ", largest->size()));
  }
  return PartitionScheme(std::move(assignment), std::move(members));
}

std::vector<size_t> PartitionScheme::sizes() const {
  std::vector<size_t> out;
  out.reserve(members_.size());
  for (const auto& m : members_) out.push_back(m.size());
  return out;
}

namespace internal {

absl::StatusOr<PartitionScheme> PartitionAllowingSingle(
    const survey::SurveySample& sample, int num_partitions, uint64_t seed) {
  const size_t n = sample.size();
  if (num_partitions < 1 || static_cast<size_t>(num_partitions) > n) {
    return absl::InvalidArgumentError(
        absl::StrCat("Number of partitions ", num_partitions,
                     " must be between 1 and the sample size ", n));
  }
  std::vector<size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  Rng rng(seed);
  rng.Shuffle(std::span<size_t>(order));
  std::vector<int> assignment(n);
  for (size_t pos = 0; pos < n; ++pos) {
    assignment[order[pos]] = static_cast<int>(pos % num_partitions);
  }
  return PartitionScheme::FromAssignment(std::move(assignment),
                                         num_partitions);
}

}  // namespace internal

absl::StatusOr<PartitionScheme> Partition(const survey::SurveySample& sample,
                                          int num_partitions, uint64_t seed) {
  if (num_partitions < 2 ||
      static_cast<size_t>(num_partitions) > sample.size()) {
    return absl::InvalidArgumentError(
        absl::StrCat("Number of partitions must satisfy 2 <= M <= n; got M=",
                     num_partitions, ", n=", sample.size()));
  }
  return internal::PartitionAllowingSingle(sample, num_partitions, seed);
}

absl::StatusOr<double> PartitionEstimate(const survey::SurveySample& sample,
                                         const PartitionScheme& scheme, int k,
                                         survey::EstimandKind kind) {
  if (scheme.sample_size() != sample.size()) {
    return absl::InvalidArgumentError(
        absl::StrCat("Partition scheme covers ", scheme.sample_size(),
                     " records but the sample has ", sample.size()));
  }
  if (k < 0 || k >= scheme.num_partitions()) {
    return absl::OutOfRangeError(
        absl::StrCat("Partition index ", k, " outside 0..",
                     scheme.num_partitions() - 1));
  }
  const std::vector<size_t>& members = scheme.members(k);
  std::vector<survey::SampleRecord> records;
  records.reserve(members.size());
  for (size_t i : members) records.push_back(sample.record(i));
  const double inflation = static_cast<double>(sample.size()) /
                           static_cast<double>(members.size());
  return kind == survey::EstimandKind::kTotal
             ? survey::InflatedWeightedTotal(records, inflation)
             : survey::InflatedRatioMean(records, inflation);
}

absl::StatusOr<std::vector<double>> PartitionEstimates(
    const survey::SurveySample& sample, const PartitionScheme& scheme,
    survey::EstimandKind kind) {
  std::vector<double> estimates;
  estimates.reserve(scheme.num_partitions());
  for (int k = 0; k < scheme.num_partitions(); ++k) {
    absl::StatusOr<double> estimate =
        PartitionEstimate(sample, scheme, k, kind);
    if (!estimate.ok()) return estimate.status();
    estimates.push_back(*estimate);
  }
  return estimates;
}

int CountWithin(std::span<const double> estimates, const Interval& interval) {
  return static_cast<int>(
      std::count_if(estimates.begin(), estimates.end(),
                    [&](double e) { return interval.Contains(e); }));
}

}  // namespace simverify::verification
