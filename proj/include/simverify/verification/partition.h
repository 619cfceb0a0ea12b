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

// Sub-sample step of sub-sample-and-aggregate: a random balanced split of the
// confidential records and the survey-weighted estimate inside each part.

#ifndef SIMVERIFY_VERIFICATION_PARTITION_H_
#define SIMVERIFY_VERIFICATION_PARTITION_H_

#include <cstdint>
#include <span>
#include <vector>

#include "absl/status/statusor.h"
#include "simverify/survey/survey_sample.h"
#include "simverify/verification/tolerance.h"

namespace simverify::verification {

// Assignment of each sample record (by position) to one of M partitions.
// Partitions are disjoint, cover the sample, are nonempty, and differ in
// size by at most one.
class PartitionScheme {
 public:
  // Validates the invariants above for an explicit assignment.
  static absl::StatusOr<PartitionScheme> FromAssignment(
      std::vector<int> assignment, int num_partitions);

  int num_partitions() const { return static_cast<int>(members_.size()); }
  size_t sample_size() const { return assignment_.size(); }
  const std::vector<int>& assignment() const { return assignment_; }
  // Record positions in partition k, ascending.
  const std::vector<size_t>& members(int k) const { return members_[k]; }
  std::vector<size_t> sizes() const;

  friend bool operator==(const PartitionScheme&,
                         const PartitionScheme&) = default;

 private:
  PartitionScheme(std::vector<int> assignment,
                  std::vector<std::vector<size_t>> members)
      : assignment_(std::move(assignment)), members_(std::move(members)) {}

  std::vector<int> assignment_;
  std::vector<std::vector<size_t>> members_;
};

// Uniformly random balanced partition: records are shuffled and dealt
// round-robin, so when M does not divide n the first n mod M partitions get
// one extra record. Requires 2 <= M <= n.
absl::StatusOr<PartitionScheme> Partition(const survey::SurveySample& sample,
                                          int num_partitions, uint64_t seed);

// Estimate from partition k with weights inflated by n / n_k, where n_k is
// that partition's actual size: the inflated Horvitz-Thompson total for
// kTotal, the inflated ratio mean for kMean.
absl::StatusOr<double> PartitionEstimate(const survey::SurveySample& sample,
                                         const PartitionScheme& scheme, int k,
                                         survey::EstimandKind kind);

// PartitionEstimate for every k. The scheme must match the sample size.
absl::StatusOr<std::vector<double>> PartitionEstimates(
    const survey::SurveySample& sample, const PartitionScheme& scheme,
    survey::EstimandKind kind);

// Number of estimates inside the closed interval.
int CountWithin(std::span<const double> estimates, const Interval& interval);

namespace internal {

// Partition() without the M >= 2 floor; M = 1 is the trusted-side
// diagnostic where the single partition is the whole sample.
absl::StatusOr<PartitionScheme> PartitionAllowingSingle(
    const survey::SurveySample& sample, int num_partitions, uint64_t seed);

}  // namespace internal
}  // namespace simverify::verification

#endif  // SIMVERIFY_VERIFICATION_PARTITION_H_
