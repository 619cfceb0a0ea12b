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

#include "simverify/verification/verify.h"

#include <vector>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "simverify/common/rng.h"
#include "simverify/common/status_macros.h"
#include "simverify/verification/laplace_mechanism.h"
#include "simverify/verification/partition.h"

namespace simverify::verification {

nlohmann::json ToJson(const VerificationResult& result) {
  return nlohmann::json{
      {"s_noisy", result.s_noisy},
      {"m", result.num_partitions},
      {"epsilon", result.epsilon},
      {"interval", {{"lo", result.interval.lo}, {"hi", result.interval.hi}}}};
}

namespace {

absl::StatusOr<VerificationResult> VerifyWithScheme(
    const survey::SurveySample& sample, const PartitionScheme& scheme,
    double estimate0, double sd0, survey::EstimandKind kind,
    const ToleranceSpec& spec, double epsilon, uint64_t seed) {
  SIMVERIFY_ASSIGN_OR_RETURN(
      Interval interval,
      BuildInterval(estimate0, sd0, spec, scheme.num_partitions()));
  SIMVERIFY_ASSIGN_OR_RETURN(std::vector<double> estimates,
                             PartitionEstimates(sample, scheme, kind));
  const int count = CountWithin(estimates, interval);
  Rng noise_rng(DeriveSeed(seed, {kNoiseStream}));
  SIMVERIFY_ASSIGN_OR_RETURN(
      double s_noisy, PrivatizeCount(count, epsilon, noise_rng.UniformOpen()));
  return VerificationResult{s_noisy, scheme.num_partitions(), epsilon,
                            interval};
}

absl::Status ValidateScalars(double epsilon, const ToleranceSpec& spec) {
  if (!(epsilon > 0.0)) {
    return absl::InvalidArgumentError(
        absl::StrCat("epsilon must be positive, got ", epsilon));
  }
  return spec.Validate();
}

}  // namespace

absl::StatusOr<VerificationResult> Verify(const survey::SurveySample& sample,
                                          double estimate0, double sd0,
                                          survey::EstimandKind kind,
                                          const ToleranceSpec& spec,
                                          int num_partitions, double epsilon,
                                          uint64_t seed) {
  SIMVERIFY_RETURN_IF_ERROR(ValidateScalars(epsilon, spec));
  SIMVERIFY_ASSIGN_OR_RETURN(
      PartitionScheme scheme,
      Partition(sample, num_partitions,
                DeriveSeed(seed, {kPartitionStream})));
  return VerifyWithScheme(sample, scheme, estimate0, sd0, kind, spec, epsilon,
                          seed);
}

namespace internal {

absl::StatusOr<VerificationResult> VerifyAllowingSinglePartition(
    const survey::SurveySample& sample, double estimate0, double sd0,
    survey::EstimandKind kind, const ToleranceSpec& spec, int num_partitions,
    double epsilon, uint64_t seed) {
  SIMVERIFY_RETURN_IF_ERROR(ValidateScalars(epsilon, spec));
  SIMVERIFY_ASSIGN_OR_RETURN(
      PartitionScheme scheme,
      PartitionAllowingSingle(sample, num_partitions,
                              DeriveSeed(seed, {kPartitionStream})));
  return VerifyWithScheme(sample, scheme, estimate0, sd0, kind, spec, epsilon,
                          seed);
}

}  // namespace internal
}  // namespace simverify::verification
