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

#ifndef SIMVERIFY_VERIFICATION_VERIFY_H_
#define SIMVERIFY_VERIFICATION_VERIFY_H_

#include <cstdint>

#include "absl/status/statusor.h"
#include "json.hpp"
#include "simverify/survey/survey_sample.h"
#include "simverify/verification/tolerance.h"

namespace simverify::verification {

// The differentially private release of one verification query. The raw
// count of partitions inside the interval is deliberately absent.
struct VerificationResult {
  double s_noisy = 0.0;
  int num_partitions = 0;
  double epsilon = 0.0;
  Interval interval;

  friend bool operator==(const VerificationResult&,
                         const VerificationResult&) = default;
};

// {"s_noisy": ..., "m": ..., "epsilon": ..., "interval": {"lo": ..., "hi": ...}}
nlohmann::json ToJson(const VerificationResult& result);

// Sub-streams derived from the single verify seed.
inline constexpr uint64_t kPartitionStream = 0;
inline constexpr uint64_t kNoiseStream = 1;

// End-to-end verification: randomly partition the confidential sample into
// M parts, compute each part's inflated estimate, count the estimates inside
// the tolerance interval built around (estimate0, sd0), and release the
// count plus Laplace(0, 1/epsilon) noise. The partition shuffle uses seed
// DeriveSeed(seed, {kPartitionStream}) and the noise uniform uses
// DeriveSeed(seed, {kNoiseStream}).
absl::StatusOr<VerificationResult> Verify(const survey::SurveySample& sample,
                                          double estimate0, double sd0,
                                          survey::EstimandKind kind,
                                          const ToleranceSpec& spec,
                                          int num_partitions, double epsilon,
                                          uint64_t seed);

namespace internal {

// Verify() that also accepts M = 1. Trusted-side diagnostics only.
absl::StatusOr<VerificationResult> VerifyAllowingSinglePartition(
    const survey::SurveySample& sample, double estimate0, double sd0,
    survey::EstimandKind kind, const ToleranceSpec& spec, int num_partitions,
    double epsilon, uint64_t seed);

}  // namespace internal
}  // namespace simverify::verification

#endif  // SIMVERIFY_VERIFICATION_VERIFY_H_
