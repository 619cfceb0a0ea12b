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

#ifndef SIMVERIFY_VERIFICATION_TOLERANCE_H_
#define SIMVERIFY_VERIFICATION_TOLERANCE_H_

#include <optional>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/string_view.h"

namespace simverify::verification {

enum class ToleranceKind {
  kSdMultiple,    // half-width alpha * sd0
  kProportional,  // half-width alpha * |estimate0|
};

enum class IntervalMode {
  kFixed,     // the analyst's interval is used as-is inside every partition
  kAdjusted,  // the half-width is inflated by gamma (default sqrt(M))
};

absl::string_view ToleranceKindName(ToleranceKind kind);
absl::StatusOr<ToleranceKind> ParseToleranceKind(absl::string_view name);
absl::string_view IntervalModeName(IntervalMode mode);
absl::StatusOr<IntervalMode> ParseIntervalMode(absl::string_view name);

// The analyst's definition of "close enough".
struct ToleranceSpec {
  ToleranceKind kind = ToleranceKind::kSdMultiple;
  double alpha = 1.0;
  IntervalMode mode = IntervalMode::kAdjusted;
  // Only read in kAdjusted mode; unset means sqrt(M).
  std::optional<double> gamma;

  // alpha > 0 and, when set, gamma >= 1.
  absl::Status Validate() const;

  // 1 in kFixed mode, otherwise gamma or sqrt(M).
  double EffectiveGamma(int num_partitions) const;
};

// Closed interval [lo, hi].
struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  bool Contains(double value) const { return lo <= value && value <= hi; }

  friend bool operator==(const Interval&, const Interval&) = default;
};

// (estimate0 - h, estimate0 + h) with h = g * alpha * sd0 for kSdMultiple or
// g * alpha * |estimate0| for kProportional, g = EffectiveGamma(M).
absl::StatusOr<Interval> BuildInterval(double estimate0, double sd0,
                                       const ToleranceSpec& spec,
                                       int num_partitions);

}  // namespace simverify::verification

#endif  // SIMVERIFY_VERIFICATION_TOLERANCE_H_
