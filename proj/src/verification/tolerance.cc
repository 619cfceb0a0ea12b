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

#include "simverify/verification/tolerance.h"

#include <cmath>

#include "absl/strings/str_cat.h"

namespace simverify::verification {

absl::string_view ToleranceKindName(ToleranceKind kind) {
  return kind == ToleranceKind::kSdMultiple ? "sd_multiple" : "proportional";
}

absl::StatusOr<ToleranceKind> ParseToleranceKind(absl::string_view name) {
  if (name == "sd_multiple") return ToleranceKind::kSdMultiple;
  if (name == "proportional") return ToleranceKind::kProportional;
  return absl::InvalidArgumentError(absl::StrCat(
      "Unknown tolerance kind '", name, "'; expected sd_multiple or proportional"));
}

absl::string_view IntervalModeName(IntervalMode mode) {
  return mode == IntervalMode::kFixed ? "fixed" : "adjusted";
}

absl::StatusOr<IntervalMode> ParseIntervalMode(absl::string_view name) {
  if (name == "fixed") return IntervalMode::kFixed;
  if (name == "adjusted") return IntervalMode::kAdjusted;
  return absl::InvalidArgumentError(absl::StrCat(
      "Unknown interval mode '", name, "'; expected fixed or adjusted"));
}

absl::Status ToleranceSpec::Validate() const {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) {
    return absl::InvalidArgumentError(
        absl::StrCat("alpha must be positive and finite, got ", alpha));
  }
  if (gamma.has_value() && !(*gamma >= 1.0 && std::isfinite(*gamma))) {
    return absl::InvalidArgumentError(
        absl::StrCat("gamma must be at least 1, got ", *gamma));
  }
  return absl::OkStatus();
}

double ToleranceSpec::EffectiveGamma(int num_partitions) const {
  if (mode == IntervalMode::kFixed) return 1.0;
  return gamma.value_or(std::sqrt(static_cast<double>(num_partitions)));
}

absl::StatusOr<Interval> BuildInterval(double estimate0, double sd0,
                                       const ToleranceSpec& spec,
                                       int num_partitions) {
  if (absl::Status s = spec.Validate(); !s.ok()) return s;
  if (!(sd0 >= 0.0) || !std::isfinite(sd0)) {
    return absl::InvalidArgumentError(
        absl::StrCat("sd0 must be nonnegative and finite, got ", sd0));
  }
  if (!std::isfinite(estimate0)) {
    return absl::InvalidArgumentError("estimate0 must be finite.");
  }
  if (num_partitions < 1) {
    return absl::InvalidArgumentError("Number of partitions must be positive.");
  }
  const double scale =
      spec.kind == ToleranceKind::kSdMultiple ? sd0 : std::abs(estimate0);
  const double half_width =
      spec.EffectiveGamma(num_partitions) * spec.alpha * scale;
  return Interval{estimate0 - half_width, estimate0 + half_width};
}

}  // namespace simverify::verification
