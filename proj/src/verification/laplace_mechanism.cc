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

#include "simverify/verification/laplace_mechanism.h"

#include <cmath>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"

namespace simverify::verification {

double LaplaceInverseCdf(double u, double scale) {
  const double centered = u - 0.5;
  const double sign = centered > 0.0 ? 1.0 : (centered < 0.0 ? -1.0 : 0.0);
  return -scale * sign * std::log1p(-2.0 * std::abs(centered));
}

absl::StatusOr<double> PrivatizeCount(int count, double epsilon, double u) {
  if (!(epsilon > 0.0)) {
    return absl::InvalidArgumentError(
        absl::StrCat("epsilon must be positive, got ", epsilon));
  }
  if (!(u > 0.0 && u < 1.0)) {
    return absl::InvalidArgumentError(
        absl::StrCat("Uniform draw must lie in (0, 1), got ", u));
  }
  return static_cast<double>(count) + LaplaceInverseCdf(u, 1.0 / epsilon);
}

}  // namespace simverify::verification
