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

#ifndef SIMVERIFY_VERIFICATION_LAPLACE_MECHANISM_H_
#define SIMVERIFY_VERIFICATION_LAPLACE_MECHANISM_H_

#include "absl/status/statusor.h"

namespace simverify::verification {

// Inverse-CDF Laplace(0, scale) draw from one uniform u in (0, 1):
//   -scale * sign(u - 1/2) * ln(1 - 2|u - 1/2|).
double LaplaceInverseCdf(double u, double scale);

// Releases count + Laplace(0, 1/epsilon). A count of partitions inside the
// tolerance interval has sensitivity 1: replacing one record moves one
// partition estimate, hence at most one indicator.
absl::StatusOr<double> PrivatizeCount(int count, double epsilon, double u);

}  // namespace simverify::verification

#endif  // SIMVERIFY_VERIFICATION_LAPLACE_MECHANISM_H_
