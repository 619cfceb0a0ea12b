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

#ifndef SIMVERIFY_COMMON_NUMERIC_H_
#define SIMVERIFY_COMMON_NUMERIC_H_

#include <cmath>
#include <span>
#include <vector>

namespace simverify {

// Neumaier compensated summation.
class CompensatedSum {
 public:
  void Add(double value) {
    double t = sum_ + value;
    if (std::abs(sum_) >= std::abs(value)) {
      compensation_ += (sum_ - t) + value;
    } else {
      compensation_ += (value - t) + sum_;
    }
    sum_ = t;
  }
  double Result() const { return sum_ + compensation_; }

 private:
  double sum_ = 0.0;
  double compensation_ = 0.0;
};

double StableSum(std::span<const double> values);

// Linear-interpolation quantile (R type 7) of an ascending-sorted range.
// Requires a nonempty range and q in [0, 1].
double SortedQuantile(std::span<const double> sorted, double q);

// Median of a sorted range; mean of the two middle values for even sizes.
double SortedMedian(std::span<const double> sorted);

}  // namespace simverify

#endif  // SIMVERIFY_COMMON_NUMERIC_H_
