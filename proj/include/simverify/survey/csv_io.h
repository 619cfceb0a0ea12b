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

// CSV exchange formats. Populations use the header `id,x,z`, samples use
// `id,x,pi,w`. Rows are written in ascending id order with round-trip
// (%.17g) precision.

#ifndef SIMVERIFY_SURVEY_CSV_IO_H_
#define SIMVERIFY_SURVEY_CSV_IO_H_

#include <istream>
#include <ostream>

#include "absl/status/statusor.h"
#include "simverify/common/csv.h"
#include "simverify/survey/population.h"
#include "simverify/survey/survey_sample.h"

namespace simverify::survey {

void WritePopulationCsv(const Population& population, std::ostream& out);
absl::StatusOr<Population> ReadPopulationCsv(std::istream& in);

void WriteSampleCsv(const SurveySample& sample, std::ostream& out);
// The CSV does not carry N, so the caller supplies it.
absl::StatusOr<SurveySample> ReadSampleCsv(std::istream& in,
                                           uint64_t population_size);

}  // namespace simverify::survey

#endif  // SIMVERIFY_SURVEY_CSV_IO_H_
