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

#ifndef SIMVERIFY_SYNTHESIS_SYNTHESIS_H_
#define SIMVERIFY_SYNTHESIS_SYNTHESIS_H_

#include <cstdint>
#include <istream>
#include <ostream>
#include <vector>

#include "absl/status/statusor.h"
#include "absl/strings/string_view.h"
#include "simverify/survey/population.h"
#include "simverify/survey/survey_sample.h"

namespace simverify::synthesis {

enum class Provenance { kFaithfulSrs, kBiasedNormal };

absl::string_view ProvenanceName(Provenance provenance);
absl::StatusOr<Provenance> ParseProvenance(absl::string_view name);

// A released synthetic data set. It carries no weights: downstream analysis
// treats it as a simple random sample with weight N / n0.
struct SyntheticData {
  std::vector<double> x;
  uint64_t population_size = 0;
  Provenance provenance = Provenance::kFaithfulSrs;

  size_t n0() const { return x.size(); }

  friend bool operator==(const SyntheticData&,
                         const SyntheticData&) = default;
};

// A uniform without-replacement draw of n0 x-values from the population.
// The stand-in for a synthesizer that correctly accounts for the design.
absl::StatusOr<SyntheticData> SynthesizeSrs(
    const survey::Population& population, size_t n0, uint64_t seed);

// i.i.d. Normal draws with the unweighted mean and (n - 1 denominator)
// variance of the confidential x column, i.e. a synthesizer that ignores
// the sampling design.
absl::StatusOr<SyntheticData> SynthesizeBiased(
    const survey::SurveySample& confidential, size_t n0, uint64_t seed);

// Single-column CSV (header `x`) plus a JSON sidecar
// {"n0": ..., "N": ..., "provenance": "faithful_srs" | "biased_normal"}.
void WriteSyntheticData(const SyntheticData& data, std::ostream& csv,
                        std::ostream& sidecar);
absl::StatusOr<SyntheticData> ReadSyntheticData(std::istream& csv,
                                                std::istream& sidecar);

}  // namespace simverify::synthesis

#endif  // SIMVERIFY_SYNTHESIS_SYNTHESIS_H_
