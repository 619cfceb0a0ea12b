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

#include "simverify/synthesis/synthesis.h"

#include <algorithm>
#include <cmath>
#include <iterator>
#include <random>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "json.hpp"
#include "simverify/common/csv.h"
#include "simverify/common/numeric.h"
#include "simverify/common/rng.h"
#include "simverify/common/status_macros.h"

namespace simverify::synthesis {

absl::string_view ProvenanceName(Provenance provenance) {
  return provenance == Provenance::kFaithfulSrs ? "faithful_srs"
                                                : "biased_normal";
}

absl::StatusOr<Provenance> ParseProvenance(absl::string_view name) {
  if (name == "faithful_srs") return Provenance::kFaithfulSrs;
  if (name == "biased_normal") return Provenance::kBiasedNormal;
  return absl::InvalidArgumentError(absl::StrCat(
      "Unknown synthesis mode '", name,
      "'; expected faithful_srs or biased_normal"));
}

absl::StatusOr<SyntheticData> SynthesizeSrs(
    const survey::Population& population, size_t n0, uint64_t seed) {
  if (n0 > population.size()) {
    return absl::InvalidArgumentError(
        absl::StrCat("Synthetic size ", n0, " exceeds population size ",
                     population.size()));
  }
  Rng rng(seed);
  SyntheticData data;
  data.population_size = population.size();
  data.provenance = Provenance::kFaithfulSrs;
  data.x.reserve(n0);
  std::span<const double> x = population.x_values();
  std::sample(x.begin(), x.end(), std::back_inserter(data.x), n0,
              rng.engine());
  return data;
}

absl::StatusOr<SyntheticData> SynthesizeBiased(
    const survey::SurveySample& confidential, size_t n0, uint64_t seed) {
  const size_t n = confidential.size();
  if (n < 2) {
    return absl::InvalidArgumentError(absl::StrCat(
        "Biased synthesis needs at least 2 confidential records, got ", n));
  }
  if (n0 < 1) {
    return absl::InvalidArgumentError("Synthetic size must be positive.");
  }
  std::vector<double> x = confidential.XValues();
  const double shift = x[0];
  CompensatedSum shifted;
  for (double v : x) shifted.Add(v - shift);
  const double shifted_mean = shifted.Result() / static_cast<double>(n);
  CompensatedSum squares;
  for (double v : x) {
    const double d = (v - shift) - shifted_mean;
    squares.Add(d * d);
  }
  const double mean = shift + shifted_mean;
  const double sd = std::sqrt(squares.Result() / static_cast<double>(n - 1));

  SyntheticData data;
  data.population_size = confidential.population_size();
  data.provenance = Provenance::kBiasedNormal;
  data.x.reserve(n0);
  if (sd == 0.0) {
    data.x.assign(n0, mean);
    return data;
  }
  Rng rng(seed);
  std::normal_distribution<double> normal(mean, sd);
  for (size_t i = 0; i < n0; ++i) data.x.push_back(normal(rng.engine()));
  return data;
}

void WriteSyntheticData(const SyntheticData& data, std::ostream& csv,
                        std::ostream& sidecar) {
  csv << "x\n";
  for (double v : data.x) csv << FormatDouble(v) << '\n';
  nlohmann::json meta = {
      {"n0", data.n0()},
      {"N", data.population_size},
      {"provenance", std::string(ProvenanceName(data.provenance))}};
  sidecar << meta.dump() << '\n';
}

absl::StatusOr<SyntheticData> ReadSyntheticData(std::istream& csv,
                                                std::istream& sidecar) {
  nlohmann::json meta = nlohmann::json::parse(sidecar, nullptr, false);
  if (meta.is_discarded() || !meta.is_object() || !meta.contains("n0") ||
      !meta.contains("N") || !meta.contains("provenance") ||
      !meta["n0"].is_number_unsigned() || !meta["N"].is_number_unsigned() ||
      !meta["provenance"].is_string()) {
    return absl::InvalidArgumentError(
        "Synthetic sidecar must be a JSON object with n0, N and provenance.");
  }
  SIMVERIFY_ASSIGN_OR_RETURN(
      Provenance provenance,
      ParseProvenance(meta["provenance"].get<std::string>()));

  SIMVERIFY_ASSIGN_OR_RETURN(CsvTable table, ReadCsv(csv));
  SIMVERIFY_ASSIGN_OR_RETURN(size_t x_col, table.ColumnIndex("x"));
  SyntheticData data;
  data.provenance = provenance;
  data.population_size = meta["N"].get<uint64_t>();
  data.x.reserve(table.rows.size());
  for (const auto& row : table.rows) {
    SIMVERIFY_ASSIGN_OR_RETURN(double v, ParseDouble(row[x_col]));
    data.x.push_back(v);
  }
  if (data.n0() != meta["n0"].get<uint64_t>()) {
    return absl::InvalidArgumentError(
        absl::StrCat("Sidecar says n0=", meta["n0"].get<uint64_t>(),
                     " but the CSV has ", data.n0(), " values"));
  }
  if (data.n0() > data.population_size) {
    return absl::InvalidArgumentError("n0 exceeds N in synthetic data.");
  }
  return data;
}

}  // namespace simverify::synthesis
