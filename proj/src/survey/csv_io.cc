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

#include "simverify/survey/csv_io.h"

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "simverify/common/status_macros.h"

namespace simverify::survey {

void WritePopulationCsv(const Population& population, std::ostream& out) {
  out << "id,x,z\n";
  for (size_t i = 0; i < population.size(); ++i) {
    out << i << ',' << FormatDouble(population.x(i)) << ','
        << FormatDouble(population.z(i)) << '\n';
  }
}

absl::StatusOr<Population> ReadPopulationCsv(std::istream& in) {
  SIMVERIFY_ASSIGN_OR_RETURN(CsvTable table, ReadCsv(in));
  SIMVERIFY_ASSIGN_OR_RETURN(size_t id_col, table.ColumnIndex("id"));
  SIMVERIFY_ASSIGN_OR_RETURN(size_t x_col, table.ColumnIndex("x"));
  SIMVERIFY_ASSIGN_OR_RETURN(size_t z_col, table.ColumnIndex("z"));

  const size_t n = table.rows.size();
  std::vector<double> x(n), z(n);
  std::vector<bool> seen(n, false);
  for (const auto& row : table.rows) {
    SIMVERIFY_ASSIGN_OR_RETURN(uint64_t id, ParseUint(row[id_col]));
    if (id >= n || seen[id]) {
      return absl::InvalidArgumentError(absl::StrCat(
          "Population ids must be unique and contiguous 0..N-1; bad id ", id));
    }
    seen[id] = true;
    SIMVERIFY_ASSIGN_OR_RETURN(x[id], ParseDouble(row[x_col]));
    SIMVERIFY_ASSIGN_OR_RETURN(z[id], ParseDouble(row[z_col]));
  }
  return Population::Create(std::move(x), std::move(z));
}

void WriteSampleCsv(const SurveySample& sample, std::ostream& out) {
  out << "id,x,pi,w\n";
  for (const SampleRecord& r : sample.records()) {
    out << r.id << ',' << FormatDouble(r.x) << ',' << FormatDouble(r.pi) << ','
        << FormatDouble(r.w) << '\n';
  }
}

absl::StatusOr<SurveySample> ReadSampleCsv(std::istream& in,
                                           uint64_t population_size) {
  SIMVERIFY_ASSIGN_OR_RETURN(CsvTable table, ReadCsv(in));
  SIMVERIFY_ASSIGN_OR_RETURN(size_t id_col, table.ColumnIndex("id"));
  SIMVERIFY_ASSIGN_OR_RETURN(size_t x_col, table.ColumnIndex("x"));
  SIMVERIFY_ASSIGN_OR_RETURN(size_t pi_col, table.ColumnIndex("pi"));
  SIMVERIFY_ASSIGN_OR_RETURN(size_t w_col, table.ColumnIndex("w"));

  std::vector<SampleRecord> records;
  records.reserve(table.rows.size());
  for (const auto& row : table.rows) {
    SampleRecord r;
    SIMVERIFY_ASSIGN_OR_RETURN(r.id, ParseUint(row[id_col]));
    SIMVERIFY_ASSIGN_OR_RETURN(r.x, ParseDouble(row[x_col]));
    SIMVERIFY_ASSIGN_OR_RETURN(r.pi, ParseDouble(row[pi_col]));
    SIMVERIFY_ASSIGN_OR_RETURN(r.w, ParseDouble(row[w_col]));
    records.push_back(r);
  }
  return SurveySample::Create(std::move(records), population_size);
}

}  // namespace simverify::survey
