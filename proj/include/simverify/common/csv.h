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

#ifndef SIMVERIFY_COMMON_CSV_H_
#define SIMVERIFY_COMMON_CSV_H_

#include <cstdint>
#include <istream>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "absl/strings/string_view.h"

namespace simverify {

// Minimal CSV table: a header row plus rows of unquoted fields.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  // Index of `column` in the header, or an error naming the missing column.
  absl::StatusOr<size_t> ColumnIndex(absl::string_view column) const;
};

absl::StatusOr<CsvTable> ReadCsv(std::istream& in);
absl::StatusOr<double> ParseDouble(absl::string_view field);
absl::StatusOr<uint64_t> ParseUint(absl::string_view field);
std::string FormatDouble(double value);

}  // namespace simverify

#endif  // SIMVERIFY_COMMON_CSV_H_
