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

#include "simverify/common/csv.h"

#include <algorithm>

#include "absl/status/status.h"
#include "absl/strings/numbers.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "absl/strings/str_split.h"
#include "absl/strings/strip.h"

namespace simverify {

absl::StatusOr<size_t> CsvTable::ColumnIndex(absl::string_view column) const {
  auto it = std::find(header.begin(), header.end(), column);
  if (it == header.end()) {
    return absl::InvalidArgumentError(
        absl::StrCat("CSV is missing required column '", column, "'"));
  }
  return static_cast<size_t>(it - header.begin());
}

absl::StatusOr<CsvTable> ReadCsv(std::istream& in) {
  CsvTable table;
  std::string line;
  bool have_header = false;
  size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    absl::string_view view = absl::StripTrailingAsciiWhitespace(line);
    if (view.empty()) continue;
    std::vector<std::string> fields = absl::StrSplit(view, ',');
    if (!have_header) {
      table.header = std::move(fields);
      have_header = true;
      continue;
    }
    if (fields.size() != table.header.size()) {
      return absl::InvalidArgumentError(
          absl::StrCat("CSV line ", line_number, " has ", fields.size(),
                       " fields, header has ", table.header.size()));
    }
    table.rows.push_back(std::move(fields));
  }
  if (!have_header) return absl::InvalidArgumentError("CSV has no header.");
  return table;
}

absl::StatusOr<double> ParseDouble(absl::string_view field) {
  double value;
  if (!absl::SimpleAtod(field,
                        &value)) {
    return absl::InvalidArgumentError(
        absl::StrCat("Not a number: '", field, "'"));
  }
  return value;
}

absl::StatusOr<uint64_t> ParseUint(absl::string_view field) {
  uint64_t value;
  if (!absl::SimpleAtoi(field,
                        &value)) {
    return absl::InvalidArgumentError(
        absl::StrCat("Not an unsigned integer: '", field, "'"));
  }
  return value;
}

std::string FormatDouble(double value) {
  return absl::StrFormat("%.17g", value);
}

}  // namespace simverify
