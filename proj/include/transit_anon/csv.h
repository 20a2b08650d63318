// Copyright 2026 The Transit Anon Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Minimal RFC 4180 CSV: comma separated, double-quote quoting with "" as the
// escaped quote, quoted fields may span lines. Records are written with CRLF;
// both CRLF and LF are accepted on input.

#ifndef TRANSIT_ANON_CSV_H_
#define TRANSIT_ANON_CSV_H_

#include <cstdint>
#include <istream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/statusor.h"

namespace transit_anon {

class CsvReader {
 public:
  explicit CsvReader(std::istream& in) : in_(in) {}

  // Reads the next record into `fields`. Returns false at end of input.
  absl::StatusOr<bool> Next(std::vector<std::string>& fields);

  // 1-based index of the record last returned (the header is record 1).
  int64_t record_number() const { return record_number_; }

 private:
  std::istream& in_;
  std::string line_;
  int64_t record_number_ = 0;
  int64_t line_number_ = 0;
};

// Appends `field`, quoted only if it contains a comma, quote, CR or LF.
void AppendCsvField(std::string& out, std::string_view field);

// Joins fields with commas and terminates the record with CRLF.
void AppendCsvRecord(std::string& out, std::span<const std::string> fields);
void AppendCsvRecord(std::string& out, std::span<const std::string_view> fields);

}  // namespace transit_anon

#endif  // TRANSIT_ANON_CSV_H_
