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

// Raw transaction CSV. Header row required, columns exactly kRawColumns in
// order, datetimes "YYYY-MM-DD HH:MM:SS" local civil time, money as a decimal
// with at most two places, absent optionals as empty fields.

#ifndef TRANSIT_ANON_RAW_IO_H_
#define TRANSIT_ANON_RAW_IO_H_

#include <array>
#include <cstdint>
#include <istream>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "transit_anon/csv.h"
#include "transit_anon/model.h"

namespace transit_anon {

inline constexpr std::array<std::string_view, 14> kRawColumns = {
    "card_serial",          "tag_on_at",
    "tag_off_at",           "agency_id",
    "agency_name",          "route_id",
    "route_name",           "tag_on_location_id",
    "tag_on_location_name", "tag_off_location_id",
    "tag_off_location_name", "fare_amount",
    "payment_product_id",   "payment_product_name",
};

// Rejects any header that is not exactly kRawColumns. Columns that look like
// personal information (name/address/account/contact fields of a customer)
// get a dedicated message: such data must never reach this tool.
absl::Status CheckRawHeader(std::span<const std::string> header);

// Field-level parse of one data record. Does not apply ValidateRaw.
absl::StatusOr<RawTransaction> ParseRawFields(
    std::span<const std::string> fields);

void AppendRawRow(std::string& out, const RawTransaction& record);
std::string RawHeaderLine();

// One data row from a raw CSV stream. `record` holds the parse error for
// unparseable rows; the stream itself can keep going.
struct RawRow {
  int64_t row_number = 0;  // 1 = first data row
  absl::StatusOr<RawTransaction> record;
};

class RawCsvReader {
 public:
  // With `has_header`, the first record must pass CheckRawHeader.
  explicit RawCsvReader(std::istream& in, bool has_header = true)
      : csv_(in), expect_header_(has_header) {}

  // nullopt at end of input. A non-OK status is unrecoverable (bad header,
  // broken quoting, I/O failure).
  absl::StatusOr<std::optional<RawRow>> Next();

 private:
  CsvReader csv_;
  bool expect_header_;
  int64_t row_number_ = 0;
  std::vector<std::string> fields_;
};

absl::StatusOr<std::vector<RawTransaction>> ReadRawCsv(const std::string& path);
absl::Status WriteRawCsv(const std::string& path,
                         std::span<const RawTransaction> records);

}  // namespace transit_anon

#endif  // TRANSIT_ANON_RAW_IO_H_
