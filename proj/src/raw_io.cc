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

#include "transit_anon/raw_io.h"

#include <fstream>

#include "absl/strings/ascii.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_join.h"
#include "transit_anon/file_util.h"

namespace transit_anon {
namespace {

void AppendView(std::string* out, std::string_view s) { out->append(s); }

// Substrings that mark a column as customer personal data.
constexpr std::array<std::string_view, 10> kPiiMarkers = {
    "customer", "holder", "address", "email",    "phone",
    "account",  "birth",  "ssn",     "surname", "first_name",
};

absl::Status FieldError(std::string_view column, std::string_view value,
                        std::string_view expected) {
  return absl::InvalidArgumentError(absl::StrCat(std::string(column), ": expected ",
                   std::string(expected), ", got '", std::string(value), "'"));
}

absl::StatusOr<int64_t> RequiredInt(std::span<const std::string> f, size_t i) {
  auto v = ParseInteger(f[i]);
  if (!v) return FieldError(kRawColumns[i], f[i], "integer");
  return *v;
}

absl::StatusOr<std::optional<int64_t>> OptionalInt(
    std::span<const std::string> f, size_t i) {
  if (f[i].empty()) return std::optional<int64_t>();
  auto v = ParseInteger(f[i]);
  if (!v) return FieldError(kRawColumns[i], f[i], "integer or empty");
  return std::optional<int64_t>(*v);
}

std::optional<std::string> OptionalText(const std::string& s) {
  if (s.empty()) return std::nullopt;
  return s;
}

void AppendOptional(std::string& out, const std::optional<int64_t>& v) {
  if (v) out.append(absl::StrCat(*v));
}

}  // namespace

absl::Status CheckRawHeader(std::span<const std::string> header) {
  for (const std::string& column : header) {
    const std::string lower = absl::AsciiStrToLower(column);
    for (std::string_view marker : kPiiMarkers) {
      if (lower.find(marker) != std::string::npos) {
        return absl::InvalidArgumentError(absl::StrCat(
            "input column '", column,
            "' looks like personal information; raw input must not carry "
            "customer identity fields"));
      }
    }
  }
  if (header.size() != kRawColumns.size() ||
      !std::equal(header.begin(), header.end(), kRawColumns.begin())) {
    return absl::InvalidArgumentError(
        absl::StrCat("raw header must be exactly: ",
                     absl::StrJoin(kRawColumns, ",", AppendView),
                     "; got: ", absl::StrJoin(header, ",")));
  }
  return absl::OkStatus();
}

absl::StatusOr<RawTransaction> ParseRawFields(
    std::span<const std::string> f) {
  if (f.size() != kRawColumns.size()) {
    return absl::InvalidArgumentError(absl::StrCat(
        "expected ", kRawColumns.size(), " fields, got ", f.size()));
  }
  RawTransaction r;
  r.card_serial = f[0];

  auto on = ParseDateTime(f[1]);
  if (!on) return FieldError(kRawColumns[1], f[1], "YYYY-MM-DD HH:MM:SS");
  r.tag_on_at = *on;
  if (!f[2].empty()) {
    auto off = ParseDateTime(f[2]);
    if (!off) {
      return FieldError(kRawColumns[2], f[2], "YYYY-MM-DD HH:MM:SS or empty");
    }
    r.tag_off_at = *off;
  }

  auto agency = RequiredInt(f, 3);
  if (!agency.ok()) return agency.status();
  r.agency_id = *agency;
  r.agency_name = f[4];

  auto route = OptionalInt(f, 5);
  if (!route.ok()) return route.status();
  r.route_id = *route;
  r.route_name = OptionalText(f[6]);

  auto on_location = RequiredInt(f, 7);
  if (!on_location.ok()) return on_location.status();
  r.tag_on_location_id = *on_location;
  r.tag_on_location_name = f[8];

  auto off_location = OptionalInt(f, 9);
  if (!off_location.ok()) return off_location.status();
  r.tag_off_location_id = *off_location;
  r.tag_off_location_name = OptionalText(f[10]);

  auto fare = Money::Parse(f[11]);
  if (!fare) return FieldError(kRawColumns[11], f[11], "decimal amount");
  r.fare_amount = *fare;

  auto product = RequiredInt(f, 12);
  if (!product.ok()) return product.status();
  r.payment_product_id = *product;
  r.payment_product_name = f[13];
  return r;
}

std::string RawHeaderLine() {
  std::string out;
  AppendCsvRecord(out, std::span<const std::string_view>(kRawColumns));
  return out;
}

void AppendRawRow(std::string& out, const RawTransaction& r) {
  AppendCsvField(out, r.card_serial);
  out.push_back(',');
  out.append(FormatDateTime(r.tag_on_at));
  out.push_back(',');
  if (r.tag_off_at) out.append(FormatDateTime(*r.tag_off_at));
  out.push_back(',');
  out.append(absl::StrCat(r.agency_id));
  out.push_back(',');
  AppendCsvField(out, r.agency_name);
  out.push_back(',');
  AppendOptional(out, r.route_id);
  out.push_back(',');
  if (r.route_name) AppendCsvField(out, *r.route_name);
  out.push_back(',');
  out.append(absl::StrCat(r.tag_on_location_id));
  out.push_back(',');
  AppendCsvField(out, r.tag_on_location_name);
  out.push_back(',');
  AppendOptional(out, r.tag_off_location_id);
  out.push_back(',');
  if (r.tag_off_location_name) AppendCsvField(out, *r.tag_off_location_name);
  out.push_back(',');
  out.append(r.fare_amount.ToString());
  out.push_back(',');
  out.append(absl::StrCat(r.payment_product_id));
  out.push_back(',');
  AppendCsvField(out, r.payment_product_name);
  out.append("\r\n");
}

absl::StatusOr<std::optional<RawRow>> RawCsvReader::Next() {
  while (true) {
    auto more = csv_.Next(fields_);
    if (!more.ok()) return more.status();
    if (!*more) return std::optional<RawRow>();
    if (expect_header_) {
      expect_header_ = false;
      if (auto status = CheckRawHeader(fields_); !status.ok()) return status;
      continue;
    }
    // Blank lines carry no record.
    if (fields_.size() == 1 && fields_[0].empty()) continue;
    ++row_number_;
    return std::optional<RawRow>(RawRow{row_number_, ParseRawFields(fields_)});
  }
}

absl::StatusOr<std::vector<RawTransaction>> ReadRawCsv(
    const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return absl::NotFoundError(absl::StrCat("cannot open ", path));
  RawCsvReader reader(in);
  std::vector<RawTransaction> records;
  while (true) {
    auto row = reader.Next();
    if (!row.ok()) {
      return absl::InvalidArgumentError(
          absl::StrCat(path, ": ", row.status().message()));
    }
    if (!row->has_value()) break;
    RawRow& r = **row;
    if (!r.record.ok()) {
      return absl::InvalidArgumentError(absl::StrCat(
          path, ": row ", r.row_number, ": ", r.record.status().message()));
    }
    records.push_back(*std::move(r.record));
  }
  if (in.bad()) return absl::DataLossError(absl::StrCat("read failed: ", path));
  return records;
}

absl::Status WriteRawCsv(const std::string& path,
                         std::span<const RawTransaction> records) {
  auto writer = AtomicFileWriter::Open(path);
  if (!writer.ok()) return writer.status();
  std::string buffer = RawHeaderLine();
  for (const RawTransaction& r : records) {
    AppendRawRow(buffer, r);
    if (buffer.size() > (1 << 20)) {
      writer->Append(buffer);
      buffer.clear();
    }
  }
  writer->Append(buffer);
  auto digest = writer->Commit();
  return digest.status();
}

}  // namespace transit_anon
