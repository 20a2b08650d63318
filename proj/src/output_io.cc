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

#include "transit_anon/output_io.h"

#include <fstream>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "absl/strings/str_join.h"
#include "transit_anon/csv.h"
#include "transit_anon/file_util.h"

namespace transit_anon {
namespace {

absl::Status Bad(size_t column, std::string_view value) {
  return absl::InvalidArgumentError(absl::StrCat(
      std::string(kAnonymizedFieldNames[column]), ": unparseable value '",
      std::string(value), "'"));
}

// Parses an int field, optional if `allow_empty`.
absl::StatusOr<std::optional<int64_t>> IntField(std::span<const std::string> f,
                                                size_t i, bool allow_empty) {
  if (f[i].empty()) {
    if (allow_empty) return std::optional<int64_t>();
    return Bad(i, f[i]);
  }
  auto v = ParseInteger(f[i]);
  if (!v) return Bad(i, f[i]);
  return std::optional<int64_t>(*v);
}

}  // namespace

std::string MonthFileName(int year, int month) {
  return absl::StrFormat("anon_%04d_%02d.csv", year, month);
}

std::string AnonymizedHeaderLine() {
  std::string out;
  AppendCsvRecord(out, std::span<const std::string_view>(kAnonymizedFieldNames));
  return out;
}

void AppendAnonymizedRow(std::string& out, const AnonymizedRecord& r) {
  auto opt_int = [&out](const std::optional<int64_t>& v) {
    if (v) out.append(absl::StrCat(*v));
  };
  out.append(r.clipper_card_id);
  out.push_back(',');
  out.append(absl::StrCat(r.trip_sequence_id, ",", r.agency_id, ","));
  AppendCsvField(out, r.agency_name);
  out.push_back(',');
  opt_int(r.route_id);
  out.push_back(',');
  if (r.route_name) AppendCsvField(out, *r.route_name);
  out.push_back(',');
  out.append(r.fare_amount.ToString());
  out.append(absl::StrCat(",", r.payment_product_id, ","));
  AppendCsvField(out, r.payment_product_name);
  out.push_back(',');
  out.append(r.tag_on_time.ToString());
  out.append(absl::StrCat(",", r.tag_on_location_id, ","));
  AppendCsvField(out, r.tag_on_location_name);
  out.push_back(',');
  if (r.tag_off_time) out.append(r.tag_off_time->ToString());
  out.push_back(',');
  opt_int(r.tag_off_location_id);
  out.push_back(',');
  if (r.tag_off_location_name) AppendCsvField(out, *r.tag_off_location_name);
  out.append(absl::StrCat(",", r.year, ",", r.month, ",", r.day_of_week_id,
                          ","));
  AppendCsvField(out, r.day_of_week);
  out.append(absl::StrCat(",", r.random_week_id, "\r\n"));
}

absl::StatusOr<AnonymizedRecord> ParseAnonymizedFields(
    std::span<const std::string> f) {
  if (f.size() != kAnonymizedFieldNames.size()) {
    return absl::InvalidArgumentError(absl::StrCat(
        "expected ", kAnonymizedFieldNames.size(), " fields, got ", f.size()));
  }
  AnonymizedRecord r;
  r.clipper_card_id = f[0];

  // Required integer fields and their destinations.
  struct IntSlot {
    size_t column;
    int64_t* target;
  };
  int64_t year = 0, month = 0, dow = 0, week = 0;
  for (const IntSlot& slot : {IntSlot{1, &r.trip_sequence_id},
                              IntSlot{2, &r.agency_id},
                              IntSlot{7, &r.payment_product_id},
                              IntSlot{10, &r.tag_on_location_id},
                              IntSlot{15, &year}, IntSlot{16, &month},
                              IntSlot{17, &dow}, IntSlot{19, &week}}) {
    auto v = IntField(f, slot.column, false);
    if (!v.ok()) return v.status();
    *slot.target = **v;
  }
  r.year = static_cast<int>(year);
  r.month = static_cast<int>(month);
  r.day_of_week_id = static_cast<int>(dow);
  r.random_week_id = static_cast<int>(week);

  r.agency_name = f[3];
  auto route = IntField(f, 4, true);
  if (!route.ok()) return route.status();
  r.route_id = *route;
  if (!f[5].empty()) r.route_name = f[5];

  auto fare = Money::Parse(f[6]);
  if (!fare) return Bad(6, f[6]);
  r.fare_amount = *fare;
  r.payment_product_name = f[8];

  auto on = TimeOfDay::Parse(f[9]);
  if (!on) return Bad(9, f[9]);
  r.tag_on_time = *on;
  r.tag_on_location_name = f[11];

  if (!f[12].empty()) {
    auto off = TimeOfDay::Parse(f[12]);
    if (!off) return Bad(12, f[12]);
    r.tag_off_time = *off;
  }
  auto off_location = IntField(f, 13, true);
  if (!off_location.ok()) return off_location.status();
  r.tag_off_location_id = *off_location;
  if (!f[14].empty()) r.tag_off_location_name = f[14];
  r.day_of_week = f[18];
  return r;
}

absl::StatusOr<std::string> WriteMonth(std::span<const AnonymizedRecord> rows,
                                       const std::string& path) {
  auto writer = AtomicFileWriter::Open(path);
  if (!writer.ok()) return writer.status();
  std::string buffer = AnonymizedHeaderLine();
  for (const AnonymizedRecord& r : rows) {
    AppendAnonymizedRow(buffer, r);
    if (buffer.size() > (1 << 20)) {
      writer->Append(buffer);
      buffer.clear();
    }
  }
  writer->Append(buffer);
  return writer->Commit();
}

absl::StatusOr<std::vector<AnonymizedRecord>> ReadMonth(
    const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return absl::NotFoundError(absl::StrCat("cannot open ", path));
  CsvReader reader(in);
  std::vector<std::string> fields;
  auto header = reader.Next(fields);
  if (!header.ok()) return header.status();
  if (!*header || fields.size() != kAnonymizedFieldNames.size() ||
      !std::equal(fields.begin(), fields.end(),
                  kAnonymizedFieldNames.begin())) {
    return absl::InvalidArgumentError(
        absl::StrCat(path, ": header is not the release schema"));
  }
  std::vector<AnonymizedRecord> rows;
  while (true) {
    auto more = reader.Next(fields);
    if (!more.ok()) return more.status();
    if (!*more) break;
    auto row = ParseAnonymizedFields(fields);
    if (!row.ok()) {
      return absl::InvalidArgumentError(absl::StrCat(
          path, ": record ", reader.record_number(), ": ",
          row.status().message()));
    }
    rows.push_back(*std::move(row));
  }
  return rows;
}

}  // namespace transit_anon
