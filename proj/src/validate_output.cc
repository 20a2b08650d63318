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

#include "transit_anon/validate_output.h"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>

#include "absl/container/flat_hash_map.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_join.h"
#include "transit_anon/csv.h"
#include "transit_anon/model.h"
#include "transit_anon/output_io.h"

namespace transit_anon {
namespace {

void AppendView(std::string* out, std::string_view s) { out->append(s); }

class Collector {
 public:
  explicit Collector(ConformanceReport& report) : report_(report) {}
  void Add(int64_t row, std::string rule, std::string detail) {
    ++report_.total_violations;
    if (report_.violations.size() < ConformanceReport::kMaxListed) {
      report_.violations.push_back({row, std::move(rule), std::move(detail)});
    }
  }

 private:
  ConformanceReport& report_;
};

bool IsUpperHex(std::string_view s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) {
    return (c >= '0' && c <= '9') || (c >= 'A' && c <= 'F');
  });
}

bool OnGrid(const TimeOfDay& t, int granularity_minutes) {
  return t.second() == 0 && t.minute() % granularity_minutes == 0;
}

}  // namespace

bool ConformanceReport::HasRule(std::string_view rule) const {
  return std::any_of(violations.begin(), violations.end(),
                     [&](const OutputViolation& v) { return v.rule == rule; });
}

std::string ConformanceReport::ToText() const {
  std::string out = absl::StrCat("rows: ", rows, "\ncard_days: ", card_days,
                                 "\ndays: ", distinct_days,
                                 "\nviolations: ", total_violations, "\n");
  for (const OutputViolation& v : violations) {
    absl::StrAppend(&out, "  ", v.row == 0 ? std::string("file")
                                           : absl::StrCat("row ", v.row),
                    ": ", v.rule, ": ", v.detail, "\n");
  }
  if (violations.size() < static_cast<size_t>(total_violations)) {
    absl::StrAppend(&out, "  ... ", total_violations - violations.size(),
                    " more\n");
  }
  return out;
}

ConformanceReport ValidateOutput(std::istream& in, int granularity_minutes) {
  ConformanceReport report;
  Collector add(report);
  CsvReader reader(in);
  std::vector<std::string> fields;

  auto header = reader.Next(fields);
  if (!header.ok()) {
    add.Add(0, "parse", std::string(header.status().message()));
    return report;
  }
  if (!*header || fields.size() != kAnonymizedFieldNames.size() ||
      !std::equal(fields.begin(), fields.end(),
                  kAnonymizedFieldNames.begin())) {
    add.Add(0, "header",
            absl::StrCat("expected ", absl::StrJoin(kAnonymizedFieldNames, ",", AppendView),
                         "; got ", absl::StrJoin(fields, ",")));
    return report;
  }

  std::set<int> years;
  std::set<int> months;
  std::map<int, std::set<int>> weekdays_by_week_id;
  absl::flat_hash_map<std::pair<int, std::string>, std::vector<int64_t>>
      sequences;

  while (true) {
    auto more = reader.Next(fields);
    if (!more.ok()) {
      add.Add(report.rows + 1, "parse", std::string(more.status().message()));
      break;
    }
    if (!*more) break;
    const int64_t row = ++report.rows;
    if (fields.size() != kAnonymizedFieldNames.size()) {
      add.Add(row, "field-count",
              absl::StrCat("expected 20 fields, got ", fields.size()));
      continue;
    }
    auto parsed = ParseAnonymizedFields(fields);
    if (!parsed.ok()) {
      add.Add(row, "parse", std::string(parsed.status().message()));
      continue;
    }
    const AnonymizedRecord& r = *parsed;

    if (!IsUpperHex(r.clipper_card_id)) {
      add.Add(row, "card-id",
              absl::StrCat("not uppercase hex: '", r.clipper_card_id, "'"));
    }
    if (!OnGrid(r.tag_on_time, granularity_minutes)) {
      add.Add(row, "truncation",
              absl::StrCat("TagOnTime_Time ", r.tag_on_time.ToString(),
                           " is not a ", granularity_minutes,
                           "-minute multiple"));
    }
    if (r.tag_off_time && !OnGrid(*r.tag_off_time, granularity_minutes)) {
      add.Add(row, "truncation",
              absl::StrCat("TagOffTime_Time ", r.tag_off_time->ToString(),
                           " is not a ", granularity_minutes,
                           "-minute multiple"));
    }
    if (r.route_id.has_value() != r.route_name.has_value()) {
      add.Add(row, "optional-pairing", "RouteID/RouteName incomplete");
    }
    if (r.tag_off_time.has_value() != r.tag_off_location_id.has_value() ||
        r.tag_off_time.has_value() != r.tag_off_location_name.has_value()) {
      add.Add(row, "optional-pairing", "tag-off fields incomplete");
    }
    if (r.trip_sequence_id < 1) {
      add.Add(row, "sequence-gap",
              absl::StrCat("TripSequenceID ", r.trip_sequence_id, " < 1"));
    }
    if (DayOfWeekName(r.day_of_week_id) != r.day_of_week) {
      add.Add(row, "weekday-pair",
              absl::StrCat("DayOfWeekID ", r.day_of_week_id, " with '",
                           r.day_of_week, "'"));
    }
    if (r.month < 1 || r.month > 12) {
      add.Add(row, "month-constant", absl::StrCat("Month ", r.month));
    }
    years.insert(r.year);
    months.insert(r.month);
    weekdays_by_week_id[r.random_week_id].insert(r.day_of_week_id);
    sequences[{r.random_week_id, r.clipper_card_id}].push_back(
        r.trip_sequence_id);
  }

  if (years.size() > 1) {
    add.Add(0, "year-constant",
            absl::StrCat("years: ", absl::StrJoin(years, ",")));
  }
  if (months.size() > 1) {
    add.Add(0, "month-constant",
            absl::StrCat("months: ", absl::StrJoin(months, ",")));
  }
  int expected_id = 1;
  for (const auto& [week_id, weekdays] : weekdays_by_week_id) {
    if (week_id != expected_id) {
      add.Add(0, "random-week-id",
              absl::StrCat("RandomWeekID values are not contiguous from 1: "
                           "expected ",
                           expected_id, ", found ", week_id));
      break;
    }
    ++expected_id;
  }
  for (const auto& [week_id, weekdays] : weekdays_by_week_id) {
    if (weekdays.size() > 1) {
      add.Add(0, "day-tuple",
              absl::StrCat("RandomWeekID ", week_id, " spans DayOfWeekIDs ",
                           absl::StrJoin(weekdays, ",")));
    }
  }

  // Deterministic reporting order.
  std::vector<std::pair<std::pair<int, std::string>, std::vector<int64_t>>>
      groups(sequences.begin(), sequences.end());
  std::sort(groups.begin(), groups.end());
  for (auto& [key, ids] : groups) {
    std::sort(ids.begin(), ids.end());
    for (size_t i = 0; i < ids.size(); ++i) {
      if (ids[i] != static_cast<int64_t>(i) + 1) {
        add.Add(0, "sequence-gap",
                absl::StrCat("card ", key.second, " on RandomWeekID ",
                             key.first, " has TripSequenceIDs ",
                             absl::StrJoin(ids, ",")));
        break;
      }
    }
  }
  report.card_days = static_cast<int64_t>(sequences.size());
  report.distinct_days = static_cast<int64_t>(weekdays_by_week_id.size());
  return report;
}

absl::StatusOr<ConformanceReport> ValidateOutputFile(const std::string& path,
                                                     int granularity_minutes) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return absl::NotFoundError(absl::StrCat("cannot open ", path));
  return ValidateOutput(in, granularity_minutes);
}

}  // namespace transit_anon
