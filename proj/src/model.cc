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

#include "transit_anon/model.h"

#include <charconv>
#include <cstdlib>

#include "absl/strings/str_format.h"

namespace transit_anon {
namespace {

constexpr std::array<std::string_view, 7> kDayNames = {
    "Sunday",   "Monday", "Tuesday",  "Wednesday",
    "Thursday", "Friday", "Saturday",
};

// Parses exactly `text.size()` decimal digits.
std::optional<int> ParseDigits(std::string_view text) {
  if (text.empty()) return std::nullopt;
  int value = 0;
  for (char c : text) {
    if (c < '0' || c > '9') return std::nullopt;
    value = value * 10 + (c - '0');
  }
  return value;
}

}  // namespace

std::optional<TimeOfDay> TimeOfDay::Parse(std::string_view text) {
  if (text.size() != 8 || text[2] != ':' || text[5] != ':') return std::nullopt;
  auto h = ParseDigits(text.substr(0, 2));
  auto m = ParseDigits(text.substr(3, 2));
  auto s = ParseDigits(text.substr(6, 2));
  if (!h || !m || !s || *h > 23 || *m > 59 || *s > 59) return std::nullopt;
  return FromHms(*h, *m, *s);
}

std::optional<TimeOfDay> TimeOfDay::ParseHoursMinutes(std::string_view text) {
  if (text.size() != 5 || text[2] != ':') return std::nullopt;
  auto h = ParseDigits(text.substr(0, 2));
  auto m = ParseDigits(text.substr(3, 2));
  if (!h || !m || *h > 23 || *m > 59) return std::nullopt;
  return FromHms(*h, *m, 0);
}

std::string TimeOfDay::ToString() const {
  return absl::StrFormat("%02d:%02d:%02d", hour(), minute(), second());
}

std::optional<Money> Money::Parse(std::string_view text) {
  bool negative = false;
  if (!text.empty() && text.front() == '-') {
    negative = true;
    text.remove_prefix(1);
  }
  const size_t dot = text.find('.');
  std::string_view whole = text.substr(0, dot);
  std::string_view frac =
      dot == std::string_view::npos ? std::string_view() : text.substr(dot + 1);
  if (whole.empty() || whole.size() > 15) return std::nullopt;
  if (dot != std::string_view::npos && (frac.empty() || frac.size() > 2)) {
    return std::nullopt;
  }
  int64_t units = 0;
  for (char c : whole) {
    if (c < '0' || c > '9') return std::nullopt;
    units = units * 10 + (c - '0');
  }
  int64_t cents = 0;
  for (size_t i = 0; i < 2; ++i) {
    cents *= 10;
    if (i < frac.size()) {
      if (frac[i] < '0' || frac[i] > '9') return std::nullopt;
      cents += frac[i] - '0';
    }
  }
  const int64_t total = units * 100 + cents;
  return Money(negative ? -total : total);
}

std::string Money::ToString() const {
  const int64_t magnitude = cents_ < 0 ? -cents_ : cents_;
  return absl::StrFormat("%s%d.%02d", cents_ < 0 ? "-" : "", magnitude / 100,
                         magnitude % 100);
}

std::optional<absl::CivilSecond> ParseDateTime(std::string_view text) {
  if (text.size() != 19 || text[10] != ' ') return std::nullopt;
  auto day = ParseDate(text.substr(0, 10));
  auto time = TimeOfDay::Parse(text.substr(11));
  if (!day || !time) return std::nullopt;
  return absl::CivilSecond(day->year(), day->month(), day->day(), time->hour(),
                           time->minute(), time->second());
}

std::string FormatDateTime(absl::CivilSecond ts) {
  return absl::StrFormat("%04d-%02d-%02d %02d:%02d:%02d", ts.year(), ts.month(),
                         ts.day(), ts.hour(), ts.minute(), ts.second());
}

std::optional<absl::CivilDay> ParseDate(std::string_view text) {
  if (text.size() != 10 || text[4] != '-' || text[7] != '-') {
    return std::nullopt;
  }
  auto y = ParseDigits(text.substr(0, 4));
  auto m = ParseDigits(text.substr(5, 2));
  auto d = ParseDigits(text.substr(8, 2));
  if (!y || !m || !d) return std::nullopt;
  // CivilDay normalizes out-of-range fields; reject anything it had to move.
  const absl::CivilDay day(*y, *m, *d);
  if (day.year() != *y || day.month() != *m || day.day() != *d) {
    return std::nullopt;
  }
  return day;
}

std::string FormatDate(absl::CivilDay day) {
  return absl::StrFormat("%04d-%02d-%02d", day.year(), day.month(), day.day());
}

std::optional<int64_t> ParseInteger(std::string_view text) {
  int64_t value = 0;
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (text.empty() || ec != std::errc() || ptr != end) return std::nullopt;
  return value;
}

int DayOfWeekId(absl::Weekday weekday) {
  switch (weekday) {
    case absl::Weekday::sunday:
      return 1;
    case absl::Weekday::monday:
      return 2;
    case absl::Weekday::tuesday:
      return 3;
    case absl::Weekday::wednesday:
      return 4;
    case absl::Weekday::thursday:
      return 5;
    case absl::Weekday::friday:
      return 6;
    case absl::Weekday::saturday:
      return 7;
  }
  return 0;
}

int DayOfWeekId(absl::CivilDay day) {
  return DayOfWeekId(absl::GetWeekday(day));
}

std::string_view DayOfWeekName(int day_of_week_id) {
  if (day_of_week_id < 1 || day_of_week_id > 7) return {};
  return kDayNames[day_of_week_id - 1];
}

std::optional<int> DayOfWeekIdFromName(std::string_view name) {
  for (size_t i = 0; i < kDayNames.size(); ++i) {
    if (kDayNames[i] == name) return static_cast<int>(i) + 1;
  }
  return std::nullopt;
}

std::vector<Violation> ValidateRaw(const RawTransaction& record) {
  std::vector<Violation> violations;
  if (record.card_serial.empty()) {
    violations.push_back({"card_serial", "card serial empty"});
  }
  if (record.route_id.has_value() != record.route_name.has_value()) {
    violations.push_back({"route_id", "route pair incomplete"});
  }
  const bool has_off_time = record.tag_off_at.has_value();
  if (has_off_time != record.tag_off_location_id.has_value() ||
      has_off_time != record.tag_off_location_name.has_value()) {
    violations.push_back({"tag_off_at", "tag_off fields incomplete"});
  }
  if (has_off_time && *record.tag_off_at < record.tag_on_at) {
    violations.push_back({"tag_off_at", "tag_off precedes tag_on"});
  }
  if (record.fare_amount.cents() < 0) {
    violations.push_back({"fare_amount", "fare negative"});
  }
  return violations;
}

}  // namespace transit_anon
