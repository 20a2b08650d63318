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

// Domain types shared by every stage: raw fare transactions as they arrive
// from the fare system (already free of personal information), and the
// anonymized twenty-column release row.

#ifndef TRANSIT_ANON_MODEL_H_
#define TRANSIT_ANON_MODEL_H_

#include <array>
#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "absl/time/civil_time.h"

namespace transit_anon {

// A local wall-clock time of day with second resolution, [00:00:00, 24:00:00).
class TimeOfDay {
 public:
  static constexpr int kSecondsPerDay = 86400;

  constexpr TimeOfDay() = default;

  // Out-of-range components are a programming error; use Parse() for input.
  static constexpr TimeOfDay FromSeconds(int seconds) {
    return TimeOfDay(seconds);
  }
  static constexpr TimeOfDay FromHms(int hour, int minute, int second = 0) {
    return TimeOfDay(hour * 3600 + minute * 60 + second);
  }
  static TimeOfDay Of(absl::CivilSecond ts) {
    return FromHms(ts.hour(), ts.minute(), ts.second());
  }

  // Strict "HH:MM:SS" (two digits each). Returns nullopt on any deviation.
  static std::optional<TimeOfDay> Parse(std::string_view text);
  // Strict "HH:MM".
  static std::optional<TimeOfDay> ParseHoursMinutes(std::string_view text);

  constexpr int seconds() const { return seconds_; }
  constexpr int hour() const { return seconds_ / 3600; }
  constexpr int minute() const { return (seconds_ / 60) % 60; }
  constexpr int second() const { return seconds_ % 60; }

  // "HH:MM:SS".
  std::string ToString() const;

  friend constexpr auto operator<=>(TimeOfDay, TimeOfDay) = default;

 private:
  constexpr explicit TimeOfDay(int seconds) : seconds_(seconds) {}
  int seconds_ = 0;
};

// US dollars held as integer cents. Never binary floating point.
class Money {
 public:
  constexpr Money() = default;
  static constexpr Money FromCents(int64_t cents) { return Money(cents); }

  // Accepts an optional leading '-', digits, and at most two decimals
  // ("2", "2.5", "2.50", "0.05"). Anything else is rejected.
  static std::optional<Money> Parse(std::string_view text);

  constexpr int64_t cents() const { return cents_; }

  // Always two decimal places: "2.50", "0.00", "-1.25".
  std::string ToString() const;

  friend constexpr auto operator<=>(Money, Money) = default;

 private:
  constexpr explicit Money(int64_t cents) : cents_(cents) {}
  int64_t cents_ = 0;
};

// "YYYY-MM-DD HH:MM:SS"; the fields must form a real calendar instant.
std::optional<absl::CivilSecond> ParseDateTime(std::string_view text);
std::string FormatDateTime(absl::CivilSecond ts);

// "YYYY-MM-DD".
std::optional<absl::CivilDay> ParseDate(std::string_view text);
std::string FormatDate(absl::CivilDay day);

// Strict base-10 integer, optional leading '-', no surrounding spaces.
std::optional<int64_t> ParseInteger(std::string_view text);

// Day-of-week numbering used in the release: 1 = Sunday ... 7 = Saturday.
// This is the only convention under which Wednesday is 4.
int DayOfWeekId(absl::Weekday weekday);
int DayOfWeekId(absl::CivilDay day);
// Empty view for ids outside 1..7.
std::string_view DayOfWeekName(int day_of_week_id);
std::optional<int> DayOfWeekIdFromName(std::string_view name);

// One fare event before anonymization. The serial is the true card id; no
// name, address or account field exists anywhere in the model.
struct RawTransaction {
  std::string card_serial;
  absl::CivilSecond tag_on_at;
  std::optional<absl::CivilSecond> tag_off_at;
  int64_t agency_id = 0;
  std::string agency_name;
  std::optional<int64_t> route_id;
  std::optional<std::string> route_name;
  int64_t tag_on_location_id = 0;
  std::string tag_on_location_name;
  std::optional<int64_t> tag_off_location_id;
  std::optional<std::string> tag_off_location_name;
  Money fare_amount;
  int64_t payment_product_id = 0;
  std::string payment_product_name;

  friend bool operator==(const RawTransaction&,
                         const RawTransaction&) = default;
};

struct Violation {
  std::string field;
  std::string rule;

  friend bool operator==(const Violation&, const Violation&) = default;
};

// Checks every RawTransaction invariant. An empty result means the record is
// accepted by all downstream stages.
std::vector<Violation> ValidateRaw(const RawTransaction& record);

// The release row, one field per column of the published schema, in order.
struct AnonymizedRecord {
  std::string clipper_card_id;
  int64_t trip_sequence_id = 0;
  int64_t agency_id = 0;
  std::string agency_name;
  std::optional<int64_t> route_id;
  std::optional<std::string> route_name;
  Money fare_amount;
  int64_t payment_product_id = 0;
  std::string payment_product_name;
  TimeOfDay tag_on_time;
  int64_t tag_on_location_id = 0;
  std::string tag_on_location_name;
  std::optional<TimeOfDay> tag_off_time;
  std::optional<int64_t> tag_off_location_id;
  std::optional<std::string> tag_off_location_name;
  int year = 0;
  int month = 0;
  int day_of_week_id = 0;
  std::string day_of_week;
  int random_week_id = 0;

  friend bool operator==(const AnonymizedRecord&,
                         const AnonymizedRecord&) = default;
};

inline constexpr std::array<std::string_view, 20> kAnonymizedFieldNames = {
    "ClipperCardID",      "TripSequenceID",   "AgencyID",
    "AgencyName",         "RouteID",          "RouteName",
    "FareAmount",         "PaymentProductID", "PaymentProductName",
    "TagOnTime_Time",     "TagOnLocationId",  "TagOnLocationName",
    "TagOffTime_Time",    "TagOffLocationId", "TagOffLocationName",
    "Year",               "Month",            "DayOfWeekID",
    "DayOfWeek",          "RandomWeekID",
};

}  // namespace transit_anon

#endif  // TRANSIT_ANON_MODEL_H_
