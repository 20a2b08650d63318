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

#include <string>

#include "gmock/gmock.h"
#include "gtest/gtest.h"
#include "test_util.h"

namespace transit_anon {
namespace {

using ::testing::ElementsAre;
using ::testing::IsEmpty;
using ::transit_anon::testing::BusTrip;
using ::transit_anon::testing::RailTrip;

TEST(TimeOfDayTest, ParsesStrictClockText) {
  EXPECT_EQ(TimeOfDay::Parse("17:30:00"), TimeOfDay::FromHms(17, 30));
  EXPECT_EQ(TimeOfDay::Parse("00:00:00"), TimeOfDay::FromSeconds(0));
  EXPECT_EQ(TimeOfDay::Parse("23:59:59"), TimeOfDay::FromSeconds(86399));
  for (const char* bad : {"24:00:00", "7:30:00", "17:60:00", "17:30:60",
                          "17:30", "17-30-00", " 17:30:00", ""}) {
    EXPECT_EQ(TimeOfDay::Parse(bad), std::nullopt) << bad;
  }
  EXPECT_EQ(TimeOfDay::ParseHoursMinutes("03:00"), TimeOfDay::FromHms(3, 0));
  EXPECT_EQ(TimeOfDay::ParseHoursMinutes("3:00"), std::nullopt);
}

TEST(TimeOfDayTest, FormatsRoundTripEverySecond) {
  for (int s = 0; s < TimeOfDay::kSecondsPerDay; ++s) {
    const TimeOfDay t = TimeOfDay::FromSeconds(s);
    ASSERT_EQ(TimeOfDay::Parse(t.ToString()), t) << s;
  }
  EXPECT_EQ(TimeOfDay::FromHms(20, 20).ToString(), "20:20:00");
}

TEST(MoneyTest, ParsesAndFormatsExactCents) {
  EXPECT_EQ(Money::Parse("0")->cents(), 0);
  EXPECT_EQ(Money::Parse("2.5")->cents(), 250);
  EXPECT_EQ(Money::Parse("2.50")->cents(), 250);
  EXPECT_EQ(Money::Parse("0.05")->cents(), 5);
  EXPECT_EQ(Money::Parse("-1.25")->cents(), -125);
  for (const char* bad : {"", "1.234", "1.", ".5", "1,00", "$1", "1e2", "-"}) {
    EXPECT_EQ(Money::Parse(bad), std::nullopt) << bad;
  }
  EXPECT_EQ(Money::FromCents(0).ToString(), "0.00");
  EXPECT_EQ(Money::FromCents(210).ToString(), "2.10");
  EXPECT_EQ(Money::FromCents(-125).ToString(), "-1.25");
  for (int64_t c = -1000; c <= 1000; ++c) {
    ASSERT_EQ(Money::Parse(Money::FromCents(c).ToString())->cents(), c);
  }
}

TEST(DateTimeTest, RejectsImpossibleCalendarInstants) {
  EXPECT_EQ(ParseDateTime("2013-10-09 17:30:00"),
            absl::CivilSecond(2013, 10, 9, 17, 30, 0));
  EXPECT_EQ(ParseDateTime("2013-02-30 10:00:00"), std::nullopt);
  EXPECT_EQ(ParseDateTime("2013-10-09T17:30:00"), std::nullopt);
  EXPECT_EQ(ParseDateTime("2013-10-09 24:00:00"), std::nullopt);
  EXPECT_EQ(ParseDate("2012-02-29"), absl::CivilDay(2012, 2, 29));
  EXPECT_EQ(ParseDate("2013-02-29"), std::nullopt);
  EXPECT_EQ(FormatDateTime(absl::CivilSecond(2013, 1, 2, 3, 4, 5)),
            "2013-01-02 03:04:05");
}

TEST(DayOfWeekTest, WednesdayIsFour) {
  // 2013-10-09 was a Wednesday.
  EXPECT_EQ(DayOfWeekId(absl::CivilDay(2013, 10, 9)), 4);
  EXPECT_EQ(DayOfWeekName(4), "Wednesday");
  EXPECT_EQ(DayOfWeekId(absl::Weekday::sunday), 1);
  EXPECT_EQ(DayOfWeekId(absl::Weekday::saturday), 7);
  EXPECT_EQ(DayOfWeekName(0), "");
  EXPECT_EQ(DayOfWeekName(8), "");
  for (int id = 1; id <= 7; ++id) {
    EXPECT_EQ(DayOfWeekIdFromName(DayOfWeekName(id)), id);
  }
  EXPECT_EQ(DayOfWeekIdFromName("wednesday"), std::nullopt);
}

TEST(ValidateRawTest, CompleteRailTripIsOk) {
  const RawTransaction r =
      RailTrip("CS0000000001", absl::CivilSecond(2013, 10, 9, 8, 12, 31),
               absl::CivilSecond(2013, 10, 9, 8, 45, 2));
  EXPECT_THAT(ValidateRaw(r), IsEmpty());
  EXPECT_THAT(ValidateRaw(BusTrip("CS1", absl::CivilSecond(2013, 10, 9, 8))),
              IsEmpty());
}

TEST(ValidateRawTest, TagOffBeforeTagOn) {
  const RawTransaction r =
      RailTrip("CS0000000001", absl::CivilSecond(2013, 10, 9, 8, 0, 0),
               absl::CivilSecond(2013, 10, 9, 7, 0, 0));
  EXPECT_THAT(ValidateRaw(r),
              ElementsAre(Violation{"tag_off_at", "tag_off precedes tag_on"}));
}

TEST(ValidateRawTest, RoutePairIncomplete) {
  RawTransaction r = BusTrip("CS1", absl::CivilSecond(2013, 10, 9, 8));
  r.route_name.reset();
  EXPECT_THAT(ValidateRaw(r),
              ElementsAre(Violation{"route_id", "route pair incomplete"}));
  r.route_name = "F";
  r.route_id.reset();
  EXPECT_THAT(ValidateRaw(r),
              ElementsAre(Violation{"route_id", "route pair incomplete"}));
}

TEST(ValidateRawTest, OtherRules) {
  RawTransaction r =
      RailTrip("CS1", absl::CivilSecond(2013, 10, 9, 8),
               absl::CivilSecond(2013, 10, 9, 9));
  r.tag_off_location_name.reset();
  ASSERT_EQ(ValidateRaw(r).size(), 1u);
  EXPECT_EQ(ValidateRaw(r)[0].rule, "tag_off fields incomplete");

  r = BusTrip("", absl::CivilSecond(2013, 10, 9, 8));
  ASSERT_EQ(ValidateRaw(r).size(), 1u);
  EXPECT_EQ(ValidateRaw(r)[0].rule, "card serial empty");

  r = BusTrip("CS1", absl::CivilSecond(2013, 10, 9, 8));
  r.fare_amount = Money::FromCents(-1);
  ASSERT_EQ(ValidateRaw(r).size(), 1u);
  EXPECT_EQ(ValidateRaw(r)[0].rule, "fare negative");
}

TEST(ValidateRawTest, TagOffEqualToTagOnIsAllowed) {
  const absl::CivilSecond t(2013, 10, 9, 8);
  EXPECT_THAT(ValidateRaw(RailTrip("CS1", t, t)), IsEmpty());
}

TEST(AnonymizedFieldNamesTest, TwentyColumnsInOrder) {
  ASSERT_EQ(kAnonymizedFieldNames.size(), 20u);
  EXPECT_EQ(kAnonymizedFieldNames.front(), "ClipperCardID");
  EXPECT_EQ(kAnonymizedFieldNames[9], "TagOnTime_Time");
  EXPECT_EQ(kAnonymizedFieldNames[12], "TagOffTime_Time");
  EXPECT_EQ(kAnonymizedFieldNames.back(), "RandomWeekID");
}

}  // namespace
}  // namespace transit_anon
