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

#include "transit_anon/synthgen.h"

#include <map>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "gmock/gmock.h"
#include "gtest/gtest.h"
#include "test_util.h"
#include "transit_anon/config.h"
#include "transit_anon/model.h"
#include "transit_anon/raw_io.h"
#include "transit_anon/temporal.h"

namespace transit_anon {
namespace {

using testing::TempDir;

PopulationSpec Small(int64_t cards, uint64_t seed = 1) {
  PopulationSpec spec;
  spec.card_count = cards;
  spec.seed = seed;
  return spec;
}

TEST(SynthgenTest, EmptyPopulation) {
  auto month = GenerateMonth(Small(0));
  ASSERT_TRUE(month.ok());
  EXPECT_TRUE(month->trips.empty());
  EXPECT_TRUE(month->cards.empty());
}

TEST(SynthgenTest, InvalidSpecs) {
  PopulationSpec spec = Small(10);
  spec.commuter_fraction = 1.5;
  EXPECT_FALSE(ValidatePopulationSpec(spec).ok());
  spec = Small(10);
  spec.trips_per_commuter_workday = 1.5;
  EXPECT_FALSE(ValidatePopulationSpec(spec).ok());
  spec = Small(10);
  spec.month = 13;
  EXPECT_FALSE(GenerateMonth(spec).ok());
  spec = Small(-1);
  EXPECT_FALSE(ValidatePopulationSpec(spec).ok());
  spec = Small(10);
  spec.agencies.clear();
  EXPECT_FALSE(ValidatePopulationSpec(spec).ok());
  EXPECT_TRUE(ValidatePopulationSpec(Small(10)).ok());
}

TEST(SynthgenTest, EveryRecordIsValidRaw) {
  auto month = GenerateMonth(Small(500));
  ASSERT_TRUE(month.ok());
  std::set<std::string> serials;
  for (const SyntheticTrip& t : month->trips) {
    const RawTransaction r = month->Materialize(t);
    ASSERT_THAT(ValidateRaw(r), ::testing::IsEmpty());
    serials.insert(r.card_serial);
    // Distance-fared trips tag off and have no route; flat-fare ones the
    // reverse.
    EXPECT_EQ(r.tag_off_at.has_value(), !r.route_id.has_value());
    EXPECT_EQ(CircadianDate(r.tag_on_at).month(), 10);
  }
  EXPECT_LE(serials.size(), 500u);
  EXPECT_GT(serials.size(), 490u);
  for (size_t i = 1; i < month->trips.size(); ++i) {
    ASSERT_LE(month->trips[i - 1].tag_on, month->trips[i].tag_on);
  }
}

TEST(SynthgenTest, DailyVolumeMatchesExpectation) {
  const PopulationSpec spec = Small(10000, 2);
  auto month = GenerateMonth(spec, 2);
  ASSERT_TRUE(month.ok());
  std::map<absl::CivilDay, int64_t> per_day;
  for (const SyntheticTrip& t : month->trips) {
    ++per_day[CircadianDate(month->TagOnTime(t))];
  }
  std::map<int, double> observed, expected;
  for (absl::CivilDay d(2013, 10, 1); d <= absl::CivilDay(2013, 10, 31); ++d) {
    observed[DayOfWeekId(d)] += static_cast<double>(per_day[d]);
    expected[DayOfWeekId(d)] += ExpectedDailyTrips(spec, d);
  }
  for (const auto& [dow, e] : expected) {
    EXPECT_NEAR(observed[dow] / e, 1.0, 0.10) << DayOfWeekName(dow);
  }
  EXPECT_EQ(ExpectedDailyTrips(spec, absl::CivilDay(2013, 11, 1)), 0.0);
  // Commuting makes workdays busier than weekends at the default rates.
  EXPECT_GT(ExpectedDailyTrips(spec, absl::CivilDay(2013, 10, 9)),
            ExpectedDailyTrips(spec, absl::CivilDay(2013, 10, 12)));
}

TEST(SynthgenTest, DefaultScaleIsAboutFourHundredThousandRows) {
  const PopulationSpec spec;
  double total = 0;
  for (absl::CivilDay d(2013, 10, 1); d <= absl::CivilDay(2013, 10, 31); ++d) {
    total += ExpectedDailyTrips(spec, d);
  }
  EXPECT_GT(total, 400000);
  EXPECT_LT(total, 500000);
}

TEST(SynthgenTest, ZeroJitterCommutesRepeatExactly) {
  PopulationSpec spec = Small(300, 3);
  spec.jitter_minutes = 0;
  auto month = GenerateMonth(spec);
  ASSERT_TRUE(month.ok());
  // card -> set of (time of day, on stop) of its commute legs.
  std::map<uint32_t, std::set<std::tuple<int, uint32_t>>> legs;
  std::map<uint32_t, int> workdays;
  for (const SyntheticTrip& t : month->trips) {
    const CardProfile& p = month->cards[t.card];
    if (p.kind == CardKind::kCasual) continue;
    const int tod = static_cast<int>(t.tag_on % 86400);
    if (tod == p.morning_seconds && t.on_stop == p.home_stop &&
        t.agency == p.agency) {
      ++workdays[t.card];
    }
  }
  int commuters = 0;
  for (size_t i = 0; i < month->cards.size(); ++i) {
    if (month->cards[i].kind == CardKind::kCasual) continue;
    ++commuters;
    // 23 workdays in October 2013 at 90% attendance.
    EXPECT_GE(workdays[static_cast<uint32_t>(i)], 12) << i;
  }
  EXPECT_EQ(commuters, 210);
}

TEST(SynthgenTest, UniqueCommutersUsePrivateStops) {
  auto month = GenerateMonth(Small(1000, 4));
  ASSERT_TRUE(month.ok());
  std::map<int64_t, std::set<std::string>> stop_users;
  int unique = 0;
  for (const CardProfile& p : month->cards) {
    if (p.kind == CardKind::kUniqueCommuter) ++unique;
  }
  EXPECT_EQ(unique, 35);  // 5% of 700 commuters
  for (const SyntheticTrip& t : month->trips) {
    const RawTransaction r = month->Materialize(t);
    if (r.tag_on_location_id >= 900000) {
      stop_users[r.tag_on_location_id].insert(r.card_serial);
    }
  }
  EXPECT_FALSE(stop_users.empty());
  for (const auto& [stop, users] : stop_users) EXPECT_EQ(users.size(), 1u);
}

TEST(SynthgenTest, DeterministicAcrossThreads) {
  auto a = GenerateMonth(Small(3000, 5), 1);
  auto b = GenerateMonth(Small(3000, 5), 3);
  auto c = GenerateMonth(Small(3000, 6), 1);
  ASSERT_TRUE(a.ok() && b.ok() && c.ok());
  EXPECT_EQ(a->trips, b->trips);
  EXPECT_NE(a->trips, c->trips);
  EXPECT_EQ(PopulationSpecDigest(Small(3000, 5)),
            PopulationSpecDigest(Small(3000, 5)));
  EXPECT_NE(PopulationSpecDigest(Small(3000, 5)),
            PopulationSpecDigest(Small(3000, 6)));
}

TEST(SynthgenTest, GroundTruthRoundTrip) {
  TempDir dir;
  auto month = GenerateMonth(Small(200, 7));
  ASSERT_TRUE(month.ok());
  ASSERT_TRUE(WriteGroundTruth(*month, dir.File("truth.json")).ok());
  auto back = ReadGroundTruth(dir.File("truth.json"));
  ASSERT_TRUE(back.ok()) << back.status();
  EXPECT_EQ(back->trips, month->trips);
  ASSERT_EQ(back->cards.size(), month->cards.size());
  for (size_t i = 0; i < month->cards.size(); ++i) {
    EXPECT_EQ(back->cards[i].serial, month->cards[i].serial);
    EXPECT_EQ(back->cards[i].kind, month->cards[i].kind);
  }
  EXPECT_EQ(back->MaterializeAll(), month->MaterializeAll());
  EXPECT_EQ(ReadGroundTruth(dir.File("absent.json")).status().code(),
            absl::StatusCode::kNotFound);
}

TEST(SynthgenTest, CsvMatchesMaterializedRecords) {
  TempDir dir;
  auto month = GenerateMonth(Small(100, 8));
  ASSERT_TRUE(month.ok());
  ASSERT_TRUE(WriteSyntheticCsv(*month, dir.File("raw.csv")).ok());
  auto rows = ReadRawCsv(dir.File("raw.csv"));
  ASSERT_TRUE(rows.ok()) << rows.status();
  EXPECT_EQ(*rows, month->MaterializeAll());
}

TEST(SynthgenTest, ConfigFileOverrides) {
  auto file = ConfigFile::Parse(
      "card_count = 50\nyear = 2014\nmonth = 2\nseed = 9\n"
      "weekend_multiplier = 0.25\n");
  ASSERT_TRUE(file.ok());
  PopulationSpec spec;
  ASSERT_TRUE(ApplyConfigFile(*file, spec).ok());
  EXPECT_EQ(spec.card_count, 50);
  EXPECT_EQ(spec.year, 2014);
  EXPECT_EQ(spec.month, 2);
  EXPECT_EQ(spec.seed, 9u);
  EXPECT_EQ(spec.weekend_multiplier, 0.25);
  auto bad = ConfigFile::Parse("commuter_fraction = lots\n");
  ASSERT_TRUE(bad.ok());
  EXPECT_FALSE(ApplyConfigFile(*bad, spec).ok());
}

}  // namespace
}  // namespace transit_anon
