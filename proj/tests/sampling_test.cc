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

#include "transit_anon/sampling.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "absl/strings/str_format.h"
#include "gmock/gmock.h"
#include "gtest/gtest.h"
#include "oracle.h"
#include "transit_anon/model.h"
#include "transit_anon/pseudonym.h"

namespace transit_anon {
namespace {

using ::testing::ElementsAre;
using ::testing::IsEmpty;

std::vector<std::string> Cards(int n) {
  std::vector<std::string> cards;
  for (int i = 0; i < n; ++i) cards.push_back(absl::StrFormat("CS%010d", i));
  return cards;
}

TEST(SampleWeekdaysTest, FiveMondaysKeepThree) {
  // September 2013 has Mondays on the 2nd, 9th, 16th, 23rd and 30th.
  auto kept = SampleWeekdays(2013, 9, 3, 7);
  ASSERT_TRUE(kept.ok());
  int mondays = 0;
  for (absl::CivilDay d : *kept) {
    if (absl::GetWeekday(d) == absl::Weekday::monday) ++mondays;
  }
  EXPECT_EQ(mondays, 3);
}

TEST(SampleWeekdaysTest, TwentyOneDatesEveryMonth) {
  for (int year = 2012; year <= 2016; ++year) {
    for (int month = 1; month <= 12; ++month) {
      auto kept = SampleWeekdays(year, month, 3, year * 100 + month);
      ASSERT_TRUE(kept.ok());
      ASSERT_EQ(kept->size(), 21u);
      ASSERT_TRUE(std::is_sorted(kept->begin(), kept->end()));
      std::map<int, int> per_weekday;
      for (absl::CivilDay d : *kept) {
        ASSERT_EQ(d.year(), year);
        ASSERT_EQ(d.month(), month);
        ++per_weekday[DayOfWeekId(d)];
      }
      ASSERT_EQ(per_weekday.size(), 7u);
      for (const auto& [id, n] : per_weekday) ASSERT_EQ(n, 3) << id;
    }
  }
}

TEST(SampleWeekdaysTest, KeepCountAboveOccurrencesIsAnError) {
  // February 2015 has exactly four of each weekday.
  EXPECT_TRUE(SampleWeekdays(2015, 2, 4, 1).ok());
  EXPECT_EQ(SampleWeekdays(2015, 2, 5, 1).status().code(),
            absl::StatusCode::kInvalidArgument);
  EXPECT_EQ(SampleWeekdays(2015, 2, 0, 1).status().code(),
            absl::StatusCode::kInvalidArgument);
  EXPECT_EQ(SampleWeekdays(2015, 13, 3, 1).status().code(),
            absl::StatusCode::kInvalidArgument);
}

TEST(SampleWeekdaysTest, NoKeepCountKeepsEveryDate) {
  auto kept = SampleWeekdays(2013, 10, std::nullopt, 1);
  ASSERT_TRUE(kept.ok());
  EXPECT_EQ(kept->size(), 31u);
}

TEST(SampleWeekdaysTest, DeterministicAndMatchesOracle) {
  for (uint64_t seed = 0; seed < 200; ++seed) {
    const int month = 1 + static_cast<int>(seed % 12);
    auto a = SampleWeekdays(2013, month, 3, seed);
    auto b = SampleWeekdays(2013, month, 3, seed);
    ASSERT_TRUE(a.ok() && b.ok());
    ASSERT_EQ(*a, *b);
    oracle::Params p;
    p.seed = seed;
    ASSERT_EQ(*a, oracle::RetainedDates(p, 2013, month));
  }
}

TEST(SampleWeekdaysTest, EachOfFourMondaysKeptThreeQuartersOfTheTime) {
  // October 2013: Mondays on the 7th, 14th, 21st and 28th.
  const std::vector<absl::CivilDay> mondays = {
      absl::CivilDay(2013, 10, 7), absl::CivilDay(2013, 10, 14),
      absl::CivilDay(2013, 10, 21), absl::CivilDay(2013, 10, 28)};
  std::vector<int> hits(4, 0);
  constexpr int kSeeds = 10000;
  for (uint64_t seed = 0; seed < kSeeds; ++seed) {
    auto kept = SampleWeekdays(2013, 10, 3, seed);
    ASSERT_TRUE(kept.ok());
    for (size_t i = 0; i < mondays.size(); ++i) {
      if (std::binary_search(kept->begin(), kept->end(), mondays[i])) {
        ++hits[i];
      }
    }
  }
  for (int h : hits) {
    EXPECT_NEAR(static_cast<double>(h) / kSeeds, 0.75, 0.02);
  }
}

TEST(RetainedCardCountTest, RoundHalfUp) {
  EXPECT_EQ(RetainedCardCount(0, 0.5), 0u);
  EXPECT_EQ(RetainedCardCount(1, 0.5), 1u);
  EXPECT_EQ(RetainedCardCount(10, 0.5), 5u);
  EXPECT_EQ(RetainedCardCount(11, 0.5), 6u);
  EXPECT_EQ(RetainedCardCount(10, 1.0), 10u);
  EXPECT_EQ(RetainedCardCount(7, 0.3), 2u);  // 2.1
  EXPECT_EQ(RetainedCardCount(5, 0.3), 2u);  // 1.5 rounds up
}

TEST(SampleCardsTest, ExactCounts) {
  const absl::CivilDay day(2013, 10, 9);
  EXPECT_EQ(SampleCards(Cards(10), 0.5, 1, day).size(), 5u);
  EXPECT_EQ(SampleCards(Cards(11), 0.5, 1, day).size(), 6u);
  EXPECT_THAT(SampleCards({}, 0.5, 1, day), IsEmpty());
  EXPECT_EQ(SampleCards(Cards(11), 1.0, 1, day), Cards(11));
}

TEST(SampleCardsTest, DependsOnlyOnTheSetOfCards) {
  const absl::CivilDay day(2013, 10, 9);
  std::vector<std::string> shuffled = Cards(50);
  std::reverse(shuffled.begin(), shuffled.end());
  shuffled.push_back(shuffled.front());
  const auto a = SampleCards(Cards(50), 0.5, 3, day);
  EXPECT_EQ(a, SampleCards(shuffled, 0.5, 3, day));
  EXPECT_TRUE(std::is_sorted(a.begin(), a.end()));
  EXPECT_EQ(std::adjacent_find(a.begin(), a.end()), a.end());
}

TEST(SampleCardsTest, MatchesOracle) {
  const std::vector<std::string> cards = Cards(37);
  for (uint64_t seed = 0; seed < 50; ++seed) {
    const absl::CivilDay day = absl::CivilDay(2013, 10, 1) + seed % 31;
    const auto kept = SampleCards(cards, 0.5, seed, day);
    oracle::Params p;
    p.seed = seed;
    for (const std::string& c : cards) {
      ASSERT_EQ(std::binary_search(kept.begin(), kept.end(), c),
                oracle::CardRetained(p, day, cards, c));
    }
  }
}

TEST(SampleCardsTest, FixedCardKeptHalfTheTime) {
  const std::vector<std::string> cards = Cards(10);
  int hits = 0;
  constexpr int kDraws = 10000;
  for (int i = 0; i < kDraws; ++i) {
    const auto kept = SampleCards(cards, 0.5, i / 31,
                                  absl::CivilDay(2013, 1, 1) + i % 31);
    if (std::binary_search(kept.begin(), kept.end(), cards[3])) ++hits;
  }
  EXPECT_NEAR(static_cast<double>(hits) / kDraws, 0.5, 0.015);
}

TEST(SampleCardsTest, IndependentAcrossDates) {
  const std::vector<std::string> cards = Cards(10);
  const absl::CivilDay d1(2013, 10, 8), d2(2013, 10, 9);
  constexpr int kTrials = 10000;
  int first = 0, second = 0, both = 0;
  for (uint64_t seed = 0; seed < kTrials; ++seed) {
    const auto a = SampleCards(cards, 0.5, seed, d1);
    const auto b = SampleCards(cards, 0.5, seed, d2);
    const bool in_a = std::binary_search(a.begin(), a.end(), cards[0]);
    const bool in_b = std::binary_search(b.begin(), b.end(), cards[0]);
    first += in_a;
    second += in_b;
    both += in_a && in_b;
  }
  const double pa = static_cast<double>(first) / kTrials;
  const double pb = static_cast<double>(second) / kTrials;
  const double joint = static_cast<double>(both) / kTrials;
  const double expected = pa * pb;
  const double sigma = std::sqrt(expected * (1 - expected) / kTrials);
  EXPECT_NEAR(joint, expected, 3 * sigma);
}

TEST(InclusionProbabilityTest, SchemeArithmetic) {
  EXPECT_EQ(InclusionProbability(5, 3, 0.5).value(), 0.3);
  EXPECT_EQ(InclusionProbability(4, 3, 0.5).value(), 0.375);
  EXPECT_EQ(InclusionProbability(4, 4, 1.0).value(), 1.0);
  EXPECT_EQ(InclusionProbability(4, 5, 0.5).status().code(),
            absl::StatusCode::kOutOfRange);
  EXPECT_EQ(InclusionProbability(0, 0, 0.5).status().code(),
            absl::StatusCode::kOutOfRange);
  EXPECT_EQ(InclusionProbability(4, 3, 1.5).status().code(),
            absl::StatusCode::kOutOfRange);
}

TEST(StreakInclusionProbabilityTest, Products) {
  const std::vector<double> week(5, 0.375);
  EXPECT_NEAR(StreakInclusionProbability(week), std::pow(0.375, 5), 1e-15);
  EXPECT_NEAR(StreakInclusionProbability(week), 0.00741577, 1e-8);
  EXPECT_LT(StreakInclusionProbability(week), 0.01);
  const std::vector<double> with_zero = {0.5, 0.0, 0.9};
  EXPECT_EQ(StreakInclusionProbability(with_zero), 0.0);
  const std::vector<double> low(5, 0.3);
  EXPECT_NEAR(StreakInclusionProbability(low), 0.00243, 1e-12);
  EXPECT_EQ(StreakInclusionProbability({}), 1.0);
}

TEST(MonthPlanTest, DateIdsCoverRetainedDates) {
  AnonymizationConfig config;
  config.run_seed = 99;
  auto plan = BuildMonthPlan(2013, 10, config);
  ASSERT_TRUE(plan.ok());
  EXPECT_EQ(plan->retained_dates.size(), 21u);
  EXPECT_EQ(plan->date_ids.size(), 21u);
  std::vector<int> ids;
  for (absl::CivilDay d : plan->retained_dates) {
    ASSERT_TRUE(plan->Retains(d));
    ids.push_back(plan->date_ids.Find(d).value());
  }
  std::sort(ids.begin(), ids.end());
  for (int i = 0; i < 21; ++i) EXPECT_EQ(ids[i], i + 1);
  EXPECT_EQ(plan->weekday_seed, DeriveSeed(99, kWeekdaySampleLabel, "2013-10"));
  EXPECT_EQ(plan->CardSeed(absl::CivilDay(2013, 10, 9)),
            DeriveSeed(99, kCardSampleLabel, "2013-10-09"));
  EXPECT_EQ(MonthContext(2013, 1), "2013-01");
}

}  // namespace
}  // namespace transit_anon
