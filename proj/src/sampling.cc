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
#include <array>
#include <cmath>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "transit_anon/model.h"
#include "transit_anon/pseudonym.h"
#include "transit_anon/rng.h"

namespace transit_anon {

std::string MonthContext(int year, int month) {
  return absl::StrFormat("%04d-%02d", year, month);
}

absl::StatusOr<std::vector<absl::CivilDay>> SampleWeekdays(
    int year, int month, std::optional<int> keep_count, uint64_t run_seed) {
  if (month < 1 || month > 12) {
    return absl::InvalidArgumentError(absl::StrCat("bad month ", month));
  }
  // Occurrences of each weekday (index = DayOfWeekId - 1), chronological.
  std::array<std::vector<absl::CivilDay>, 7> by_weekday;
  const absl::CivilMonth civil_month(year, month);
  for (absl::CivilDay d(civil_month); absl::CivilMonth(d) == civil_month;
       ++d) {
    by_weekday[DayOfWeekId(d) - 1].push_back(d);
  }

  if (keep_count.has_value()) {
    if (*keep_count < 1) {
      return absl::InvalidArgumentError("keep_count must be >= 1");
    }
    for (size_t w = 0; w < by_weekday.size(); ++w) {
      if (static_cast<size_t>(*keep_count) > by_weekday[w].size()) {
        return absl::InvalidArgumentError(absl::StrCat(
            "keep_count ", *keep_count, " exceeds the ", by_weekday[w].size(),
            " occurrences of ", std::string(DayOfWeekName(static_cast<int>(w) + 1)),
            " in ", MonthContext(year, month)));
      }
    }
  }

  SeededRng rng(
      DeriveSeed(run_seed, kWeekdaySampleLabel, MonthContext(year, month)));
  std::vector<absl::CivilDay> retained;
  for (const auto& occurrences : by_weekday) {
    if (!keep_count.has_value()) {
      retained.insert(retained.end(), occurrences.begin(), occurrences.end());
      continue;
    }
    for (size_t index : SampleIndices(occurrences.size(),
                                      static_cast<size_t>(*keep_count), rng)) {
      retained.push_back(occurrences[index]);
    }
  }
  std::sort(retained.begin(), retained.end());
  return retained;
}

size_t RetainedCardCount(size_t n, double rate) {
  const double exact = rate * static_cast<double>(n);
  const auto rounded = static_cast<size_t>(std::floor(exact + 0.5));
  return std::min(rounded, n);
}

std::vector<std::string> SampleCards(std::vector<std::string> cards,
                                     double rate, uint64_t run_seed,
                                     absl::CivilDay date) {
  std::sort(cards.begin(), cards.end());
  cards.erase(std::unique(cards.begin(), cards.end()), cards.end());
  const size_t keep = RetainedCardCount(cards.size(), rate);
  if (keep == cards.size()) return cards;

  SeededRng rng(DeriveSeed(run_seed, kCardSampleLabel, FormatDate(date)));
  std::vector<std::string> retained;
  retained.reserve(keep);
  for (size_t index : SampleIndices(cards.size(), keep, rng)) {
    retained.push_back(std::move(cards[index]));
  }
  std::sort(retained.begin(), retained.end());
  return retained;
}

absl::StatusOr<double> InclusionProbability(int weekday_occurrences,
                                            int keep_count, double card_rate) {
  if (weekday_occurrences < 1 || keep_count < 0 ||
      keep_count > weekday_occurrences) {
    return absl::OutOfRangeError(
        absl::StrCat("need 0 <= keep_count <= occurrences, got keep_count=",
                     keep_count, " occurrences=", weekday_occurrences));
  }
  if (!(card_rate >= 0.0 && card_rate <= 1.0)) {
    return absl::OutOfRangeError(
        absl::StrCat("card rate outside [0, 1]: ", card_rate));
  }
  return card_rate * keep_count / weekday_occurrences;
}

double StreakInclusionProbability(std::span<const double> per_day) {
  double product = 1.0;
  for (double p : per_day) product *= p;
  return product;
}

bool MonthPlan::Retains(absl::CivilDay date) const {
  return std::binary_search(retained_dates.begin(), retained_dates.end(),
                            date);
}

uint64_t MonthPlan::CardSeed(absl::CivilDay date) const {
  return DeriveSeed(run_seed, kCardSampleLabel, FormatDate(date));
}

absl::StatusOr<MonthPlan> BuildMonthPlan(int year, int month,
                                         const AnonymizationConfig& config) {
  auto retained =
      SampleWeekdays(year, month, config.weekday_keep_count, config.run_seed);
  if (!retained.ok()) return retained.status();

  MonthPlan plan;
  plan.year = year;
  plan.month = month;
  plan.run_seed = config.run_seed;
  plan.retained_dates = *std::move(retained);
  const std::string context = MonthContext(year, month);
  plan.weekday_seed = DeriveSeed(config.run_seed, kWeekdaySampleLabel, context);
  plan.date_id_seed = DeriveSeed(config.run_seed, kDateIdLabel, context);
  plan.date_ids = BuildDateIdMap(plan.retained_dates, plan.date_id_seed);
  return plan;
}

}  // namespace transit_anon
