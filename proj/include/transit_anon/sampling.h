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

// The two suppression steps of a release and their analytic inclusion
// probabilities.
//
//  * Weekday sampling: for each weekday of a month, keep `keep_count` of its
//    four or five occurrences, chosen uniformly.
//  * Card sampling: for each kept service date, keep exactly
//    round(rate * active cards) cards, chosen uniformly and independently of
//    every other date.
//
// A card active on a given day is therefore published with probability
// rate * keep_count / occurrences.

#ifndef TRANSIT_ANON_SAMPLING_H_
#define TRANSIT_ANON_SAMPLING_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "absl/time/civil_time.h"
#include "transit_anon/config.h"
#include "transit_anon/date_obfuscation.h"

namespace transit_anon {

// Domain-separation labels for DeriveSeed.
inline constexpr char kWeekdaySampleLabel[] = "weekday-sample";
inline constexpr char kCardSampleLabel[] = "card-sample";
inline constexpr char kDateIdLabel[] = "date-id";

// Every date of (year, month) whose weekday survives sampling, ascending.
// nullopt keep_count keeps every date. Fails if keep_count exceeds the
// occurrences of any weekday in the month.
absl::StatusOr<std::vector<absl::CivilDay>> SampleWeekdays(
    int year, int month, std::optional<int> keep_count, uint64_t run_seed);

// round(rate * n), halves rounded up, clamped to [0, n].
size_t RetainedCardCount(size_t n, double rate);

// Keeps RetainedCardCount(|cards|, rate) distinct serials. The result only
// depends on the set of serials, not their order or multiplicity, and is
// returned sorted.
std::vector<std::string> SampleCards(std::vector<std::string> cards,
                                     double rate, uint64_t run_seed,
                                     absl::CivilDay date);

// rate * keep_count / occurrences.
absl::StatusOr<double> InclusionProbability(int weekday_occurrences,
                                            int keep_count, double card_rate);

// Product of independent per-day inclusion probabilities.
double StreakInclusionProbability(std::span<const double> per_day);

// Everything stochastic about one month of a release, decided up front.
struct MonthPlan {
  int year = 0;
  int month = 0;
  uint64_t run_seed = 0;
  std::vector<absl::CivilDay> retained_dates;  // ascending
  DateIdMap date_ids;
  uint64_t weekday_seed = 0;
  uint64_t date_id_seed = 0;

  bool Retains(absl::CivilDay date) const;
  // Sub-seed of the card sample on `date`.
  uint64_t CardSeed(absl::CivilDay date) const;
};

absl::StatusOr<MonthPlan> BuildMonthPlan(int year, int month,
                                         const AnonymizationConfig& config);

// "YYYY-MM", the context string for month-scoped sub-seeds.
std::string MonthContext(int year, int month);

}  // namespace transit_anon

#endif  // TRANSIT_ANON_SAMPLING_H_
