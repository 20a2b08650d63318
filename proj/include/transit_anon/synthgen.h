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


// Synthetic fare-transaction months with a ground-truth index.
//
// Three kinds of card: commuters ride a fixed home->work leg each workday
// morning and the reverse leg each evening (with per-day time jitter);
// "unique" commuters do the same between stops no other card uses, so their
// daily trajectory is unique in the population; casual cards draw every trip
// independently. Commuters on weekends ride like casual cards.

#ifndef TRANSIT_ANON_SYNTHGEN_H_
#define TRANSIT_ANON_SYNTHGEN_H_

#include <cstdint>
#include <string>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/time/civil_time.h"
#include "transit_anon/config.h"
#include "transit_anon/model.h"

namespace transit_anon {

struct SyntheticRoute {
  int64_t id = 0;
  std::string name;
};

struct SyntheticStop {
  int64_t id = 0;
  std::string name;
};

struct SyntheticProduct {
  int64_t id = 0;
  std::string name;
  double weight = 1.0;
  // Passes ride free; otherwise the agency's fare rule applies.
  bool pass = false;
};

struct SyntheticAgency {
  int64_t id = 0;
  std::string name;
  double weight = 1.0;
  // Distance-fared agencies record a tag-off and no route; flat-fare ones
  // record a route and no tag-off.
  bool distance_based = false;
  Money base_fare;
  Money fare_per_stop;  // distance-based only
  std::vector<SyntheticRoute> routes;
  std::vector<SyntheticStop> stops;  // line order for distance-based
  std::vector<SyntheticProduct> products;
};

struct PopulationSpec {
  int64_t card_count = 10000;
  double commuter_fraction = 0.7;
  // Share of commuters whose stops are used by no other card.
  double unique_commuter_fraction = 0.05;
  // Chance a commuter rides on a given workday.
  double commuter_attendance = 0.9;
  // Mean trips on an attended workday: the two commute legs plus a Poisson
  // number of extra casual trips. Must be >= 2.
  double trips_per_commuter_workday = 2.4;
  // Mean casual trips per card per day, before the day multiplier.
  double casual_trip_rate = 1.0;
  double weekday_multiplier = 1.0;
  double weekend_multiplier = 0.5;
  // Commute times move by up to +/- this many minutes from day to day.
  int jitter_minutes = 5;
  int year = 2013;
  int month = 10;
  uint64_t seed = 1;
  std::vector<SyntheticAgency> agencies = DefaultAgencies();

  static std::vector<SyntheticAgency> DefaultAgencies();
};

absl::Status ValidatePopulationSpec(const PopulationSpec& spec);

// SHA-256 hex over the spec's scalar parameters and vocabulary.
std::string PopulationSpecDigest(const PopulationSpec& spec);

// Overlays generate keys present in `file` onto `spec`.
absl::Status ApplyConfigFile(const ConfigFile& file, PopulationSpec& spec);

enum class CardKind { kCasual, kCommuter, kUniqueCommuter };

std::string_view CardKindName(CardKind kind);

inline constexpr uint16_t kNoRoute = UINT16_MAX;

struct CardProfile {
  std::string serial;
  CardKind kind = CardKind::kCasual;
  // Commute fields; unused for casual cards. Stops index the agency's stops.
  uint16_t agency = 0;
  uint16_t route = kNoRoute;
  uint16_t product = 0;
  uint32_t home_stop = 0;
  uint32_t work_stop = 0;
  int32_t morning_seconds = 0;  // seconds after midnight, before jitter
  int32_t evening_seconds = 0;
};

// One trip of the ground-truth log; indexes into the month's vocabulary.
struct SyntheticTrip {
  int64_t tag_on = 0;        // seconds after 00:00 on the 1st of the month
  int32_t ride_seconds = -1;  // tag-off delay; -1 when no tag-off
  uint32_t card = 0;
  uint16_t agency = 0;
  uint16_t route = kNoRoute;
  uint32_t on_stop = 0;
  uint32_t off_stop = 0;
  uint16_t product = 0;

  friend bool operator==(const SyntheticTrip&, const SyntheticTrip&) = default;
};

// A generated month: the spec (with the vocabulary extended by the unique
// commuters' private stops), the card profiles and the trip log ordered by
// tag-on time. The log is the whole stream; Materialize turns a trip into
// its raw record.
struct SyntheticMonth {
  PopulationSpec spec;
  std::vector<CardProfile> cards;
  std::vector<SyntheticTrip> trips;

  RawTransaction Materialize(const SyntheticTrip& trip) const;
  std::vector<RawTransaction> MaterializeAll() const;
  absl::CivilSecond TagOnTime(const SyntheticTrip& trip) const;
};

// Deterministic for a given spec; `threads` only changes speed.
absl::StatusOr<SyntheticMonth> GenerateMonth(const PopulationSpec& spec,
                                             int threads = 1);

// Mean number of trips whose service date is `date` under `spec`.
double ExpectedDailyTrips(const PopulationSpec& spec, absl::CivilDay date);

// Raw CSV of the whole month, in trip-log order.
absl::Status WriteSyntheticCsv(const SyntheticMonth& month,
                               const std::string& path);

// JSON ground truth: spec, vocabulary, card profiles and trip log.
absl::Status WriteGroundTruth(const SyntheticMonth& month,
                              const std::string& path);
absl::StatusOr<SyntheticMonth> ReadGroundTruth(const std::string& path);

}  // namespace transit_anon

#endif  // TRANSIT_ANON_SYNTHGEN_H_
