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

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdlib>
#include <functional>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "json.hpp"
#include "transit_anon/digest.h"
#include "transit_anon/file_util.h"
#include "transit_anon/parallel.h"
#include "transit_anon/pseudonym.h"
#include "transit_anon/raw_io.h"
#include "transit_anon/rng.h"

namespace transit_anon {
namespace {

using nlohmann::json;

constexpr std::string_view kGroundTruthSchema = "transit-anon-ground-truth/1";
constexpr int64_t kDaySeconds = 86400;
constexpr size_t kCardsPerChunk = 1024;
constexpr int kCorridorsPerAgency = 8;
constexpr int64_t kPrivateStopBase = 900000;

// Relative casual demand by hour of the service day. Hours 24-26 are the
// early morning of the next calendar date, still before the day boundary.
constexpr int kFirstHour = 4;
constexpr std::array<double, 23> kHourWeights = {
    1.0, 2.0, 5.0, 9.0, 9.0, 6.0, 4.0, 4.0, 5.0, 4.0, 4.0, 5.0,
    8.0, 9.0, 7.0, 5.0, 3.0, 3.0, 2.0, 2.0, 1.0, 1.0, 0.5};

SyntheticAgency MakeAgency(int64_t id, std::string name, double weight,
                           bool distance_based, int64_t base_cents,
                           int64_t per_stop_cents,
                           std::vector<SyntheticRoute> routes,
                           std::vector<SyntheticStop> stops,
                           std::vector<SyntheticProduct> products) {
  SyntheticAgency a;
  a.id = id;
  a.name = std::move(name);
  a.weight = weight;
  a.distance_based = distance_based;
  a.base_fare = Money::FromCents(base_cents);
  a.fare_per_stop = Money::FromCents(per_stop_cents);
  a.routes = std::move(routes);
  a.stops = std::move(stops);
  a.products = std::move(products);
  return a;
}

struct Corridor {
  uint16_t route;
  uint32_t home;
  uint32_t work;
};

// Cumulative-weight draw; weights are positive.
template <typename T, typename WeightOf>
size_t PickWeighted(const std::vector<T>& items, WeightOf weight_of,
                    SeededRng& rng) {
  double total = 0;
  for (const T& item : items) total += weight_of(item);
  double x = rng.Unit() * total;
  for (size_t i = 0; i < items.size(); ++i) {
    x -= weight_of(items[i]);
    if (x < 0) return i;
  }
  return items.size() - 1;
}

// Knuth's product method; the means used here are small.
int Poisson(double mean, SeededRng& rng) {
  if (mean <= 0) return 0;
  const double limit = std::exp(-mean);
  int k = 0;
  double p = rng.Unit();
  while (p > limit) {
    ++k;
    p *= rng.Unit();
  }
  return k;
}

bool IsWorkday(absl::CivilDay day) {
  const int id = DayOfWeekId(day);
  return id >= 2 && id <= 6;
}

int DaysInMonth(int year, int month) {
  const absl::CivilMonth m(year, month);
  return static_cast<int>(absl::CivilDay(m + 1) - absl::CivilDay(m));
}

std::string SerialFor(uint64_t index, uint64_t offset) {
  // 2654435761 is coprime with 10^10, so this is a bijection on indexes.
  constexpr uint64_t kModulus = 10'000'000'000ULL;
  const uint64_t n = (index % kModulus * 2654435761ULL + offset) % kModulus;
  return absl::StrFormat("CS%010d", n);
}

// Generation state shared (read-only) by all card workers.
struct Generator {
  explicit Generator(const PopulationSpec& s) : spec(s) {}

  const PopulationSpec& spec;
  std::vector<size_t> shared_stops;  // per agency, before private stops
  std::vector<std::vector<Corridor>> corridors;
  std::array<double, kHourWeights.size()> hour_cdf{};
  uint64_t serial_offset = 0;
  int64_t commuters = 0;
  int64_t unique_commuters = 0;
  int days = 0;

  int32_t RideSeconds(const SyntheticAgency& a, uint32_t on,
                      uint32_t off) const {
    if (!a.distance_based) return -1;
    const auto stops = static_cast<int32_t>(on > off ? on - off : off - on);
    return 240 + 150 * stops;
  }

  int32_t CasualTimeOfDay(SeededRng& rng) const {
    const double x = rng.Unit() * hour_cdf.back();
    size_t h = 0;
    while (h + 1 < hour_cdf.size() && x >= hour_cdf[h]) ++h;
    return static_cast<int32_t>((kFirstHour + static_cast<int>(h)) * 3600 +
                                rng.Below(3600));
  }

  SyntheticTrip CasualTrip(uint32_t card, int64_t day_start,
                           SeededRng& rng) const {
    SyntheticTrip t;
    t.card = card;
    t.agency = static_cast<uint16_t>(PickWeighted(
        spec.agencies, [](const SyntheticAgency& a) { return a.weight; },
        rng));
    const SyntheticAgency& a = spec.agencies[t.agency];
    const auto n = static_cast<uint32_t>(shared_stops[t.agency]);
    t.on_stop = static_cast<uint32_t>(rng.Below(n));
    if (a.distance_based) {
      t.off_stop = static_cast<uint32_t>(rng.Below(n - 1));
      if (t.off_stop >= t.on_stop) ++t.off_stop;
      t.ride_seconds = RideSeconds(a, t.on_stop, t.off_stop) +
                       static_cast<int32_t>(rng.Below(180));
    } else {
      t.route = static_cast<uint16_t>(rng.Below(a.routes.size()));
    }
    t.product = static_cast<uint16_t>(PickWeighted(
        a.products, [](const SyntheticProduct& p) { return p.weight; }, rng));
    t.tag_on = day_start + CasualTimeOfDay(rng);
    return t;
  }

  SyntheticTrip CommuteLeg(uint32_t card, const CardProfile& p,
                           int64_t day_start, bool morning,
                           SeededRng& rng) const {
    const SyntheticAgency& a = spec.agencies[p.agency];
    SyntheticTrip t;
    t.card = card;
    t.agency = p.agency;
    t.route = p.route;
    t.product = p.product;
    t.on_stop = morning ? p.home_stop : p.work_stop;
    if (a.distance_based) {
      t.off_stop = morning ? p.work_stop : p.home_stop;
      t.ride_seconds = RideSeconds(a, t.on_stop, t.off_stop);
    }
    int64_t jitter = 0;
    if (spec.jitter_minutes > 0) {
      const int64_t span = int64_t{spec.jitter_minutes} * 60;
      jitter = static_cast<int64_t>(rng.Below(2 * span + 1)) - span;
    }
    t.tag_on = day_start +
               (morning ? p.morning_seconds : p.evening_seconds) + jitter;
    return t;
  }

  CardProfile Profile(uint64_t index, SeededRng& rng) const {
    CardProfile p;
    p.serial = SerialFor(index, serial_offset);
    const auto i = static_cast<int64_t>(index);
    if (i >= commuters) return p;
    if (i < unique_commuters) {
      // Private stops of agency 0, appended after its shared stops.
      p.kind = CardKind::kUniqueCommuter;
      p.agency = 0;
      const SyntheticAgency& a = spec.agencies[0];
      p.home_stop = static_cast<uint32_t>(shared_stops[0] + 2 * index);
      p.work_stop = p.home_stop + 1;
      if (!a.distance_based) {
        p.route = static_cast<uint16_t>(rng.Below(a.routes.size()));
      }
      p.morning_seconds = static_cast<int32_t>(5 * 3600 + 1800 +
                                               60 * rng.Below(240));
    } else {
      p.kind = CardKind::kCommuter;
      p.agency = static_cast<uint16_t>(PickWeighted(
          spec.agencies, [](const SyntheticAgency& a) { return a.weight; },
          rng));
      const std::vector<Corridor>& options = corridors[p.agency];
      const Corridor& c = options[rng.Below(options.size())];
      p.route = c.route;
      p.home_stop = c.home;
      p.work_stop = c.work;
      p.morning_seconds =
          static_cast<int32_t>(6 * 3600 + 900 * rng.Below(12));
    }
    p.evening_seconds = p.morning_seconds +
                        static_cast<int32_t>(8 * 3600 + 1800 +
                                             900 * rng.Below(6));
    const SyntheticAgency& a = spec.agencies[p.agency];
    p.product = static_cast<uint16_t>(PickWeighted(
        a.products, [](const SyntheticProduct& x) { return x.weight; }, rng));
    return p;
  }

  void Card(uint64_t index, CardProfile& profile,
            std::vector<SyntheticTrip>& out) const {
    SeededRng rng(
        DeriveSeed(spec.seed, "synth-card", absl::StrCat(index)));
    profile = Profile(index, rng);
    const auto card = static_cast<uint32_t>(index);
    const absl::CivilDay first(spec.year, spec.month, 1);
    const bool commuter = profile.kind != CardKind::kCasual;
    for (int d = 0; d < days; ++d) {
      const absl::CivilDay day = first + d;
      const int64_t day_start = d * kDaySeconds;
      const bool workday = IsWorkday(day);
      int casual = 0;
      if (commuter && workday) {
        if (rng.Unit() >= spec.commuter_attendance) continue;
        out.push_back(CommuteLeg(card, profile, day_start, true, rng));
        out.push_back(CommuteLeg(card, profile, day_start, false, rng));
        casual = Poisson(spec.trips_per_commuter_workday - 2.0, rng);
      } else {
        casual = Poisson(spec.casual_trip_rate *
                             (workday ? spec.weekday_multiplier
                                      : spec.weekend_multiplier),
                         rng);
      }
      for (int k = 0; k < casual; ++k) {
        out.push_back(CasualTrip(card, day_start, rng));
      }
    }
  }
};

absl::Status InvalidSpec(std::string_view what) {
  return absl::InvalidArgumentError(
      absl::StrCat("population spec: ", std::string(what)));
}

bool IsFraction(double x) { return x >= 0.0 && x <= 1.0; }

json AgencyToJson(const SyntheticAgency& a) {
  json routes = json::array();
  for (const SyntheticRoute& r : a.routes) routes.push_back({r.id, r.name});
  json stops = json::array();
  for (const SyntheticStop& s : a.stops) stops.push_back({s.id, s.name});
  json products = json::array();
  for (const SyntheticProduct& p : a.products) {
    products.push_back(
        {{"id", p.id}, {"name", p.name}, {"weight", p.weight}, {"pass", p.pass}});
  }
  return {{"id", a.id},
          {"name", a.name},
          {"weight", a.weight},
          {"distance_based", a.distance_based},
          {"base_fare", a.base_fare.ToString()},
          {"fare_per_stop", a.fare_per_stop.ToString()},
          {"routes", routes},
          {"stops", stops},
          {"products", products}};
}

SyntheticAgency AgencyFromJson(const json& j) {
  SyntheticAgency a;
  a.id = j.at("id").get<int64_t>();
  a.name = j.at("name").get<std::string>();
  a.weight = j.at("weight").get<double>();
  a.distance_based = j.at("distance_based").get<bool>();
  a.base_fare = Money::Parse(j.at("base_fare").get<std::string>()).value();
  a.fare_per_stop =
      Money::Parse(j.at("fare_per_stop").get<std::string>()).value();
  for (const json& r : j.at("routes")) {
    a.routes.push_back({r.at(0).get<int64_t>(), r.at(1).get<std::string>()});
  }
  for (const json& s : j.at("stops")) {
    a.stops.push_back({s.at(0).get<int64_t>(), s.at(1).get<std::string>()});
  }
  for (const json& p : j.at("products")) {
    a.products.push_back({p.at("id").get<int64_t>(),
                          p.at("name").get<std::string>(),
                          p.at("weight").get<double>(),
                          p.at("pass").get<bool>()});
  }
  return a;
}

json SpecToJson(const PopulationSpec& s) {
  return {{"card_count", s.card_count},
          {"commuter_fraction", s.commuter_fraction},
          {"unique_commuter_fraction", s.unique_commuter_fraction},
          {"commuter_attendance", s.commuter_attendance},
          {"trips_per_commuter_workday", s.trips_per_commuter_workday},
          {"casual_trip_rate", s.casual_trip_rate},
          {"weekday_multiplier", s.weekday_multiplier},
          {"weekend_multiplier", s.weekend_multiplier},
          {"jitter_minutes", s.jitter_minutes},
          {"year", s.year},
          {"month", s.month},
          {"seed", absl::StrCat(s.seed)}};
}

absl::StatusOr<CardKind> KindFromName(std::string_view name) {
  for (CardKind k : {CardKind::kCasual, CardKind::kCommuter,
                     CardKind::kUniqueCommuter}) {
    if (CardKindName(k) == name) return k;
  }
  return absl::InvalidArgumentError(
      absl::StrCat("unknown card kind '", std::string(name), "'"));
}

}  // namespace

std::vector<SyntheticAgency> PopulationSpec::DefaultAgencies() {
  std::vector<SyntheticAgency> agencies;
  agencies.push_back(MakeAgency(
      1, "AC Transit", 3.0, false, 210, 0,
      {{300, "F"}, {301, "NL"}, {302, "O"}, {303, "51A"}, {304, "72R"},
       {305, "1"}, {306, "57"}, {307, "18"}},
      {{2, "Transbay Terminal"},
       {3, "Broadway & 14th St"},
       {4, "San Pablo Ave & University Ave"},
       {5, "Telegraph Ave & Ashby Ave"},
       {6, "MacArthur Blvd & Fruitvale Ave"},
       {7, "International Blvd & 98th Ave"},
       {8, "Shattuck Ave & Center St"},
       {9, "El Cerrito Plaza"},
       {10, "Alameda Point"},
       {11, "Eastmont Transit Center"},
       {12, "Grand Ave & Lakeshore Ave"},
       {13, "Hesperian Blvd & A St"}},
      {{119, "AC Transit Adult local pass", 2.0, true},
       {120, "AC Transit Adult cash value", 3.0, false},
       {121, "AC Transit Youth local pass", 0.5, true}}));
  agencies.push_back(MakeAgency(
      2, "SF Muni", 4.0, false, 200, 0,
      {{14, "14"}, {38, "38"}, {49, "49"}, {22, "22"}, {5, "5"},
       {101, "N"}, {102, "J"}, {103, "K"}},
      {{201, "Market St & 4th St"},
       {202, "Mission St & 16th St"},
       {203, "Geary Blvd & Masonic Ave"},
       {204, "Van Ness Ave & Market St"},
       {205, "Fillmore St & Haight St"},
       {206, "Judah St & 19th Ave"},
       {207, "Church St & Duboce Ave"},
       {208, "Stockton St & Clay St"},
       {209, "3rd St & 20th St"},
       {210, "Ocean Ave & Geneva Ave"},
       {211, "Fulton St & Park Presidio Blvd"},
       {212, "Embarcadero & Folsom St"}},
      {{301, "Muni Adult monthly pass", 3.0, true},
       {302, "Muni Adult cash value", 3.0, false},
       {303, "Muni Senior monthly pass", 0.5, true}}));
  agencies.push_back(MakeAgency(
      3, "BART", 3.0, true, 185, 35, {},
      {{401, "Richmond"},
       {402, "El Cerrito del Norte"},
       {403, "Downtown Berkeley"},
       {404, "MacArthur"},
       {405, "19th St Oakland"},
       {406, "12th St Oakland City Center"},
       {407, "West Oakland"},
       {408, "Embarcadero"},
       {409, "Montgomery St"},
       {410, "Powell St"},
       {411, "Civic Center"},
       {412, "16th St Mission"},
       {413, "24th St Mission"},
       {414, "Glen Park"},
       {415, "Daly City"},
       {416, "Millbrae (BART)"}},
      {{501, "BART cash value", 4.0, false},
       {502, "BART high value discount ticket", 1.0, false}}));
  agencies.push_back(MakeAgency(
      4, "Caltrain", 1.0, true, 325, 50, {},
      {{15, "Millbrae (Caltrain)"},
       {16, "San Francisco (4th & King)"},
       {17, "22nd Street"},
       {18, "Bayshore"},
       {19, "South San Francisco"},
       {20, "San Bruno"},
       {21, "Burlingame"},
       {22, "San Mateo"},
       {23, "Redwood City"},
       {24, "Palo Alto"},
       {25, "Mountain View"},
       {26, "San Jose Diridon"}},
      {{601, "Caltrain Adult monthly pass", 2.0, true},
       {602, "Caltrain Adult cash value", 1.0, false}}));
  return agencies;
}

std::string_view CardKindName(CardKind kind) {
  switch (kind) {
    case CardKind::kCasual:
      return "casual";
    case CardKind::kCommuter:
      return "commuter";
    case CardKind::kUniqueCommuter:
      return "unique_commuter";
  }
  return "casual";
}

absl::Status ValidatePopulationSpec(const PopulationSpec& s) {
  if (s.card_count < 0) return InvalidSpec("card_count must be >= 0");
  if (s.card_count > (int64_t{1} << 31)) {
    return InvalidSpec("card_count too large");
  }
  for (auto [name, value] :
       {std::pair<std::string_view, double>{"commuter_fraction",
                                            s.commuter_fraction},
        {"unique_commuter_fraction", s.unique_commuter_fraction},
        {"commuter_attendance", s.commuter_attendance}}) {
    if (!IsFraction(value)) {
      return InvalidSpec(absl::StrCat(std::string(name), " must be in [0, 1]"));
    }
  }
  if (!(s.trips_per_commuter_workday >= 2.0 &&
        s.trips_per_commuter_workday <= 20.0)) {
    return InvalidSpec("trips_per_commuter_workday must be in [2, 20]");
  }
  for (auto [name, value] :
       {std::pair<std::string_view, double>{"casual_trip_rate",
                                            s.casual_trip_rate},
        {"weekday_multiplier", s.weekday_multiplier},
        {"weekend_multiplier", s.weekend_multiplier}}) {
    if (!(value >= 0.0 && value <= 20.0)) {
      return InvalidSpec(absl::StrCat(std::string(name), " must be in [0, 20]"));
    }
  }
  if (s.jitter_minutes < 0 || s.jitter_minutes > 60) {
    return InvalidSpec("jitter_minutes must be in [0, 60]");
  }
  if (s.month < 1 || s.month > 12 || s.year < 1900 || s.year > 9999) {
    return InvalidSpec("year/month out of range");
  }
  if (s.agencies.empty()) return InvalidSpec("no agencies");
  if (s.agencies.size() >= kNoRoute) return InvalidSpec("too many agencies");
  for (const SyntheticAgency& a : s.agencies) {
    const std::string where = absl::StrCat("agency ", a.id, ": ");
    if (!(a.weight > 0)) return InvalidSpec(where + "weight must be positive");
    if (a.name.empty()) return InvalidSpec(where + "empty name");
    if (a.stops.size() < 2) return InvalidSpec(where + "needs >= 2 stops");
    if (a.products.empty()) return InvalidSpec(where + "no products");
    if (!a.distance_based && a.routes.empty()) {
      return InvalidSpec(where + "flat-fare agency needs routes");
    }
    if (a.routes.size() >= kNoRoute) return InvalidSpec(where + "too many routes");
    if (a.base_fare.cents() < 0 || a.fare_per_stop.cents() < 0) {
      return InvalidSpec(where + "negative fare");
    }
    for (const SyntheticProduct& p : a.products) {
      if (!(p.weight > 0)) {
        return InvalidSpec(where + "product weights must be positive");
      }
    }
  }
  return absl::OkStatus();
}

absl::Status ApplyConfigFile(const ConfigFile& file, PopulationSpec& spec) {
  struct DoubleKey {
    std::string_view key;
    double* target;
  };
  for (const DoubleKey& k :
       {DoubleKey{"commuter_fraction", &spec.commuter_fraction},
        DoubleKey{"unique_commuter_fraction", &spec.unique_commuter_fraction},
        DoubleKey{"commuter_attendance", &spec.commuter_attendance},
        DoubleKey{"trips_per_commuter_workday",
                  &spec.trips_per_commuter_workday},
        DoubleKey{"casual_trip_rate", &spec.casual_trip_rate},
        DoubleKey{"weekday_multiplier", &spec.weekday_multiplier},
        DoubleKey{"weekend_multiplier", &spec.weekend_multiplier}}) {
    if (auto text = file.Get(k.key)) {
      auto v = ParseConfigDouble(k.key, *text);
      if (!v.ok()) return v.status();
      *k.target = *v;
    }
  }
  struct IntKey {
    std::string_view key;
    uint64_t max;
    std::function<void(uint64_t)> set;
  };
  for (const IntKey& k :
       {IntKey{"card_count", uint64_t{1} << 31,
               [&](uint64_t v) { spec.card_count = static_cast<int64_t>(v); }},
        IntKey{"jitter_minutes", 60,
               [&](uint64_t v) { spec.jitter_minutes = static_cast<int>(v); }},
        IntKey{"year", 9999,
               [&](uint64_t v) { spec.year = static_cast<int>(v); }},
        IntKey{"month", 12,
               [&](uint64_t v) { spec.month = static_cast<int>(v); }},
        IntKey{"seed", UINT64_MAX, [&](uint64_t v) { spec.seed = v; }}}) {
    if (auto text = file.Get(k.key)) {
      auto v = ParseConfigUnsigned(k.key, *text);
      if (!v.ok()) return v.status();
      if (*v > k.max) {
        return absl::InvalidArgumentError(absl::StrCat(
            std::string(k.key), ": value ", *v, " exceeds ", k.max));
      }
      k.set(*v);
    }
  }
  return absl::OkStatus();
}

std::string PopulationSpecDigest(const PopulationSpec& spec) {
  json j = SpecToJson(spec);
  j["agencies"] = json::array();
  for (const SyntheticAgency& a : spec.agencies) {
    j["agencies"].push_back(AgencyToJson(a));
  }
  return HexEncode(Sha256(j.dump()));
}

absl::CivilSecond SyntheticMonth::TagOnTime(const SyntheticTrip& trip) const {
  return absl::CivilSecond(spec.year, spec.month, 1) + trip.tag_on;
}

RawTransaction SyntheticMonth::Materialize(const SyntheticTrip& trip) const {
  const SyntheticAgency& a = spec.agencies[trip.agency];
  const SyntheticProduct& p = a.products[trip.product];
  const SyntheticStop& on = a.stops[trip.on_stop];
  RawTransaction r;
  r.card_serial = cards[trip.card].serial;
  r.tag_on_at = TagOnTime(trip);
  r.agency_id = a.id;
  r.agency_name = a.name;
  if (trip.route != kNoRoute) {
    r.route_id = a.routes[trip.route].id;
    r.route_name = a.routes[trip.route].name;
  }
  r.tag_on_location_id = on.id;
  r.tag_on_location_name = on.name;
  int64_t fare = a.base_fare.cents();
  if (trip.ride_seconds >= 0) {
    const SyntheticStop& off = a.stops[trip.off_stop];
    r.tag_off_at = r.tag_on_at + trip.ride_seconds;
    r.tag_off_location_id = off.id;
    r.tag_off_location_name = off.name;
    const int64_t stops =
        std::abs(static_cast<int64_t>(trip.on_stop) - trip.off_stop);
    fare += a.fare_per_stop.cents() * stops;
  }
  r.fare_amount = Money::FromCents(p.pass ? 0 : fare);
  r.payment_product_id = p.id;
  r.payment_product_name = p.name;
  return r;
}

std::vector<RawTransaction> SyntheticMonth::MaterializeAll() const {
  std::vector<RawTransaction> out;
  out.reserve(trips.size());
  for (const SyntheticTrip& t : trips) out.push_back(Materialize(t));
  return out;
}

absl::StatusOr<SyntheticMonth> GenerateMonth(const PopulationSpec& spec,
                                             int threads) {
  if (auto status = ValidatePopulationSpec(spec); !status.ok()) return status;

  SyntheticMonth month;
  month.spec = spec;
  Generator gen(month.spec);
  gen.days = DaysInMonth(spec.year, spec.month);
  gen.commuters = std::llround(static_cast<double>(spec.card_count) *
                               spec.commuter_fraction);
  gen.unique_commuters = std::llround(static_cast<double>(gen.commuters) *
                                      spec.unique_commuter_fraction);
  gen.serial_offset =
      DeriveSeed(spec.seed, "synth-serial", {}) % 10'000'000'000ULL;
  double cumulative = 0;
  for (size_t h = 0; h < kHourWeights.size(); ++h) {
    cumulative += kHourWeights[h];
    gen.hour_cdf[h] = cumulative;
  }

  SeededRng corridor_rng(DeriveSeed(spec.seed, "synth-corridors", {}));
  for (const SyntheticAgency& a : spec.agencies) {
    gen.shared_stops.push_back(a.stops.size());
    std::vector<Corridor> options;
    for (int c = 0; c < kCorridorsPerAgency; ++c) {
      Corridor corridor{kNoRoute, 0, 0};
      const auto n = static_cast<uint32_t>(a.stops.size());
      corridor.home = static_cast<uint32_t>(corridor_rng.Below(n));
      corridor.work = static_cast<uint32_t>(corridor_rng.Below(n - 1));
      if (corridor.work >= corridor.home) ++corridor.work;
      if (!a.distance_based) {
        corridor.route =
            static_cast<uint16_t>(corridor_rng.Below(a.routes.size()));
      }
      options.push_back(corridor);
    }
    gen.corridors.push_back(std::move(options));
  }

  // Private stops for the unique commuters, two per card.
  SyntheticAgency& first = month.spec.agencies[0];
  for (int64_t i = 0; i < 2 * gen.unique_commuters; ++i) {
    const int64_t id = kPrivateStopBase + i;
    first.stops.push_back(
        {id, absl::StrCat(i % 2 == 0 ? "Residential" : "Office",
                          " stop ", id)});
  }

  const auto n = static_cast<size_t>(spec.card_count);
  month.cards.resize(n);
  const size_t chunks = (n + kCardsPerChunk - 1) / kCardsPerChunk;
  std::vector<std::vector<SyntheticTrip>> chunk_trips(chunks);
  ParallelFor(chunks, ResolveThreads(threads), [&](size_t c) {
    const size_t end = std::min(n, (c + 1) * kCardsPerChunk);
    for (size_t i = c * kCardsPerChunk; i < end; ++i) {
      gen.Card(i, month.cards[i], chunk_trips[c]);
    }
  });

  size_t total = 0;
  for (const auto& t : chunk_trips) total += t.size();
  month.trips.reserve(total);
  for (auto& t : chunk_trips) {
    month.trips.insert(month.trips.end(), t.begin(), t.end());
    std::vector<SyntheticTrip>().swap(t);
  }
  std::stable_sort(month.trips.begin(), month.trips.end(),
                   [](const SyntheticTrip& a, const SyntheticTrip& b) {
                     return a.tag_on < b.tag_on;
                   });
  return month;
}

double ExpectedDailyTrips(const PopulationSpec& spec, absl::CivilDay date) {
  if (absl::CivilMonth(date) != absl::CivilMonth(spec.year, spec.month)) {
    return 0;
  }
  const double cards = static_cast<double>(spec.card_count);
  const double commuters =
      static_cast<double>(std::llround(cards * spec.commuter_fraction));
  const bool workday = IsWorkday(date);
  const double casual_rate =
      spec.casual_trip_rate *
      (workday ? spec.weekday_multiplier : spec.weekend_multiplier);
  const double commuter_rate =
      workday ? spec.commuter_attendance * spec.trips_per_commuter_workday
              : casual_rate;
  return commuters * commuter_rate + (cards - commuters) * casual_rate;
}

absl::Status WriteSyntheticCsv(const SyntheticMonth& month,
                               const std::string& path) {
  auto writer = AtomicFileWriter::Open(path);
  if (!writer.ok()) return writer.status();
  std::string buffer = RawHeaderLine();
  for (const SyntheticTrip& t : month.trips) {
    AppendRawRow(buffer, month.Materialize(t));
    if (buffer.size() > (1 << 20)) {
      writer->Append(buffer);
      buffer.clear();
    }
  }
  writer->Append(buffer);
  return writer->Commit().status();
}

absl::Status WriteGroundTruth(const SyntheticMonth& month,
                              const std::string& path) {
  json head;
  head["schema"] = kGroundTruthSchema;
  head["spec"] = SpecToJson(month.spec);
  head["agencies"] = json::array();
  for (const SyntheticAgency& a : month.spec.agencies) {
    head["agencies"].push_back(AgencyToJson(a));
  }
  head["cards"] = json::array();
  for (const CardProfile& c : month.cards) {
    head["cards"].push_back(
        {{"serial", c.serial},
         {"kind", CardKindName(c.kind)},
         {"agency", c.agency},
         {"route", c.route == kNoRoute ? -1 : int{c.route}},
         {"product", c.product},
         {"home_stop", c.home_stop},
         {"work_stop", c.work_stop},
         {"morning_seconds", c.morning_seconds},
         {"evening_seconds", c.evening_seconds}});
  }

  // The trip log can run to millions of rows; stream it instead of building
  // a json value.
  std::string text = head.dump();
  text.pop_back();  // closing brace
  text.append(",\"trips\":[");
  auto writer = AtomicFileWriter::Open(path);
  if (!writer.ok()) return writer.status();
  for (size_t i = 0; i < month.trips.size(); ++i) {
    const SyntheticTrip& t = month.trips[i];
    absl::StrAppend(&text, i == 0 ? "\n[" : ",\n[", t.tag_on, ",",
                    t.ride_seconds, ",", t.card, ",", t.agency, ",",
                    t.route == kNoRoute ? -1 : int{t.route}, ",", t.on_stop,
                    ",", t.off_stop, ",", t.product, "]");
    if (text.size() > (1 << 20)) {
      writer->Append(text);
      text.clear();
    }
  }
  text.append("\n]}\n");
  writer->Append(text);
  return writer->Commit().status();
}

absl::StatusOr<SyntheticMonth> ReadGroundTruth(const std::string& path) {
  auto text = ReadFileToString(path);
  if (!text.ok()) return text.status();
  const json root = json::parse(*text, nullptr, /*allow_exceptions=*/false);
  if (root.is_discarded()) {
    return absl::InvalidArgumentError(
        absl::StrCat(path, ": ground truth is not valid JSON"));
  }
  try {
    if (root.at("schema").get<std::string>() != kGroundTruthSchema) {
      return absl::InvalidArgumentError(
          absl::StrCat(path, ": unsupported ground-truth schema"));
    }
    SyntheticMonth month;
    PopulationSpec& s = month.spec;
    const json& js = root.at("spec");
    s.card_count = js.at("card_count").get<int64_t>();
    s.commuter_fraction = js.at("commuter_fraction").get<double>();
    s.unique_commuter_fraction =
        js.at("unique_commuter_fraction").get<double>();
    s.commuter_attendance = js.at("commuter_attendance").get<double>();
    s.trips_per_commuter_workday =
        js.at("trips_per_commuter_workday").get<double>();
    s.casual_trip_rate = js.at("casual_trip_rate").get<double>();
    s.weekday_multiplier = js.at("weekday_multiplier").get<double>();
    s.weekend_multiplier = js.at("weekend_multiplier").get<double>();
    s.jitter_minutes = js.at("jitter_minutes").get<int>();
    s.year = js.at("year").get<int>();
    s.month = js.at("month").get<int>();
    s.seed = std::stoull(js.at("seed").get<std::string>());
    s.agencies.clear();
    for (const json& a : root.at("agencies")) {
      s.agencies.push_back(AgencyFromJson(a));
    }
    for (const json& c : root.at("cards")) {
      CardProfile p;
      p.serial = c.at("serial").get<std::string>();
      auto kind = KindFromName(c.at("kind").get<std::string>());
      if (!kind.ok()) return kind.status();
      p.kind = *kind;
      p.agency = c.at("agency").get<uint16_t>();
      const int route = c.at("route").get<int>();
      p.route = route < 0 ? kNoRoute : static_cast<uint16_t>(route);
      p.product = c.at("product").get<uint16_t>();
      p.home_stop = c.at("home_stop").get<uint32_t>();
      p.work_stop = c.at("work_stop").get<uint32_t>();
      p.morning_seconds = c.at("morning_seconds").get<int32_t>();
      p.evening_seconds = c.at("evening_seconds").get<int32_t>();
      month.cards.push_back(std::move(p));
    }
    const json& trips = root.at("trips");
    month.trips.reserve(trips.size());
    for (const json& t : trips) {
      SyntheticTrip trip;
      trip.tag_on = t.at(0).get<int64_t>();
      trip.ride_seconds = t.at(1).get<int32_t>();
      trip.card = t.at(2).get<uint32_t>();
      trip.agency = t.at(3).get<uint16_t>();
      const int route = t.at(4).get<int>();
      trip.route = route < 0 ? kNoRoute : static_cast<uint16_t>(route);
      trip.on_stop = t.at(5).get<uint32_t>();
      trip.off_stop = t.at(6).get<uint32_t>();
      trip.product = t.at(7).get<uint16_t>();
      if (trip.card >= month.cards.size() ||
          trip.agency >= s.agencies.size() ||
          trip.on_stop >= s.agencies[trip.agency].stops.size() ||
          trip.product >= s.agencies[trip.agency].products.size()) {
        return absl::InvalidArgumentError(
            absl::StrCat(path, ": trip references unknown vocabulary"));
      }
      month.trips.push_back(trip);
    }
    return month;
  } catch (const std::exception& e) {
    return absl::InvalidArgumentError(
        absl::StrCat(path, ": malformed ground truth: ", e.what()));
  }
}

}  // namespace transit_anon
