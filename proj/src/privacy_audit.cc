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

#include "transit_anon/privacy_audit.h"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <set>
#include <utility>

#include "absl/container/flat_hash_map.h"
#include "absl/container/flat_hash_set.h"
#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "json.hpp"
#include "transit_anon/file_util.h"
#include "transit_anon/parallel.h"
#include "transit_anon/pipeline.h"
#include "transit_anon/rng.h"
#include "transit_anon/sampling.h"

namespace transit_anon {
namespace {

using nlohmann::json;

constexpr int64_t kTrialsPerBlock = 10000;
constexpr int kWorkingWeekdays = 5;
constexpr size_t kMaxListedLeaks = 10;

bool ContainsZero(const std::vector<size_t>& indices) {
  return std::find(indices.begin(), indices.end(), size_t{0}) !=
         indices.end();
}

using LocationKey = std::pair<int64_t, int64_t>;  // (agency, location)

std::vector<LocationKey> Locations(const Trajectory& t) {
  std::vector<LocationKey> keys;
  for (const TrajectoryStep& s : t) {
    keys.emplace_back(s.agency_id, s.tag_on_location_id);
    if (s.tag_off_location_id) {
      keys.emplace_back(s.agency_id, *s.tag_off_location_id);
    }
  }
  std::sort(keys.begin(), keys.end());
  keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
  return keys;
}

// Card-days of one RandomWeekID, ordered by pseudonym.
using DayIndex = std::map<int, std::vector<const CardDay*>>;

DayIndex IndexByDay(const std::vector<CardDay>& card_days) {
  DayIndex index;
  for (const CardDay& d : card_days) {
    index[d.random_week_id].push_back(&d);
  }
  return index;
}

struct PairResult {
  int64_t proposed = 0;
  int64_t correct = 0;
  double chance_sum = 0;
  std::vector<ProposedLink> links;
};

PairResult AttackPair(int from_id, int to_id,
                      const std::vector<const CardDay*>& from,
                      const std::vector<const CardDay*>& to,
                      const std::map<std::string, std::string>& from_serials,
                      const std::map<std::string, std::string>& to_serials) {
  PairResult result;
  if (from.empty() || to.empty()) return result;

  std::map<Trajectory, size_t> exact;  // first (lowest pseudonym) wins
  std::map<LocationKey, std::vector<size_t>> by_location;
  for (size_t b = 0; b < to.size(); ++b) {
    exact.emplace(to[b]->trajectory, b);
    for (const LocationKey& key : Locations(to[b]->trajectory)) {
      by_location[key].push_back(b);
    }
  }
  std::set<std::string> present;
  for (const auto& [card, serial] : to_serials) present.insert(serial);

  std::vector<int> score(to.size(), 0);
  std::vector<size_t> touched;
  for (const CardDay* a : from) {
    size_t pick = 0;
    bool exact_match = false;
    if (auto it = exact.find(a->trajectory); it != exact.end()) {
      pick = it->second;
      exact_match = true;
    } else {
      for (const LocationKey& key : Locations(a->trajectory)) {
        auto it_loc = by_location.find(key);
        if (it_loc == by_location.end()) continue;
        for (size_t b : it_loc->second) {
          if (score[b]++ == 0) touched.push_back(b);
        }
      }
      int best = 0;
      for (size_t b : touched) {
        if (score[b] > best || (score[b] == best && b < pick)) {
          best = score[b];
          pick = b;
        }
        score[b] = 0;
      }
      touched.clear();
      if (best == 0) continue;
    }
    const std::string& serial = from_serials.at(a->card_id);
    ProposedLink link;
    link.from_week_id = from_id;
    link.to_week_id = to_id;
    link.from_card = a->card_id;
    link.to_card = to[pick]->card_id;
    link.exact_match = exact_match;
    link.correct = to_serials.at(link.to_card) == serial;
    ++result.proposed;
    if (link.correct) ++result.correct;
    if (present.contains(serial)) {
      result.chance_sum += 1.0 / static_cast<double>(to.size());
    }
    result.links.push_back(std::move(link));
  }
  return result;
}

json FrequencyJson(const Frequency& f) {
  return {{"hits", f.hits},
          {"trials", f.trials},
          {"frequency", f.value()},
          {"standard_error", f.standard_error()}};
}

json LinkageJson(const LinkageResult& r) {
  int64_t exact = 0;
  for (const ProposedLink& l : r.links) exact += l.exact_match ? 1 : 0;
  return {{"day_pairs", r.day_pairs},
          {"proposed_links", r.proposed},
          {"exact_trajectory_links", exact},
          {"correct_links", r.correct},
          {"accuracy", r.accuracy()},
          {"chance_baseline", r.chance_baseline}};
}

std::string MonthLabel(int year, int month) {
  return absl::StrFormat("%04d-%02d", year, month);
}

}  // namespace

double Frequency::value() const {
  return trials == 0 ? 0.0
                     : static_cast<double>(hits) / static_cast<double>(trials);
}

double Frequency::standard_error() const {
  if (trials == 0) return 0.0;
  const double p = value();
  return std::sqrt(p * (1.0 - p) / static_cast<double>(trials));
}

absl::StatusOr<InclusionSimulation> MonteCarloInclusion(
    const AnonymizationConfig& config, int weekday_occurrences, int64_t trials,
    uint64_t seed, int threads) {
  if (trials < kMinMonteCarloTrials) {
    return absl::InvalidArgumentError(absl::StrCat(
        "Monte Carlo needs at least ", kMinMonteCarloTrials, " trials"));
  }
  if (auto status = ValidateConfig(config); !status.ok()) return status;
  const int keep = config.weekday_keep_count.value_or(weekday_occurrences);
  auto analytic =
      InclusionProbability(weekday_occurrences, keep, config.card_sample_rate);
  if (!analytic.ok()) return analytic.status();

  InclusionSimulation sim;
  sim.weekday_occurrences = weekday_occurrences;
  sim.trials = trials;
  sim.analytic_per_day = *analytic;
  const std::vector<double> week(kWorkingWeekdays, *analytic);
  sim.analytic_streak = StreakInclusionProbability(week);

  const size_t cards_kept =
      RetainedCardCount(kSimulatedCards, config.card_sample_rate);
  const auto blocks =
      static_cast<size_t>((trials + kTrialsPerBlock - 1) / kTrialsPerBlock);
  std::vector<std::pair<int64_t, int64_t>> hits(blocks);  // (day, streak)
  ParallelFor(blocks, ResolveThreads(threads), [&](size_t b) {
    SeededRng rng(DeriveSeed(
        seed, "monte-carlo-inclusion",
        absl::StrCat(weekday_occurrences, "/", b)));
    const int64_t begin = static_cast<int64_t>(b) * kTrialsPerBlock;
    const int64_t end = std::min(trials, begin + kTrialsPerBlock);
    for (int64_t t = begin; t < end; ++t) {
      bool streak = true;
      for (int w = 0; w < kWorkingWeekdays; ++w) {
        // Stage 1: is the tracked occurrence (index 0) among the kept dates?
        const bool day_kept = ContainsZero(SampleIndices(
            static_cast<size_t>(weekday_occurrences),
            static_cast<size_t>(keep), rng));
        // Stage 2: is the tracked card (index 0) in that day's sample?
        const bool card_kept = ContainsZero(
            SampleIndices(kSimulatedCards, cards_kept, rng));
        if (day_kept && card_kept) {
          ++hits[b].first;
        } else {
          streak = false;
        }
      }
      if (streak) ++hits[b].second;
    }
  });
  for (const auto& [day, streak] : hits) {
    sim.per_day.hits += day;
    sim.streak.hits += streak;
  }
  sim.per_day.trials = trials * kWorkingWeekdays;
  sim.streak.trials = trials;
  return sim;
}

std::vector<CardDay> CollectCardDays(std::span<const AnonymizedRecord> rows) {
  std::map<std::pair<int, std::string>,
           std::vector<std::pair<int64_t, TrajectoryStep>>>
      groups;
  for (const AnonymizedRecord& r : rows) {
    TrajectoryStep step;
    step.agency_id = r.agency_id;
    step.tag_on_location_id = r.tag_on_location_id;
    step.tag_on_time = r.tag_on_time;
    step.tag_off_location_id = r.tag_off_location_id;
    step.tag_off_time = r.tag_off_time;
    groups[{r.random_week_id, r.clipper_card_id}].emplace_back(
        r.trip_sequence_id, step);
  }
  std::vector<CardDay> out;
  out.reserve(groups.size());
  for (auto& [key, steps] : groups) {
    std::sort(steps.begin(), steps.end());
    CardDay day;
    day.random_week_id = key.first;
    day.card_id = key.second;
    for (auto& [seq, step] : steps) day.trajectory.push_back(step);
    out.push_back(std::move(day));
  }
  return out;
}

size_t UniquenessBucket(int64_t k) {
  if (k <= 1) return 0;
  if (k == 2) return 1;
  if (k <= 4) return 2;
  if (k <= 9) return 3;
  return 4;
}

UniquenessHistogram TrajectoryUniqueness(
    std::span<const AnonymizedRecord> rows) {
  const std::vector<CardDay> days = CollectCardDays(rows);
  std::vector<const CardDay*> order;
  order.reserve(days.size());
  for (const CardDay& d : days) order.push_back(&d);
  std::sort(order.begin(), order.end(),
            [](const CardDay* a, const CardDay* b) {
              return std::tie(a->random_week_id, a->trajectory) <
                     std::tie(b->random_week_id, b->trajectory);
            });
  UniquenessHistogram h;
  h.card_days = static_cast<int64_t>(days.size());
  for (size_t i = 0; i < order.size();) {
    size_t j = i + 1;
    while (j < order.size() &&
           order[j]->random_week_id == order[i]->random_week_id &&
           order[j]->trajectory == order[i]->trajectory) {
      ++j;
    }
    const auto k = static_cast<int64_t>(j - i);
    h.exact[k] += k;
    h.buckets[UniquenessBucket(k)] += k;
    i = j;
  }
  return h;
}

double LinkageResult::accuracy() const {
  return proposed == 0
             ? 0.0
             : static_cast<double>(correct) / static_cast<double>(proposed);
}

absl::StatusOr<std::map<int, std::map<std::string, std::string>>>
ResolvePseudonyms(std::span<const AnonymizedRecord> rows,
                  const MonthSummary& month, const RunManifest& manifest,
                  const SecretKey& key,
                  std::span<const std::string> true_serials) {
  if (key.Fingerprint() != manifest.key_fingerprint) {
    return absl::FailedPreconditionError(
        "key file does not match the key recorded in the manifest");
  }
  std::map<int, absl::CivilDay> dates;
  for (const DateStats& d : month.dates) dates[d.random_week_id] = d.date;

  std::map<int, absl::flat_hash_map<std::string, const std::string*>> lookup;
  std::map<int, std::map<std::string, std::string>> resolved;
  for (const AnonymizedRecord& r : rows) {
    auto date = dates.find(r.random_week_id);
    if (date == dates.end()) {
      return absl::FailedPreconditionError(absl::StrCat(
          "RandomWeekID ", r.random_week_id, " is not in the manifest"));
    }
    auto [table, fresh] = lookup.try_emplace(r.random_week_id);
    if (fresh) {
      table->second.reserve(true_serials.size());
      for (const std::string& serial : true_serials) {
        table->second.emplace(Pseudonymize(serial, date->second, key).Hex(),
                              &serial);
      }
    }
    auto hit = table->second.find(r.clipper_card_id);
    if (hit == table->second.end()) {
      return absl::FailedPreconditionError(
          absl::StrCat("ground truth does not match the release: a pseudonym "
                       "on RandomWeekID ",
                       r.random_week_id, " resolves to no known card"));
    }
    resolved[r.random_week_id][r.clipper_card_id] = *hit->second;
  }
  return resolved;
}

LinkageResult LinkageAttack(
    std::span<const AnonymizedRecord> rows, const MonthSummary& month,
    const std::map<int, std::map<std::string, std::string>>& resolved,
    int threads) {
  const std::vector<CardDay> card_days = CollectCardDays(rows);
  const DayIndex index = IndexByDay(card_days);
  static const std::vector<const CardDay*> kNone;
  static const std::map<std::string, std::string> kNoSerials;
  auto day = [&](int id) -> const std::vector<const CardDay*>& {
    auto it = index.find(id);
    return it == index.end() ? kNone : it->second;
  };
  auto serials = [&](int id) -> const std::map<std::string, std::string>& {
    auto it = resolved.find(id);
    return it == resolved.end() ? kNoSerials : it->second;
  };

  LinkageResult result;
  const size_t pairs = month.dates.size() < 2 ? 0 : month.dates.size() - 1;
  result.day_pairs = static_cast<int64_t>(pairs);
  std::vector<PairResult> parts(pairs);
  ParallelFor(pairs, ResolveThreads(threads), [&](size_t i) {
    const int from = month.dates[i].random_week_id;
    const int to = month.dates[i + 1].random_week_id;
    parts[i] = AttackPair(from, to, day(from), day(to), serials(from),
                          serials(to));
  });
  double chance = 0;
  for (PairResult& p : parts) {
    result.proposed += p.proposed;
    result.correct += p.correct;
    chance += p.chance_sum;
    std::move(p.links.begin(), p.links.end(),
              std::back_inserter(result.links));
  }
  result.chance_baseline =
      result.proposed == 0 ? 0.0 : chance / static_cast<double>(result.proposed);
  return result;
}

LeakageScan ScanForLeaks(std::string_view content,
                         std::span<const std::string> needles) {
  LeakageScan scan;
  scan.bytes_scanned = static_cast<int64_t>(content.size());
  std::map<size_t, absl::flat_hash_set<std::string_view>> by_length;
  for (const std::string& n : needles) {
    if (!n.empty()) by_length[n.size()].insert(n);
  }
  for (const auto& [length, set] : by_length) {
    if (content.size() < length) continue;
    for (size_t i = 0; i + length <= content.size(); ++i) {
      const std::string_view window = content.substr(i, length);
      if (!set.contains(window)) continue;
      ++scan.hits;
      if (scan.first_hits.size() < kMaxListedLeaks) {
        scan.first_hits.emplace_back(window);
      }
    }
  }
  return scan;
}

std::vector<std::string> GroundTruthNeedles(const SyntheticMonth& truth) {
  std::vector<std::string> needles;
  needles.reserve(truth.cards.size() + 32);
  for (const CardProfile& c : truth.cards) needles.push_back(c.serial);
  const absl::CivilMonth month(truth.spec.year, truth.spec.month);
  for (absl::CivilDay d(month); d <= absl::CivilDay(month + 1); ++d) {
    needles.push_back(FormatDate(d));
  }
  return needles;
}

absl::StatusOr<AuditReport> RunAudit(const RunManifest& manifest,
                                     std::span<const ReleaseMonth> months,
                                     const SyntheticMonth* truth,
                                     const SecretKey* key,
                                     const AuditOptions& options) {
  if (truth != nullptr && key == nullptr) {
    return absl::InvalidArgumentError(
        "the linkage audit needs the release key");
  }
  AuditReport report;
  report.config_digest = manifest.config_digest;

  for (int occurrences : {4, 5}) {
    if (manifest.config.weekday_keep_count.value_or(occurrences) >
        occurrences) {
      continue;
    }
    auto sim = MonteCarloInclusion(manifest.config, occurrences,
                                   options.trials, options.seed,
                                   options.threads);
    if (!sim.ok()) return sim.status();
    report.inclusion.push_back(*sim);
  }

  std::vector<std::string> serials;
  std::vector<std::string> needles;
  if (truth != nullptr) {
    if (manifest.input_rows != static_cast<int64_t>(truth->trips.size())) {
      return absl::FailedPreconditionError(absl::StrCat(
          "ground truth does not match the release: manifest counts ",
          manifest.input_rows, " input rows, ground truth has ",
          truth->trips.size(), " trips"));
    }
    for (const CardProfile& c : truth->cards) serials.push_back(c.serial);
    needles = GroundTruthNeedles(*truth);
  }
  bool truth_month_seen = false;
  std::optional<InMemoryRelease> counterfactual;

  for (const ReleaseMonth& release : months) {
    const std::string name =
        std::filesystem::path(release.path).filename().string();
    const MonthSummary* summary = nullptr;
    for (const MonthSummary& m : manifest.months) {
      if (m.file_name == name) summary = &m;
    }
    if (summary == nullptr) {
      return absl::FailedPreconditionError(
          absl::StrCat(name, " is not listed in the manifest"));
    }
    MonthAudit audit;
    audit.year = summary->year;
    audit.month = summary->month;
    audit.file_name = name;
    audit.rows = static_cast<int64_t>(release.rows.size());
    audit.uniqueness = TrajectoryUniqueness(release.rows);
    for (const AnonymizedRecord& r : release.rows) {
      ++audit.rows_per_week_id[r.random_week_id];
    }

    if (truth != nullptr && truth->spec.year == summary->year &&
        truth->spec.month == summary->month) {
      truth_month_seen = true;
      auto resolved =
          ResolvePseudonyms(release.rows, *summary, manifest, *key, serials);
      if (!resolved.ok()) return resolved.status();
      audit.linkage = LinkageAttack(release.rows, *summary, *resolved,
                                    options.threads);
      audit.linkage->links.clear();

      if (!counterfactual) {
        AnonymizationConfig off =
            AnonymizationConfig::SamplingDisabled(manifest.config.run_seed);
        off.time_granularity_minutes = manifest.config.time_granularity_minutes;
        off.circadian_boundary = manifest.config.circadian_boundary;
        const std::vector<RawTransaction> raw = truth->MaterializeAll();
        PipelineOptions pipeline;
        pipeline.threads = options.threads;
        auto run = AnonymizeRecords(raw, off, *key, pipeline);
        if (!run.ok()) return run.status();
        counterfactual = *std::move(run);
      }
      const MonthSummary* off_summary =
          counterfactual->manifest.FindMonth(summary->year, summary->month);
      const auto& off_rows =
          counterfactual->months[{summary->year, summary->month}];
      if (off_summary != nullptr) {
        auto off_resolved = ResolvePseudonyms(
            off_rows, *off_summary, counterfactual->manifest, *key, serials);
        if (!off_resolved.ok()) return off_resolved.status();
        audit.linkage_sampling_off = LinkageAttack(
            off_rows, *off_summary, *off_resolved, options.threads);
        audit.linkage_sampling_off->links.clear();
      }

      auto content = ReadFileToString(release.path);
      if (!content.ok()) return content.status();
      audit.leakage = ScanForLeaks(*content, needles);
      // Offending values are true serials or dates; keep only the count.
      audit.leakage->first_hits.clear();
    }
    report.months.push_back(std::move(audit));
  }
  if (truth != nullptr && !truth_month_seen) {
    return absl::FailedPreconditionError(absl::StrCat(
        "ground truth month ", MonthLabel(truth->spec.year, truth->spec.month),
        " is not part of the release"));
  }
  return report;
}

std::string AuditToJson(const AuditReport& report) {
  json root;
  root["config_digest"] = report.config_digest;
  root["inclusion"] = json::array();
  for (const InclusionSimulation& s : report.inclusion) {
    root["inclusion"].push_back(
        {{"weekday_occurrences", s.weekday_occurrences},
         {"trials", s.trials},
         {"analytic_per_day", s.analytic_per_day},
         {"analytic_streak", s.analytic_streak},
         {"per_day", FrequencyJson(s.per_day)},
         {"streak", FrequencyJson(s.streak)}});
  }
  root["months"] = json::array();
  for (const MonthAudit& m : report.months) {
    json month;
    month["month"] = MonthLabel(m.year, m.month);
    month["file"] = m.file_name;
    month["rows"] = m.rows;
    json buckets;
    for (size_t b = 0; b < kUniquenessBuckets.size(); ++b) {
      buckets[std::string(kUniquenessBuckets[b])] = m.uniqueness.buckets[b];
    }
    json exact;
    for (const auto& [k, n] : m.uniqueness.exact) exact[absl::StrCat(k)] = n;
    month["trajectory_uniqueness"] = {{"card_days", m.uniqueness.card_days},
                                      {"buckets", buckets},
                                      {"exact", exact}};
    json volumes;
    for (const auto& [id, n] : m.rows_per_week_id) {
      volumes[absl::StrCat(id)] = n;
    }
    month["date_reversal"] = {
        {"rows_per_random_week_id", volumes},
        {"note",
         "Daily row counts are published per RandomWeekID together with the "
         "weekday. Matching this profile against a known ridership calendar "
         "(holidays, events, closures) may recover the calendar date."}};
    if (m.linkage) month["linkage"] = LinkageJson(*m.linkage);
    if (m.linkage_sampling_off) {
      month["linkage_sampling_off"] = LinkageJson(*m.linkage_sampling_off);
    }
    if (m.leakage) {
      month["leakage"] = {{"bytes_scanned", m.leakage->bytes_scanned},
                          {"hits", m.leakage->hits}};
    }
    root["months"].push_back(std::move(month));
  }
  return root.dump(2) + "\n";
}

std::string AuditToCsv(const AuditReport& report) {
  std::string out = "section,scope,metric,value\r\n";
  auto row = [&out](std::string_view section, std::string_view scope,
                    std::string_view metric, const auto& value) {
    absl::StrAppend(&out, std::string(section), ",", std::string(scope), ",",
                    std::string(metric), ",", value, "\r\n");
  };
  for (const InclusionSimulation& s : report.inclusion) {
    const std::string scope =
        absl::StrCat("occurrences=", s.weekday_occurrences);
    row("inclusion", scope, "trials", s.trials);
    row("inclusion", scope, "analytic_per_day", s.analytic_per_day);
    row("inclusion", scope, "empirical_per_day", s.per_day.value());
    row("inclusion", scope, "per_day_standard_error",
        s.per_day.standard_error());
    row("inclusion", scope, "analytic_streak", s.analytic_streak);
    row("inclusion", scope, "empirical_streak", s.streak.value());
    row("inclusion", scope, "streak_standard_error", s.streak.standard_error());
  }
  for (const MonthAudit& m : report.months) {
    const std::string scope = MonthLabel(m.year, m.month);
    row("uniqueness", scope, "card_days", m.uniqueness.card_days);
    for (size_t b = 0; b < kUniquenessBuckets.size(); ++b) {
      row("uniqueness", scope, absl::StrCat("k=", std::string(kUniquenessBuckets[b])),
          m.uniqueness.buckets[b]);
    }
    for (const auto& [id, n] : m.rows_per_week_id) {
      row("date_reversal", scope, absl::StrCat("rows_week_id_", id), n);
    }
    auto linkage = [&](std::string_view name, const LinkageResult& r) {
      row(name, scope, "proposed_links", r.proposed);
      row(name, scope, "correct_links", r.correct);
      row(name, scope, "accuracy", r.accuracy());
      row(name, scope, "chance_baseline", r.chance_baseline);
    };
    if (m.linkage) linkage("linkage", *m.linkage);
    if (m.linkage_sampling_off) {
      linkage("linkage_sampling_off", *m.linkage_sampling_off);
    }
    if (m.leakage) row("leakage", scope, "hits", m.leakage->hits);
  }
  return out;
}

}  // namespace transit_anon
