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


// Empirical checks of a release: Monte Carlo inclusion frequencies,
// trajectory k-anonymity, a greedy cross-day linkage attack, and a scan for
// leaked serials or dates. The audit measures; it does not issue a privacy
// verdict.

#ifndef TRANSIT_ANON_PRIVACY_AUDIT_H_
#define TRANSIT_ANON_PRIVACY_AUDIT_H_

#include <array>
#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/statusor.h"
#include "transit_anon/config.h"
#include "transit_anon/manifest.h"
#include "transit_anon/model.h"
#include "transit_anon/pseudonym.h"
#include "transit_anon/synthgen.h"

namespace transit_anon {

// ---------------------------------------------------------------------------
// Inclusion frequencies

struct Frequency {
  int64_t hits = 0;
  int64_t trials = 0;
  double value() const;
  // Binomial standard error sqrt(p (1 - p) / n).
  double standard_error() const;
};

struct InclusionSimulation {
  int weekday_occurrences = 0;
  int64_t trials = 0;
  double analytic_per_day = 0;
  double analytic_streak = 0;
  // One tracked card on one tracked occurrence of each weekday, pooled over
  // the five working weekdays.
  Frequency per_day;
  // The tracked card kept on all five working days of one week.
  Frequency streak;
};

inline constexpr int64_t kMinMonteCarloTrials = 1000;
// Card population of each simulated day; the tracked card is one of them.
inline constexpr int kSimulatedCards = 100;

// Simulates the weekday and card sampling stages over `trials` independent
// month draws. Results do not depend on `threads`.
absl::StatusOr<InclusionSimulation> MonteCarloInclusion(
    const AnonymizationConfig& config, int weekday_occurrences, int64_t trials,
    uint64_t seed, int threads = 1);

// ---------------------------------------------------------------------------
// Trajectories

struct TrajectoryStep {
  int64_t agency_id = 0;
  int64_t tag_on_location_id = 0;
  TimeOfDay tag_on_time;
  std::optional<int64_t> tag_off_location_id;
  std::optional<TimeOfDay> tag_off_time;

  friend auto operator<=>(const TrajectoryStep&,
                          const TrajectoryStep&) = default;
};

using Trajectory = std::vector<TrajectoryStep>;

struct CardDay {
  int random_week_id = 0;
  std::string card_id;
  Trajectory trajectory;  // by TripSequenceID
};

// Card-days ordered by (RandomWeekID, ClipperCardID).
std::vector<CardDay> CollectCardDays(std::span<const AnonymizedRecord> rows);

inline constexpr std::array<std::string_view, 5> kUniquenessBuckets = {
    "1", "2", "3-4", "5-9", "10+"};

struct UniquenessHistogram {
  int64_t card_days = 0;
  // k -> card-days whose trajectory is shared by exactly k pseudonyms that
  // day (k counts the card-day itself).
  std::map<int64_t, int64_t> exact;
  std::array<int64_t, kUniquenessBuckets.size()> buckets{};

  friend bool operator==(const UniquenessHistogram&,
                         const UniquenessHistogram&) = default;
};

size_t UniquenessBucket(int64_t k);

UniquenessHistogram TrajectoryUniqueness(
    std::span<const AnonymizedRecord> rows);

// ---------------------------------------------------------------------------
// Linkage attack

struct ProposedLink {
  int from_week_id = 0;
  int to_week_id = 0;
  std::string from_card;
  std::string to_card;
  bool exact_match = false;
  bool correct = false;
};

struct LinkageResult {
  int64_t day_pairs = 0;
  int64_t proposed = 0;
  int64_t correct = 0;
  // Expected accuracy of linking each pseudonym to a uniformly random
  // pseudonym of the next day.
  double chance_baseline = 0;
  std::vector<ProposedLink> links;
  double accuracy() const;
};

// Resolves each release pseudonym to its true serial through the key, the
// manifest's RandomWeekID -> date map and the ground-truth serials. Any
// pseudonym that does not resolve, or a key whose fingerprint differs from
// the manifest's, is a FailedPrecondition error.
absl::StatusOr<std::map<int, std::map<std::string, std::string>>>
ResolvePseudonyms(std::span<const AnonymizedRecord> rows,
                  const MonthSummary& month, const RunManifest& manifest,
                  const SecretKey& key,
                  std::span<const std::string> true_serials);

// For each pseudonym of a retained day, proposes the pseudonym of the next
// retained day (chronological order) with an identical trajectory, or
// failing that the one sharing the most tagged (agency, location) pairs.
// Ties go to the lowest pseudonym; no link is proposed without any shared
// location. `resolved` comes from ResolvePseudonyms.
LinkageResult LinkageAttack(
    std::span<const AnonymizedRecord> rows, const MonthSummary& month,
    const std::map<int, std::map<std::string, std::string>>& resolved,
    int threads = 1);

// ---------------------------------------------------------------------------
// Leakage

struct LeakageScan {
  int64_t bytes_scanned = 0;
  int64_t hits = 0;
  std::vector<std::string> first_hits;  // up to 10 offending needles
};

// Counts occurrences of any needle in `content`.
LeakageScan ScanForLeaks(std::string_view content,
                         std::span<const std::string> needles);

// True serials and every "YYYY-MM-DD" date of the ground-truth month
// (plus the first day of the next, where late trips land).
std::vector<std::string> GroundTruthNeedles(const SyntheticMonth& truth);

// ---------------------------------------------------------------------------
// Report

struct MonthAudit {
  int year = 0;
  int month = 0;
  std::string file_name;
  int64_t rows = 0;
  UniquenessHistogram uniqueness;
  // Rows per RandomWeekID: the daily volume profile an adversary could
  // match against a known ridership calendar to undo the date ids.
  std::map<int, int64_t> rows_per_week_id;
  std::optional<LinkageResult> linkage;
  // Same raw input and key with rate 1.0 and every date kept.
  std::optional<LinkageResult> linkage_sampling_off;
  std::optional<LeakageScan> leakage;
};

struct AuditReport {
  std::string config_digest;
  std::vector<InclusionSimulation> inclusion;
  std::vector<MonthAudit> months;
};

struct AuditOptions {
  int64_t trials = 100000;
  uint64_t seed = 0;
  int threads = 1;
};

struct ReleaseMonth {
  std::string path;  // release file, for the leakage scan
  std::vector<AnonymizedRecord> rows;
};

// Full audit of a release. With `truth` (and then `key`), also runs the
// linkage attack, its sampling-off counterfactual and the leakage scan;
// a ground truth whose month is not in the release is an error.
absl::StatusOr<AuditReport> RunAudit(const RunManifest& manifest,
                                     std::span<const ReleaseMonth> months,
                                     const SyntheticMonth* truth,
                                     const SecretKey* key,
                                     const AuditOptions& options);

// Pretty JSON; never contains serials, the key, or calendar dates.
std::string AuditToJson(const AuditReport& report);
// "section,scope,metric,value" rows for plotting.
std::string AuditToCsv(const AuditReport& report);

}  // namespace transit_anon

#endif  // TRANSIT_ANON_PRIVACY_AUDIT_H_
