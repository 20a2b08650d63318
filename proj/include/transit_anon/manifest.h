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

// The private run manifest. It records everything needed to reproduce a
// release from its raw input and key file: the configuration (never the key
// bytes, only a fingerprint), the retained dates of each month with their
// RandomWeekID, per-date counts, and the digest of every output file.
//
// Because it maps RandomWeekID back to calendar dates it must never be
// distributed with the release. It contains no pseudonym-to-serial mapping.
//
// Stored as JSON at <output-dir>/private/manifest.json, schema
// "transit-anon-manifest/1"; keys are emitted sorted.

#ifndef TRANSIT_ANON_MANIFEST_H_
#define TRANSIT_ANON_MANIFEST_H_

#include <cstdint>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "absl/time/civil_time.h"
#include "transit_anon/config.h"

namespace transit_anon {

inline constexpr char kManifestSchema[] = "transit-anon-manifest/1";
inline constexpr char kPrivateDirName[] = "private";
inline constexpr char kManifestFileName[] = "manifest.json";

struct DateStats {
  absl::CivilDay date;
  int random_week_id = 0;
  int day_of_week_id = 0;
  uint64_t card_seed = 0;
  int64_t input_rows = 0;
  int64_t active_cards = 0;
  int64_t retained_cards = 0;
  int64_t output_rows = 0;

  friend bool operator==(const DateStats&, const DateStats&) = default;
};

struct MonthSummary {
  int year = 0;
  int month = 0;
  std::string file_name;
  std::string sha256;
  int64_t rows = 0;
  uint64_t weekday_seed = 0;
  uint64_t date_id_seed = 0;
  std::vector<DateStats> dates;  // chronological, retained dates only

  friend bool operator==(const MonthSummary&, const MonthSummary&) = default;
};

struct RunManifest {
  AnonymizationConfig config;
  std::string config_digest;
  std::string key_fingerprint;
  int64_t input_rows = 0;
  int64_t invalid_rows_skipped = 0;
  int64_t rows_on_dropped_dates = 0;
  int64_t rows_of_dropped_cards = 0;
  int64_t output_rows = 0;
  std::vector<MonthSummary> months;

  const MonthSummary* FindMonth(int year, int month) const;
};

std::string ManifestToJson(const RunManifest& manifest);
absl::StatusOr<RunManifest> ManifestFromJson(const std::string& text);

absl::Status WriteManifest(const RunManifest& manifest,
                           const std::string& path);
absl::StatusOr<RunManifest> ReadManifest(const std::string& path);

}  // namespace transit_anon

#endif  // TRANSIT_ANON_MANIFEST_H_
