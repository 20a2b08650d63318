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

// End-to-end anonymization of a raw transaction stream.
//
// Per record, in order:
//   1. service date = circadian date of tag-on
//   2. month = month of the service date
//   3. drop rows whose service date was not kept by weekday sampling
//   4. drop rows of cards not kept by that date's card sample
//   5. number each card-day's rows by true tag-on time
//   6. replace the serial with the day pseudonym
//   7. truncate tag-on / tag-off times
//   8. attach Year, Month, DayOfWeekID, DayOfWeek, RandomWeekID
//   9. emit, ordered by (RandomWeekID, ClipperCardID, TripSequenceID)
//
// Each service date is processed independently, so output bytes do not
// depend on the number of worker threads.

#ifndef TRANSIT_ANON_PIPELINE_H_
#define TRANSIT_ANON_PIPELINE_H_

#include <istream>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "absl/status/statusor.h"
#include "absl/time/civil_time.h"
#include "transit_anon/config.h"
#include "transit_anon/manifest.h"
#include "transit_anon/model.h"
#include "transit_anon/pseudonym.h"
#include "transit_anon/sampling.h"

namespace transit_anon {

struct PipelineOptions {
  int threads = 1;  // <= 0 means hardware concurrency
  // Count and drop unparseable or invalid rows instead of failing the run.
  bool skip_invalid = false;
  // Replace existing release files in the output directory.
  bool overwrite = false;
};

struct ServiceDayResult {
  std::vector<AnonymizedRecord> rows;  // release order
  DateStats stats;
};

// Stages 4-9 for all rows whose service date is `date` (a retained date of
// `plan`). `rows` must be in input order; ties in tag-on time keep it.
ServiceDayResult AnonymizeServiceDay(absl::CivilDay date,
                                     std::span<const RawTransaction> rows,
                                     const MonthPlan& plan,
                                     const AnonymizationConfig& config,
                                     const SecretKey& key);

struct InMemoryRelease {
  RunManifest manifest;  // file names set, digests empty
  std::map<std::pair<int, int>, std::vector<AnonymizedRecord>> months;
};

// Whole pipeline on records already in memory. Invalid records fail the run
// (or are skipped with options.skip_invalid).
absl::StatusOr<InMemoryRelease> AnonymizeRecords(
    std::span<const RawTransaction> records, const AnonymizationConfig& config,
    const SecretKey& key, const PipelineOptions& options = {});

// Streams raw CSV from `input`, spills retained rows to disk partitioned by
// service date, then writes one release file per month plus the private
// manifest under `output_dir`. Refuses to replace existing files unless
// options.overwrite.
//
// Errors: InvalidArgument for malformed input (row number in the message),
// FailedPrecondition for configuration problems, AlreadyExists for output
// collisions, Unavailable/DataLoss for I/O failures.
absl::StatusOr<RunManifest> AnonymizeStream(std::istream& input,
                                            const std::string& output_dir,
                                            const AnonymizationConfig& config,
                                            const SecretKey& key,
                                            const PipelineOptions& options);

absl::StatusOr<RunManifest> AnonymizeFile(const std::string& input_path,
                                          const std::string& output_dir,
                                          const AnonymizationConfig& config,
                                          const SecretKey& key,
                                          const PipelineOptions& options);

// <output_dir>/private/manifest.json
std::string ManifestPath(const std::string& output_dir);

}  // namespace transit_anon

#endif  // TRANSIT_ANON_PIPELINE_H_
