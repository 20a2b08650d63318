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

#include "transit_anon/pipeline.h"

#include <algorithm>
#include <filesystem>
#include <fstream>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_join.h"
#include "transit_anon/file_util.h"
#include "transit_anon/output_io.h"
#include "transit_anon/parallel.h"
#include "transit_anon/raw_io.h"
#include "transit_anon/temporal.h"

namespace transit_anon {
namespace {

namespace fs = std::filesystem;

constexpr size_t kSpillFlushBytes = 256 * 1024;

class PlanCache {
 public:
  explicit PlanCache(const AnonymizationConfig& config) : config_(config) {}

  absl::StatusOr<const MonthPlan*> Get(int year, int month) {
    auto it = plans_.find({year, month});
    if (it != plans_.end()) return &it->second;
    auto plan = BuildMonthPlan(year, month, config_);
    if (!plan.ok()) {
      return absl::FailedPreconditionError(
          absl::StrCat("configuration error: ", plan.status().message()));
    }
    return &plans_.emplace(std::make_pair(year, month), *std::move(plan))
                .first->second;
  }

  const std::map<std::pair<int, int>, MonthPlan>& plans() const {
    return plans_;
  }

 private:
  const AnonymizationConfig& config_;
  std::map<std::pair<int, int>, MonthPlan> plans_;
};

absl::Status RecordProblem(int64_t row_number, const RawTransaction& record) {
  const std::vector<Violation> violations = ValidateRaw(record);
  if (violations.empty()) return absl::OkStatus();
  std::vector<std::string> parts;
  for (const Violation& v : violations) {
    parts.push_back(absl::StrCat(v.field, ": ", v.rule));
  }
  return absl::InvalidArgumentError(
      absl::StrCat("row ", row_number, ": ", absl::StrJoin(parts, "; ")));
}

// Either the parse error or the ValidateRaw violations, as one message.
absl::Status RowProblem(const RawRow& row) {
  if (!row.record.ok()) {
    return absl::InvalidArgumentError(absl::StrCat(
        "row ", row.row_number, ": ", row.record.status().message()));
  }
  return RecordProblem(row.row_number, *row.record);
}

AnonymizedRecord MakeRecord(const RawTransaction& raw,
                            const std::string& pseudonym, int64_t sequence,
                            const MonthPlan& plan, int day_of_week_id,
                            int random_week_id,
                            const AnonymizationConfig& config) {
  const int g = config.time_granularity_minutes;
  AnonymizedRecord r;
  r.clipper_card_id = pseudonym;
  r.trip_sequence_id = sequence;
  r.agency_id = raw.agency_id;
  r.agency_name = raw.agency_name;
  r.route_id = raw.route_id;
  r.route_name = raw.route_name;
  r.fare_amount = raw.fare_amount;
  r.payment_product_id = raw.payment_product_id;
  r.payment_product_name = raw.payment_product_name;
  r.tag_on_time = TruncateTime(TimeOfDay::Of(raw.tag_on_at), g);
  r.tag_on_location_id = raw.tag_on_location_id;
  r.tag_on_location_name = raw.tag_on_location_name;
  if (raw.tag_off_at) {
    r.tag_off_time = TruncateTime(TimeOfDay::Of(*raw.tag_off_at), g);
  }
  r.tag_off_location_id = raw.tag_off_location_id;
  r.tag_off_location_name = raw.tag_off_location_name;
  r.year = plan.year;
  r.month = plan.month;
  r.day_of_week_id = day_of_week_id;
  r.day_of_week = std::string(DayOfWeekName(day_of_week_id));
  r.random_week_id = random_week_id;
  return r;
}

MonthSummary SummarizeMonth(const MonthPlan& plan,
                            std::vector<DateStats> stats) {
  MonthSummary summary;
  summary.year = plan.year;
  summary.month = plan.month;
  summary.file_name = MonthFileName(plan.year, plan.month);
  summary.weekday_seed = plan.weekday_seed;
  summary.date_id_seed = plan.date_id_seed;
  std::sort(stats.begin(), stats.end(),
            [](const DateStats& a, const DateStats& b) { return a.date < b.date; });
  for (const DateStats& s : stats) summary.rows += s.output_rows;
  summary.dates = std::move(stats);
  return summary;
}

// Stats for a retained date that saw no input rows.
DateStats EmptyDateStats(const MonthPlan& plan, absl::CivilDay date) {
  DateStats s;
  s.date = date;
  s.random_week_id = plan.date_ids.Find(date).value_or(0);
  s.day_of_week_id = DayOfWeekId(date);
  s.card_seed = plan.CardSeed(date);
  return s;
}

RunManifest BaseManifest(const AnonymizationConfig& config,
                         const SecretKey& key) {
  RunManifest m;
  m.config = config;
  m.config_digest = ConfigDigest(config);
  m.key_fingerprint = key.Fingerprint();
  return m;
}

// Removes the spill directory on every exit path.
class SpillDirectory {
 public:
  explicit SpillDirectory(fs::path path) : path_(std::move(path)) {}
  ~SpillDirectory() {
    std::error_code ignored;
    fs::remove_all(path_, ignored);
  }
  const fs::path& path() const { return path_; }

 private:
  fs::path path_;
};

struct SpillBucket {
  fs::path path;
  std::string buffer;
  int64_t rows = 0;
};

absl::Status FlushBucket(SpillBucket& bucket) {
  if (bucket.buffer.empty()) return absl::OkStatus();
  std::ofstream out(bucket.path, std::ios::binary | std::ios::app);
  out.write(bucket.buffer.data(),
            static_cast<std::streamsize>(bucket.buffer.size()));
  if (!out) {
    return absl::UnavailableError(
        absl::StrCat("cannot write spill file ", bucket.path.string()));
  }
  bucket.buffer.clear();
  return absl::OkStatus();
}

absl::StatusOr<std::vector<RawTransaction>> ReadSpill(const fs::path& path) {
  std::vector<RawTransaction> rows;
  std::ifstream in(path, std::ios::binary);
  if (!in) return rows;  // no rows were spilled for this date
  RawCsvReader reader(in, /*has_header=*/false);
  while (true) {
    auto row = reader.Next();
    if (!row.ok()) return row.status();
    if (!row->has_value()) break;
    if (!(*row)->record.ok()) {
      return absl::InternalError(absl::StrCat(
          "corrupt spill file ", path.string(), ": ",
          (*row)->record.status().message()));
    }
    rows.push_back(*std::move((*row)->record));
  }
  return rows;
}

}  // namespace

std::string ManifestPath(const std::string& output_dir) {
  return (fs::path(output_dir) / kPrivateDirName / kManifestFileName).string();
}

ServiceDayResult AnonymizeServiceDay(absl::CivilDay date,
                                     std::span<const RawTransaction> rows,
                                     const MonthPlan& plan,
                                     const AnonymizationConfig& config,
                                     const SecretKey& key) {
  ServiceDayResult result;
  DateStats& stats = result.stats;
  stats = EmptyDateStats(plan, date);
  stats.input_rows = static_cast<int64_t>(rows.size());

  std::vector<std::string> serials;
  serials.reserve(rows.size());
  for (const RawTransaction& r : rows) serials.push_back(r.card_serial);
  std::sort(serials.begin(), serials.end());
  serials.erase(std::unique(serials.begin(), serials.end()), serials.end());
  stats.active_cards = static_cast<int64_t>(serials.size());

  const std::vector<std::string> retained = SampleCards(
      std::move(serials), config.card_sample_rate, plan.run_seed, date);
  stats.retained_cards = static_cast<int64_t>(retained.size());

  std::vector<uint32_t> kept;
  kept.reserve(rows.size());
  for (uint32_t i = 0; i < rows.size(); ++i) {
    if (std::binary_search(retained.begin(), retained.end(),
                           rows[i].card_serial)) {
      kept.push_back(i);
    }
  }
  std::stable_sort(kept.begin(), kept.end(), [&](uint32_t a, uint32_t b) {
    return rows[a].card_serial < rows[b].card_serial;
  });

  result.rows.reserve(kept.size());
  std::vector<absl::CivilSecond> times;
  for (size_t begin = 0; begin < kept.size();) {
    const std::string& serial = rows[kept[begin]].card_serial;
    size_t end = begin;
    times.clear();
    while (end < kept.size() && rows[kept[end]].card_serial == serial) {
      times.push_back(rows[kept[end]].tag_on_at);
      ++end;
    }
    const std::vector<int64_t> sequence = AssignTripSequence(times);
    const std::string pseudonym = Pseudonymize(serial, date, key).Hex();
    for (size_t j = begin; j < end; ++j) {
      result.rows.push_back(MakeRecord(rows[kept[j]], pseudonym,
                                       sequence[j - begin], plan,
                                       stats.day_of_week_id,
                                       stats.random_week_id, config));
    }
    begin = end;
  }
  std::sort(result.rows.begin(), result.rows.end(),
            [](const AnonymizedRecord& a, const AnonymizedRecord& b) {
              if (a.clipper_card_id != b.clipper_card_id) {
                return a.clipper_card_id < b.clipper_card_id;
              }
              return a.trip_sequence_id < b.trip_sequence_id;
            });
  stats.output_rows = static_cast<int64_t>(result.rows.size());
  return result;
}

absl::StatusOr<InMemoryRelease> AnonymizeRecords(
    std::span<const RawTransaction> records, const AnonymizationConfig& config,
    const SecretKey& key, const PipelineOptions& options) {
  if (auto status = ValidateConfig(config); !status.ok()) {
    return absl::FailedPreconditionError(
        absl::StrCat("configuration error: ", status.message()));
  }
  InMemoryRelease release;
  RunManifest& manifest = release.manifest;
  manifest = BaseManifest(config, key);

  PlanCache plans(config);
  std::map<absl::CivilDay, std::vector<RawTransaction>> by_date;
  for (size_t i = 0; i < records.size(); ++i) {
    ++manifest.input_rows;
    if (auto problem = RecordProblem(static_cast<int64_t>(i) + 1, records[i]);
        !problem.ok()) {
      if (!options.skip_invalid) return problem;
      ++manifest.invalid_rows_skipped;
      continue;
    }
    const absl::CivilDay date =
        CircadianDate(records[i].tag_on_at, config.circadian_boundary);
    auto plan = plans.Get(static_cast<int>(date.year()), date.month());
    if (!plan.ok()) return plan.status();
    if (!(*plan)->Retains(date)) {
      ++manifest.rows_on_dropped_dates;
      continue;
    }
    by_date[date].push_back(records[i]);
  }

  std::vector<std::pair<const MonthPlan*, absl::CivilDay>> work;
  for (const auto& [month, plan] : plans.plans()) {
    for (absl::CivilDay date : plan.retained_dates) work.emplace_back(&plan, date);
  }
  std::vector<ServiceDayResult> results(work.size());
  ParallelFor(work.size(), ResolveThreads(options.threads), [&](size_t i) {
    const auto& [plan, date] = work[i];
    auto it = by_date.find(date);
    std::span<const RawTransaction> rows;
    if (it != by_date.end()) rows = it->second;
    results[i] = AnonymizeServiceDay(date, rows, *plan, config, key);
  });

  size_t next = 0;
  for (const auto& [month, plan] : plans.plans()) {
    std::vector<ServiceDayResult*> month_results;
    for (size_t d = 0; d < plan.retained_dates.size(); ++d) {
      month_results.push_back(&results[next++]);
    }
    std::sort(month_results.begin(), month_results.end(),
              [](const ServiceDayResult* a, const ServiceDayResult* b) {
                return a->stats.random_week_id < b->stats.random_week_id;
              });
    std::vector<AnonymizedRecord>& out = release.months[month];
    std::vector<DateStats> stats;
    for (ServiceDayResult* r : month_results) {
      manifest.rows_of_dropped_cards += r->stats.input_rows - r->stats.output_rows;
      manifest.output_rows += r->stats.output_rows;
      stats.push_back(r->stats);
      std::move(r->rows.begin(), r->rows.end(), std::back_inserter(out));
    }
    manifest.months.push_back(SummarizeMonth(plan, std::move(stats)));
  }
  return release;
}

absl::StatusOr<RunManifest> AnonymizeStream(std::istream& input,
                                            const std::string& output_dir,
                                            const AnonymizationConfig& config,
                                            const SecretKey& key,
                                            const PipelineOptions& options) {
  if (auto status = ValidateConfig(config); !status.ok()) {
    return absl::FailedPreconditionError(
        absl::StrCat("configuration error: ", status.message()));
  }
  const fs::path out_dir(output_dir);
  const fs::path private_dir = out_dir / kPrivateDirName;
  const std::string manifest_path = ManifestPath(output_dir);
  std::error_code ec;
  fs::create_directories(private_dir, ec);
  if (ec) {
    return absl::UnavailableError(absl::StrCat(
        "cannot create ", private_dir.string(), ": ", ec.message()));
  }
  if (!options.overwrite && fs::exists(manifest_path)) {
    return absl::AlreadyExistsError(absl::StrCat(
        manifest_path, " exists; pass --overwrite to replace the release"));
  }

  SpillDirectory spill(private_dir / "spill.tmp");
  fs::remove_all(spill.path(), ec);
  fs::create_directories(spill.path(), ec);
  if (ec) {
    return absl::UnavailableError(absl::StrCat(
        "cannot create ", spill.path().string(), ": ", ec.message()));
  }

  RunManifest manifest = BaseManifest(config, key);
  PlanCache plans(config);
  std::map<absl::CivilDay, SpillBucket> buckets;

  // Pass 1: validate, assign service dates, drop unsampled dates, spill.
  RawCsvReader reader(input);
  while (true) {
    auto next = reader.Next();
    if (!next.ok()) {
      return absl::InvalidArgumentError(
          absl::StrCat("input: ", next.status().message()));
    }
    if (!next->has_value()) break;
    const RawRow& row = **next;
    ++manifest.input_rows;
    if (auto problem = RowProblem(row); !problem.ok()) {
      if (!options.skip_invalid) return problem;
      ++manifest.invalid_rows_skipped;
      continue;
    }
    const RawTransaction& record = *row.record;
    const absl::CivilDay date =
        CircadianDate(record.tag_on_at, config.circadian_boundary);
    auto plan = plans.Get(static_cast<int>(date.year()), date.month());
    if (!plan.ok()) return plan.status();
    if (!(*plan)->Retains(date)) {
      ++manifest.rows_on_dropped_dates;
      continue;
    }
    SpillBucket& bucket = buckets[date];
    if (bucket.path.empty()) {
      bucket.path = spill.path() / absl::StrCat(FormatDate(date), ".csv");
    }
    AppendRawRow(bucket.buffer, record);
    ++bucket.rows;
    if (bucket.buffer.size() >= kSpillFlushBytes) {
      if (auto status = FlushBucket(bucket); !status.ok()) return status;
    }
  }
  if (input.bad()) return absl::DataLossError("read failed on raw input");
  for (auto& [date, bucket] : buckets) {
    if (auto status = FlushBucket(bucket); !status.ok()) return status;
  }

  if (!options.overwrite) {
    for (const auto& [month, plan] : plans.plans()) {
      const fs::path target = out_dir / MonthFileName(plan.year, plan.month);
      if (fs::exists(target)) {
        return absl::AlreadyExistsError(absl::StrCat(
            target.string(), " exists; pass --overwrite to replace it"));
      }
    }
  }

  // Pass 2: one month at a time, dates in parallel.
  const int threads = ResolveThreads(options.threads);
  for (const auto& [month, plan] : plans.plans()) {
    const size_t n = plan.retained_dates.size();
    std::vector<std::string> chunks(n);
    std::vector<DateStats> stats(n);
    std::vector<absl::Status> errors(n);
    ParallelFor(n, threads, [&](size_t i) {
      const absl::CivilDay date = plan.retained_dates[i];
      auto rows = ReadSpill(spill.path() / absl::StrCat(FormatDate(date), ".csv"));
      if (!rows.ok()) {
        errors[i] = rows.status();
        return;
      }
      ServiceDayResult result =
          AnonymizeServiceDay(date, *rows, plan, config, key);
      for (const AnonymizedRecord& r : result.rows) {
        AppendAnonymizedRow(chunks[i], r);
      }
      stats[i] = result.stats;
    });
    for (const absl::Status& status : errors) {
      if (!status.ok()) return status;
    }

    std::vector<size_t> order(n);
    for (size_t i = 0; i < n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
      return stats[a].random_week_id < stats[b].random_week_id;
    });
    const fs::path target = out_dir / MonthFileName(plan.year, plan.month);
    auto writer = AtomicFileWriter::Open(target.string());
    if (!writer.ok()) return writer.status();
    writer->Append(AnonymizedHeaderLine());
    for (size_t i : order) {
      writer->Append(chunks[i]);
      std::string().swap(chunks[i]);
    }
    auto digest = writer->Commit();
    if (!digest.ok()) return digest.status();

    for (const DateStats& s : stats) {
      manifest.rows_of_dropped_cards += s.input_rows - s.output_rows;
      manifest.output_rows += s.output_rows;
    }
    MonthSummary summary = SummarizeMonth(plan, std::move(stats));
    summary.sha256 = *digest;
    manifest.months.push_back(std::move(summary));
  }

  if (auto status = WriteManifest(manifest, manifest_path); !status.ok()) {
    return status;
  }
  return manifest;
}

absl::StatusOr<RunManifest> AnonymizeFile(const std::string& input_path,
                                          const std::string& output_dir,
                                          const AnonymizationConfig& config,
                                          const SecretKey& key,
                                          const PipelineOptions& options) {
  std::ifstream in(input_path, std::ios::binary);
  if (!in) {
    return absl::NotFoundError(absl::StrCat("cannot open input ", input_path));
  }
  return AnonymizeStream(in, output_dir, config, key, options);
}

}  // namespace transit_anon
