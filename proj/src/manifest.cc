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

#include "transit_anon/manifest.h"

#include "absl/strings/str_cat.h"
#include "json.hpp"
#include "transit_anon/file_util.h"
#include "transit_anon/model.h"

namespace transit_anon {
namespace {

using nlohmann::json;

// Seeds are 64-bit; JSON consumers often read numbers as doubles, so they
// are stored as decimal strings.
std::string SeedText(uint64_t seed) { return absl::StrCat(seed); }

absl::StatusOr<uint64_t> SeedFrom(const json& j) {
  return ParseConfigUnsigned("seed", j.get<std::string>());
}

}  // namespace

const MonthSummary* RunManifest::FindMonth(int year, int month) const {
  for (const MonthSummary& m : months) {
    if (m.year == year && m.month == month) return &m;
  }
  return nullptr;
}

std::string ManifestToJson(const RunManifest& manifest) {
  json root;
  root["schema"] = kManifestSchema;
  const AnonymizationConfig& c = manifest.config;
  root["config"] = {
      {"card_sample_rate", c.card_sample_rate},
      {"weekday_keep_count", c.weekday_keep_count
                                 ? json(*c.weekday_keep_count)
                                 : json("all")},
      {"time_granularity_minutes", c.time_granularity_minutes},
      {"circadian_boundary", c.circadian_boundary.ToString().substr(0, 5)},
      {"run_seed", SeedText(c.run_seed)},
  };
  root["config_digest"] = manifest.config_digest;
  root["key_fingerprint"] = manifest.key_fingerprint;
  root["counts"] = {
      {"input_rows", manifest.input_rows},
      {"invalid_rows_skipped", manifest.invalid_rows_skipped},
      {"rows_on_dropped_dates", manifest.rows_on_dropped_dates},
      {"rows_of_dropped_cards", manifest.rows_of_dropped_cards},
      {"output_rows", manifest.output_rows},
  };
  json months = json::array();
  for (const MonthSummary& m : manifest.months) {
    json dates = json::array();
    for (const DateStats& d : m.dates) {
      dates.push_back({
          {"date", FormatDate(d.date)},
          {"random_week_id", d.random_week_id},
          {"day_of_week_id", d.day_of_week_id},
          {"card_seed", SeedText(d.card_seed)},
          {"input_rows", d.input_rows},
          {"active_cards", d.active_cards},
          {"retained_cards", d.retained_cards},
          {"output_rows", d.output_rows},
      });
    }
    months.push_back({
        {"year", m.year},
        {"month", m.month},
        {"file", m.file_name},
        {"sha256", m.sha256},
        {"rows", m.rows},
        {"weekday_seed", SeedText(m.weekday_seed)},
        {"date_id_seed", SeedText(m.date_id_seed)},
        {"dates", std::move(dates)},
    });
  }
  root["months"] = std::move(months);
  return root.dump(2) + "\n";
}

absl::StatusOr<RunManifest> ManifestFromJson(const std::string& text) {
  try {
    const json root = json::parse(text);
    if (root.at("schema").get<std::string>() != kManifestSchema) {
      return absl::InvalidArgumentError("unsupported manifest schema");
    }
    RunManifest m;
    const json& c = root.at("config");
    m.config.card_sample_rate = c.at("card_sample_rate").get<double>();
    if (c.at("weekday_keep_count").is_string()) {
      m.config.weekday_keep_count = std::nullopt;
    } else {
      m.config.weekday_keep_count = c.at("weekday_keep_count").get<int>();
    }
    m.config.time_granularity_minutes =
        c.at("time_granularity_minutes").get<int>();
    auto boundary = TimeOfDay::ParseHoursMinutes(
        c.at("circadian_boundary").get<std::string>());
    if (!boundary) return absl::InvalidArgumentError("bad circadian_boundary");
    m.config.circadian_boundary = *boundary;
    auto run_seed = SeedFrom(c.at("run_seed"));
    if (!run_seed.ok()) return run_seed.status();
    m.config.run_seed = *run_seed;

    m.config_digest = root.at("config_digest").get<std::string>();
    m.key_fingerprint = root.at("key_fingerprint").get<std::string>();
    const json& counts = root.at("counts");
    m.input_rows = counts.at("input_rows").get<int64_t>();
    m.invalid_rows_skipped = counts.at("invalid_rows_skipped").get<int64_t>();
    m.rows_on_dropped_dates = counts.at("rows_on_dropped_dates").get<int64_t>();
    m.rows_of_dropped_cards = counts.at("rows_of_dropped_cards").get<int64_t>();
    m.output_rows = counts.at("output_rows").get<int64_t>();

    for (const json& jm : root.at("months")) {
      MonthSummary month;
      month.year = jm.at("year").get<int>();
      month.month = jm.at("month").get<int>();
      month.file_name = jm.at("file").get<std::string>();
      month.sha256 = jm.at("sha256").get<std::string>();
      month.rows = jm.at("rows").get<int64_t>();
      auto ws = SeedFrom(jm.at("weekday_seed"));
      auto ds = SeedFrom(jm.at("date_id_seed"));
      if (!ws.ok()) return ws.status();
      if (!ds.ok()) return ds.status();
      month.weekday_seed = *ws;
      month.date_id_seed = *ds;
      for (const json& jd : jm.at("dates")) {
        DateStats d;
        auto date = ParseDate(jd.at("date").get<std::string>());
        if (!date) return absl::InvalidArgumentError("bad date in manifest");
        d.date = *date;
        d.random_week_id = jd.at("random_week_id").get<int>();
        d.day_of_week_id = jd.at("day_of_week_id").get<int>();
        auto cs = SeedFrom(jd.at("card_seed"));
        if (!cs.ok()) return cs.status();
        d.card_seed = *cs;
        d.input_rows = jd.at("input_rows").get<int64_t>();
        d.active_cards = jd.at("active_cards").get<int64_t>();
        d.retained_cards = jd.at("retained_cards").get<int64_t>();
        d.output_rows = jd.at("output_rows").get<int64_t>();
        month.dates.push_back(d);
      }
      m.months.push_back(std::move(month));
    }
    return m;
  } catch (const json::exception& e) {
    return absl::InvalidArgumentError(
        absl::StrCat("malformed manifest: ", e.what()));
  }
}

absl::Status WriteManifest(const RunManifest& manifest,
                           const std::string& path) {
  auto writer = AtomicFileWriter::Open(path);
  if (!writer.ok()) return writer.status();
  writer->Append(ManifestToJson(manifest));
  return writer->Commit().status();
}

absl::StatusOr<RunManifest> ReadManifest(const std::string& path) {
  auto text = ReadFileToString(path);
  if (!text.ok()) return text.status();
  return ManifestFromJson(*text);
}

}  // namespace transit_anon
