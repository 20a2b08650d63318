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

#include "transit_anon/config.h"

#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "transit_anon/digest.h"

namespace transit_anon {
namespace {

const std::set<std::string, std::less<>>& KnownKeys() {
  static const auto* keys = new std::set<std::string, std::less<>>{
      // anonymize
      "card_sample_rate", "weekday_keep_count", "time_granularity_minutes",
      "circadian_boundary", "run_seed", "key_file",
      // generate
      "card_count", "commuter_fraction", "unique_commuter_fraction",
      "commuter_attendance", "trips_per_commuter_workday", "casual_trip_rate",
      "weekday_multiplier", "weekend_multiplier", "jitter_minutes", "year",
      "month", "seed"};
  return *keys;
}

std::string_view Trim(std::string_view s) {
  const auto is_space = [](char c) {
    return c == ' ' || c == '\t' || c == '\r' || c == '\n';
  };
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
  return s;
}

}  // namespace

absl::StatusOr<double> ParseConfigDouble(std::string_view key,
                                   std::string_view text) {
  double value = 0;
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (text.empty() || ec != std::errc() || ptr != end) {
    return absl::InvalidArgumentError(
        absl::StrCat(std::string(key), ": not a number: '", std::string(text), "'"));
  }
  return value;
}

absl::StatusOr<uint64_t> ParseConfigUnsigned(std::string_view key,
                                       std::string_view text) {
  uint64_t value = 0;
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (text.empty() || ec != std::errc() || ptr != end) {
    return absl::InvalidArgumentError(
        absl::StrCat(std::string(key), ": not an unsigned integer: '",
                     std::string(text), "'"));
  }
  return value;
}

AnonymizationConfig AnonymizationConfig::SamplingDisabled(uint64_t run_seed) {
  AnonymizationConfig config;
  config.card_sample_rate = 1.0;
  config.weekday_keep_count = std::nullopt;
  config.run_seed = run_seed;
  return config;
}

absl::Status ValidateConfig(const AnonymizationConfig& config) {
  if (!(config.card_sample_rate > 0.0 && config.card_sample_rate <= 1.0)) {
    return absl::InvalidArgumentError(
        absl::StrCat("card_sample_rate must be in (0, 1], got ",
                     config.card_sample_rate));
  }
  if (config.weekday_keep_count.has_value() &&
      *config.weekday_keep_count < 1) {
    return absl::InvalidArgumentError(
        absl::StrCat("weekday_keep_count must be >= 1, got ",
                     *config.weekday_keep_count));
  }
  if (config.time_granularity_minutes < 1 ||
      60 % config.time_granularity_minutes != 0) {
    return absl::InvalidArgumentError(
        absl::StrCat("time_granularity_minutes must divide 60, got ",
                     config.time_granularity_minutes));
  }
  return absl::OkStatus();
}

std::string CanonicalConfigText(const AnonymizationConfig& config) {
  return absl::StrFormat(
      "card_sample_rate=%.17g\nweekday_keep_count=%s\n"
      "time_granularity_minutes=%d\ncircadian_boundary=%s\nrun_seed=%d\n",
      config.card_sample_rate,
      config.weekday_keep_count ? absl::StrCat(*config.weekday_keep_count)
                                : "all",
      config.time_granularity_minutes,
      config.circadian_boundary.ToString().substr(0, 5), config.run_seed);
}

std::string ConfigDigest(const AnonymizationConfig& config) {
  const Sha256Digest digest = Sha256(CanonicalConfigText(config));
  return HexEncode(digest);
}

absl::StatusOr<ConfigFile> ConfigFile::Parse(std::string_view text) {
  ConfigFile file;
  int line_number = 0;
  while (!text.empty()) {
    const size_t newline = text.find('\n');
    std::string_view line = text.substr(0, newline);
    text = newline == std::string_view::npos ? std::string_view()
                                             : text.substr(newline + 1);
    ++line_number;
    const size_t hash = line.find('#');
    if (hash != std::string_view::npos) line = line.substr(0, hash);
    line = Trim(line);
    if (line.empty()) continue;
    const size_t eq = line.find('=');
    if (eq == std::string_view::npos) {
      return absl::InvalidArgumentError(
          absl::StrCat("config line ", line_number, ": expected key = value"));
    }
    std::string key(Trim(line.substr(0, eq)));
    std::string value(Trim(line.substr(eq + 1)));
    if (key.empty()) {
      return absl::InvalidArgumentError(
          absl::StrCat("config line ", line_number, ": empty key"));
    }
    if (!file.values_.emplace(key, std::move(value)).second) {
      return absl::InvalidArgumentError(absl::StrCat(
          "config line ", line_number, ": duplicate key '", key, "'"));
    }
  }
  return file;
}

absl::StatusOr<ConfigFile> ConfigFile::Load(const std::string& path) {
  std::ifstream in(path);
  if (!in) return absl::NotFoundError(absl::StrCat("cannot open config ", path));
  std::stringstream buffer;
  buffer << in.rdbuf();
  return Parse(buffer.str());
}

std::optional<std::string> ConfigFile::Get(std::string_view key) const {
  auto it = values_.find(std::string(key));
  if (it == values_.end()) return std::nullopt;
  return it->second;
}

absl::Status ConfigFile::CheckKnownKeys() const {
  for (const auto& [key, value] : values_) {
    if (!KnownKeys().contains(key)) {
      return absl::InvalidArgumentError(
          absl::StrCat("unknown config key '", key, "'"));
    }
  }
  return absl::OkStatus();
}

absl::Status ApplyConfigFile(const ConfigFile& file,
                             AnonymizationConfig& config) {
  if (auto v = file.Get("card_sample_rate")) {
    auto rate = ParseConfigDouble("card_sample_rate", *v);
    if (!rate.ok()) return rate.status();
    config.card_sample_rate = *rate;
  }
  if (auto v = file.Get("weekday_keep_count")) {
    if (*v == "all") {
      config.weekday_keep_count = std::nullopt;
    } else {
      auto keep = ParseInteger(*v);
      if (!keep || *keep < 1 || *keep > 31) {
        return absl::InvalidArgumentError(absl::StrCat(
            "weekday_keep_count: expected 1..31 or 'all', got '", *v, "'"));
      }
      config.weekday_keep_count = static_cast<int>(*keep);
    }
  }
  if (auto v = file.Get("time_granularity_minutes")) {
    auto minutes = ParseInteger(*v);
    if (!minutes || *minutes < 1 || *minutes > 60) {
      return absl::InvalidArgumentError(
          absl::StrCat("time_granularity_minutes: bad value '", *v, "'"));
    }
    config.time_granularity_minutes = static_cast<int>(*minutes);
  }
  if (auto v = file.Get("circadian_boundary")) {
    auto boundary = TimeOfDay::ParseHoursMinutes(*v);
    if (!boundary) {
      return absl::InvalidArgumentError(
          absl::StrCat("circadian_boundary: expected HH:MM, got '", *v, "'"));
    }
    config.circadian_boundary = *boundary;
  }
  if (auto v = file.Get("run_seed")) {
    auto seed = ParseConfigUnsigned("run_seed", *v);
    if (!seed.ok()) return seed.status();
    config.run_seed = *seed;
  }
  return ValidateConfig(config);
}

}  // namespace transit_anon
