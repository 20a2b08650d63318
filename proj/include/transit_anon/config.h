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

#ifndef TRANSIT_ANON_CONFIG_H_
#define TRANSIT_ANON_CONFIG_H_

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "transit_anon/model.h"

namespace transit_anon {

// Scheme parameters. The secret key is deliberately not a member: it lives in
// a SecretKey loaded from its own file so a config can be logged or digested
// without exposing it.
struct AnonymizationConfig {
  double card_sample_rate = 0.50;
  // Dates kept per weekday per month; nullopt keeps every date.
  std::optional<int> weekday_keep_count = 3;
  int time_granularity_minutes = 10;
  TimeOfDay circadian_boundary = TimeOfDay::FromHms(3, 0);
  uint64_t run_seed = 0;

  // Rate 1.0 and every day kept: only rotation, date ids and truncation apply.
  static AnonymizationConfig SamplingDisabled(uint64_t run_seed);
};

absl::Status ValidateConfig(const AnonymizationConfig& config);

// Canonical "key=value" lines in a fixed order; stable across runs and used
// as the input of ConfigDigest.
std::string CanonicalConfigText(const AnonymizationConfig& config);
// SHA-256 hex of CanonicalConfigText.
std::string ConfigDigest(const AnonymizationConfig& config);

// Flat "key = value" text. '#' starts a comment; blank lines are ignored;
// duplicate keys are an error.
class ConfigFile {
 public:
  static absl::StatusOr<ConfigFile> Parse(std::string_view text);
  static absl::StatusOr<ConfigFile> Load(const std::string& path);

  const std::map<std::string, std::string>& values() const { return values_; }
  std::optional<std::string> Get(std::string_view key) const;

  // Keys not in the union of known anonymize/generate keys.
  absl::Status CheckKnownKeys() const;

 private:
  std::map<std::string, std::string> values_;
};

// Value parsers shared by the config consumers; errors name the key.
absl::StatusOr<double> ParseConfigDouble(std::string_view key,
                                         std::string_view text);
absl::StatusOr<uint64_t> ParseConfigUnsigned(std::string_view key,
                                             std::string_view text);

// Overlays any anonymization keys present in `file` onto `config`.
absl::Status ApplyConfigFile(const ConfigFile& file,
                             AnonymizationConfig& config);

}  // namespace transit_anon

#endif  // TRANSIT_ANON_CONFIG_H_
