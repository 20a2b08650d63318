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

// transit-anon: generate synthetic fare data, anonymize raw transactions
// into monthly releases, audit a release, validate a release file.

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/string_view.h"
#include "transit_anon/config.h"
#include "transit_anon/file_util.h"
#include "transit_anon/manifest.h"
#include "transit_anon/output_io.h"
#include "transit_anon/pipeline.h"
#include "transit_anon/privacy_audit.h"
#include "transit_anon/pseudonym.h"
#include "transit_anon/synthgen.h"
#include "transit_anon/validate_output.h"

namespace transit_anon {
namespace {

namespace fs = std::filesystem;

enum ExitCode {
  kOk = 0,
  kInternal = 1,
  kUsage = 2,
  kMissingFile = 3,
  kKeyAbsent = 4,
  kInvalidInput = 5,
  kOutputCollision = 6,
  kViolations = 7,
  kConfigError = 8,
};

std::string_view Category(ExitCode code) {
  switch (code) {
    case kOk:
      return "ok";
    case kUsage:
      return "usage error";
    case kMissingFile:
      return "missing file";
    case kKeyAbsent:
      return "key absent";
    case kInvalidInput:
      return "invalid input";
    case kOutputCollision:
      return "output collision";
    case kViolations:
      return "validation failed";
    case kConfigError:
      return "configuration error";
    case kInternal:
      break;
  }
  return "internal error";
}

// absl::string_view so Status::message() passes straight through.
int Fail(ExitCode code, absl::string_view message) {
  std::cerr << "transit-anon: " << Category(code) << ": " << message << "\n";
  return code;
}

int Fail(const absl::Status& status) {
  ExitCode code = kInternal;
  switch (status.code()) {
    case absl::StatusCode::kNotFound:
      code = kMissingFile;
      break;
    case absl::StatusCode::kInvalidArgument:
      code = kInvalidInput;
      break;
    case absl::StatusCode::kAlreadyExists:
      code = kOutputCollision;
      break;
    case absl::StatusCode::kFailedPrecondition:
      code = kConfigError;
      break;
    default:
      break;
  }
  return Fail(code, status.message());
}

// Options shared by several subcommands.
struct CommonFlags {
  std::string input;
  std::string output_dir;
  std::string config_path;
  std::string key_file;
  uint64_t seed = 0;
  int threads = 0;
};

absl::StatusOr<ConfigFile> LoadConfigFile(const std::string& path) {
  if (path.empty()) return ConfigFile();
  if (!fs::exists(path)) {
    return absl::NotFoundError(absl::StrCat("config file ", path));
  }
  auto file = ConfigFile::Load(path);
  if (!file.ok()) {
    return absl::FailedPreconditionError(std::string(file.status().message()));
  }
  if (auto status = file->CheckKnownKeys(); !status.ok()) {
    return absl::FailedPreconditionError(std::string(status.message()));
  }
  return file;
}

absl::StatusOr<AnonymizationConfig> LoadAnonymizationConfig(
    const CommonFlags& flags, bool seed_given) {
  auto file = LoadConfigFile(flags.config_path);
  if (!file.ok()) return file.status();
  AnonymizationConfig config;
  if (auto status = ApplyConfigFile(*file, config); !status.ok()) {
    return absl::FailedPreconditionError(std::string(status.message()));
  }
  if (seed_given) config.run_seed = flags.seed;
  if (auto status = ValidateConfig(config); !status.ok()) {
    return absl::FailedPreconditionError(std::string(status.message()));
  }
  return config;
}

// --key-file, else the config file's key_file, else empty.
std::string KeyFilePath(const CommonFlags& flags) {
  if (!flags.key_file.empty()) return flags.key_file;
  auto file = LoadConfigFile(flags.config_path);
  if (!file.ok()) return "";
  return file->Get("key_file").value_or("");
}

absl::Status EnsureDirectory(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) {
    return absl::UnavailableError(
        absl::StrCat("cannot create ", dir, ": ", ec.message()));
  }
  return absl::OkStatus();
}

absl::Status RefuseExisting(const std::string& path, bool overwrite) {
  if (!overwrite && fs::exists(path)) {
    return absl::AlreadyExistsError(
        absl::StrCat(path, " exists; pass --overwrite to replace it"));
  }
  return absl::OkStatus();
}

// ---------------------------------------------------------------------------

struct GenerateFlags {
  CommonFlags common;
  double scale = 1.0;
  int year = 0;
  int month = 0;
  bool overwrite = false;
};

int RunGenerate(const GenerateFlags& flags, bool seed_given) {
  auto file = LoadConfigFile(flags.common.config_path);
  if (!file.ok()) return Fail(file.status());
  PopulationSpec spec;
  if (auto status = ApplyConfigFile(*file, spec); !status.ok()) {
    return Fail(kConfigError, status.message());
  }
  if (seed_given) spec.seed = flags.common.seed;
  if (flags.year != 0) spec.year = flags.year;
  if (flags.month != 0) spec.month = flags.month;
  if (!(flags.scale > 0)) return Fail(kUsage, "--scale must be positive");
  spec.card_count = std::llround(static_cast<double>(spec.card_count) *
                                 flags.scale);
  if (auto status = ValidatePopulationSpec(spec); !status.ok()) {
    return Fail(kConfigError, status.message());
  }
  std::cerr << "transit-anon: generate: config digest "
            << PopulationSpecDigest(spec) << "\n";

  const std::string& dir = flags.common.output_dir;
  const std::string raw_path =
      (fs::path(dir) / absl::StrCat("raw_", MonthFileName(spec.year, spec.month)
                                                .substr(5)))
          .string();
  const std::string truth_path = (fs::path(dir) / "ground_truth.json").string();
  for (const std::string& path : {raw_path, truth_path}) {
    if (auto status = RefuseExisting(path, flags.overwrite); !status.ok()) {
      return Fail(status);
    }
  }
  if (auto status = EnsureDirectory(dir); !status.ok()) return Fail(status);

  auto month = GenerateMonth(spec, flags.common.threads);
  if (!month.ok()) return Fail(kConfigError, month.status().message());
  if (auto status = WriteSyntheticCsv(*month, raw_path); !status.ok()) {
    return Fail(status);
  }
  if (auto status = WriteGroundTruth(*month, truth_path); !status.ok()) {
    return Fail(status);
  }
  std::cout << "cards: " << month->cards.size() << "\n"
            << "trips: " << month->trips.size() << "\n"
            << "raw: " << raw_path << "\n"
            << "ground truth: " << truth_path << "\n";
  return kOk;
}

// ---------------------------------------------------------------------------

struct AnonymizeFlags {
  CommonFlags common;
  bool skip_invalid = false;
  bool overwrite = false;
  bool generate_key = false;
};

int RunAnonymize(const AnonymizeFlags& flags, bool seed_given) {
  auto config = LoadAnonymizationConfig(flags.common, seed_given);
  if (!config.ok()) return Fail(config.status());
  std::cerr << "transit-anon: anonymize: config digest "
            << ConfigDigest(*config) << "\n";

  const std::string key_file = KeyFilePath(flags.common);
  if (key_file.empty()) {
    return Fail(kKeyAbsent, "--key-file is required");
  }
  absl::StatusOr<SecretKey> key = absl::UnknownError("unset");
  if (flags.generate_key) {
    key = SecretKey::Generate();
    if (!key.ok()) return Fail(key.status());
    if (auto status = key->WriteFile(key_file); !status.ok()) {
      return Fail(status);
    }
    std::cerr << "transit-anon: wrote new key " << key_file
              << "\n";
  } else {
    if (!fs::exists(key_file)) {
      return Fail(kKeyAbsent,
                  absl::StrCat("key file ", key_file,
                               " does not exist (create one with "
                               "--generate-key)"));
    }
    key = SecretKey::ReadFile(key_file);
    if (!key.ok()) return Fail(kKeyAbsent, key.status().message());
  }
  std::cerr << "transit-anon: key fingerprint " << key->Fingerprint() << "\n";

  if (!fs::exists(flags.common.input)) {
    return Fail(kMissingFile, absl::StrCat("input ", flags.common.input));
  }
  PipelineOptions options;
  options.threads = flags.common.threads;
  options.skip_invalid = flags.skip_invalid;
  options.overwrite = flags.overwrite;
  auto manifest = AnonymizeFile(flags.common.input, flags.common.output_dir,
                                *config, *key, options);
  if (!manifest.ok()) return Fail(manifest.status());

  std::cout << "input rows: " << manifest->input_rows << "\n"
            << "invalid rows skipped: " << manifest->invalid_rows_skipped
            << "\n"
            << "rows on dropped dates: " << manifest->rows_on_dropped_dates
            << "\n"
            << "rows of dropped cards: " << manifest->rows_of_dropped_cards
            << "\n"
            << "output rows: " << manifest->output_rows << "\n";
  for (const MonthSummary& m : manifest->months) {
    std::cout << m.file_name << " " << m.rows << " rows sha256 " << m.sha256
              << "\n";
  }
  std::cout << "manifest: " << ManifestPath(flags.common.output_dir) << "\n";
  return kOk;
}

// ---------------------------------------------------------------------------

struct AuditFlags {
  CommonFlags common;
  std::string ground_truth;
  int64_t trials = 100000;
  bool overwrite = false;
};

int RunAudit(const AuditFlags& flags) {
  const std::string manifest_path = ManifestPath(flags.common.input);
  if (!fs::exists(manifest_path)) {
    return Fail(kMissingFile, absl::StrCat("no manifest at ", manifest_path));
  }
  auto manifest = ReadManifest(manifest_path);
  if (!manifest.ok()) return Fail(kInvalidInput, manifest.status().message());
  std::cerr << "transit-anon: audit: config digest "
            << manifest->config_digest << "\n";

  std::vector<ReleaseMonth> months;
  for (const MonthSummary& m : manifest->months) {
    ReleaseMonth release;
    release.path = (fs::path(flags.common.input) / m.file_name).string();
    auto rows = ReadMonth(release.path);
    if (!rows.ok()) return Fail(rows.status());
    release.rows = *std::move(rows);
    months.push_back(std::move(release));
  }

  std::optional<SyntheticMonth> truth;
  std::optional<SecretKey> key;
  if (!flags.ground_truth.empty()) {
    const std::string key_file = KeyFilePath(flags.common);
    if (key_file.empty()) {
      return Fail(kKeyAbsent, "--ground-truth needs --key-file");
    }
    if (!fs::exists(key_file)) {
      return Fail(kKeyAbsent,
                  absl::StrCat("key file ", key_file));
    }
    auto loaded_key = SecretKey::ReadFile(key_file);
    if (!loaded_key.ok()) return Fail(kKeyAbsent, loaded_key.status().message());
    key = *std::move(loaded_key);
    if (!fs::exists(flags.ground_truth)) {
      return Fail(kMissingFile, absl::StrCat("ground truth ", flags.ground_truth));
    }
    auto loaded = ReadGroundTruth(flags.ground_truth);
    if (!loaded.ok()) return Fail(kInvalidInput, loaded.status().message());
    truth = *std::move(loaded);
  }

  AuditOptions options;
  options.trials = flags.trials;
  options.seed = flags.common.seed;
  options.threads = flags.common.threads;
  auto report = transit_anon::RunAudit(*manifest, months,
                                       truth ? &*truth : nullptr,
                                       key ? &*key : nullptr, options);
  if (!report.ok()) {
    // Mismatched inputs are an input problem, not a configuration one.
    if (report.status().code() == absl::StatusCode::kFailedPrecondition) {
      return Fail(kInvalidInput, report.status().message());
    }
    return Fail(report.status());
  }

  const std::string& dir = flags.common.output_dir;
  const std::string json_path = (fs::path(dir) / "audit_report.json").string();
  const std::string csv_path = (fs::path(dir) / "audit_report.csv").string();
  for (const std::string& path : {json_path, csv_path}) {
    if (auto status = RefuseExisting(path, flags.overwrite); !status.ok()) {
      return Fail(status);
    }
  }
  if (auto status = EnsureDirectory(dir); !status.ok()) return Fail(status);
  for (const auto& [path, text] :
       {std::pair{json_path, AuditToJson(*report)},
        std::pair{csv_path, AuditToCsv(*report)}}) {
    auto writer = AtomicFileWriter::Open(path);
    if (!writer.ok()) return Fail(writer.status());
    writer->Append(text);
    if (auto digest = writer->Commit(); !digest.ok()) {
      return Fail(digest.status());
    }
  }

  for (const InclusionSimulation& s : report->inclusion) {
    std::cout << "inclusion occurrences=" << s.weekday_occurrences
              << " analytic=" << s.analytic_per_day
              << " empirical=" << s.per_day.value() << " (se "
              << s.per_day.standard_error() << ")"
              << " streak analytic=" << s.analytic_streak
              << " empirical=" << s.streak.value() << "\n";
  }
  for (const MonthAudit& m : report->months) {
    std::cout << m.file_name << ": " << m.rows << " rows, "
              << m.uniqueness.card_days << " card-days, k=1 card-days "
              << m.uniqueness.buckets[0] << "\n";
    if (m.linkage) {
      std::cout << "  linkage accuracy " << m.linkage->accuracy()
                << " (chance " << m.linkage->chance_baseline << ")\n";
    }
    if (m.linkage_sampling_off) {
      std::cout << "  linkage accuracy with sampling off "
                << m.linkage_sampling_off->accuracy() << " (chance "
                << m.linkage_sampling_off->chance_baseline << ")\n";
    }
    if (m.leakage) {
      std::cout << "  leaked serials/dates: " << m.leakage->hits << "\n";
    }
  }
  std::cout << "report: " << json_path << "\n";
  return kOk;
}

// ---------------------------------------------------------------------------

int RunValidate(const CommonFlags& flags, bool seed_given) {
  auto config = LoadAnonymizationConfig(flags, seed_given);
  if (!config.ok()) return Fail(config.status());
  std::cerr << "transit-anon: validate: config digest "
            << ConfigDigest(*config) << "\n";
  if (!fs::exists(flags.input)) {
    return Fail(kMissingFile, absl::StrCat("input ", flags.input));
  }
  auto report = ValidateOutputFile(flags.input, config->time_granularity_minutes);
  if (!report.ok()) return Fail(report.status());
  std::cout << report->ToText();
  if (!report->ok()) {
    return Fail(kViolations, absl::StrCat(report->total_violations,
                                          " conformance violations"));
  }
  return kOk;
}

int Main(int argc, char** argv) {
  CLI::App app{"Anonymize smart-card fare transactions into monthly "
               "releases."};
  app.require_subcommand(1);
  app.set_version_flag("--version", "transit-anon 1.0.0");

  auto add_common = [](CLI::App* cmd, CommonFlags& f, bool input,
                       bool output, bool key) {
    if (input) {
      cmd->add_option("--input", f.input, "Input path")->required();
    }
    if (output) {
      cmd->add_option("--output-dir", f.output_dir, "Output directory")
          ->required();
    }
    cmd->add_option("--config", f.config_path,
                    "Flat key=value config file; flags override it");
    if (key) {
      cmd->add_option("--key-file", f.key_file,
                      "32-byte secret key file (never logged)");
    }
    cmd->add_option("--seed", f.seed, "Seed (overrides the config file)");
    cmd->add_option("--threads", f.threads,
                    "Worker threads; 0 uses every hardware thread")
        ->check(CLI::NonNegativeNumber);
  };

  GenerateFlags gen;
  CLI::App* generate = app.add_subcommand(
      "generate", "Write a synthetic raw month and its ground truth");
  add_common(generate, gen.common, false, true, false);
  generate->add_option("--scale", gen.scale,
                       "Multiply the configured card count");
  generate->add_option("--year", gen.year, "Year to generate")
      ->check(CLI::Range(1900, 9999));
  generate->add_option("--month", gen.month, "Month to generate (1-12)")
      ->check(CLI::Range(1, 12));
  generate->add_flag("--overwrite", gen.overwrite,
                     "Replace existing output files");

  AnonymizeFlags anon;
  CLI::App* anonymize = app.add_subcommand(
      "anonymize", "Turn a raw CSV into monthly releases plus a manifest");
  add_common(anonymize, anon.common, true, true, true);
  anonymize->add_flag("--skip-invalid", anon.skip_invalid,
                      "Count and drop invalid rows instead of failing");
  anonymize->add_flag("--overwrite", anon.overwrite,
                      "Replace an existing release in --output-dir");
  anonymize->add_flag("--generate-key", anon.generate_key,
                      "Create a new key at --key-file (must not exist)");

  AuditFlags aud;
  CLI::App* audit = app.add_subcommand(
      "audit", "Measure re-identification risk of a release directory");
  add_common(audit, aud.common, true, true, true);
  audit->add_option("--ground-truth", aud.ground_truth,
                    "Ground truth from `generate`; enables the linkage "
                    "attack and leakage scan (needs --key-file)");
  audit->add_option("--trials", aud.trials, "Monte Carlo trials (>= 1000)")
      ->check(CLI::Range(int64_t{1000}, int64_t{100000000}));
  audit->add_flag("--overwrite", aud.overwrite,
                  "Replace existing report files");

  CommonFlags val;
  CLI::App* validate =
      app.add_subcommand("validate", "Check a release file's conformance");
  add_common(validate, val, true, false, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (*generate) {
      return RunGenerate(gen, generate->count("--seed") > 0);
    }
    if (*anonymize) {
      return RunAnonymize(anon, anonymize->count("--seed") > 0);
    }
    if (*audit) return RunAudit(aud);
    return RunValidate(val, validate->count("--seed") > 0);
  } catch (const std::exception& e) {
    return Fail(kInternal, e.what());
  }
}

}  // namespace
}  // namespace transit_anon

int main(int argc, char** argv) { return transit_anon::Main(argc, argv); }
