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

// Drives the transit-anon binary as a user would and checks exit codes and
// outputs.

#include <sys/wait.h>

#include <cctype>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "gmock/gmock.h"
#include "gtest/gtest.h"
#include "test_util.h"

namespace transit_anon {
namespace {

using ::testing::HasSubstr;
using ::testing::Not;
using testing::TempDir;

struct Result {
  int code = -1;
  std::string output;
};

Result RunCli(const std::string& args) {
  const std::string command =
      std::string(TRANSIT_ANON_BINARY) + " " + args + " 2>&1";
  Result result;
  FILE* pipe = ::popen(command.c_str(), "r");
  if (pipe == nullptr) return result;
  char buffer[4096];
  size_t n = 0;
  while ((n = std::fread(buffer, 1, sizeof(buffer), pipe)) > 0) {
    result.output.append(buffer, n);
  }
  const int status = ::pclose(pipe);
  result.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return result;
}

std::string Slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void Write(const std::string& path, const std::string& text) {
  std::ofstream(path, std::ios::binary) << text;
}

class CliTest : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    dir_ = new TempDir();
    Write(dir_->File("gen.conf"), "card_count = 300\nseed = 4\n");
    const Result r = RunCli("generate --output-dir " + dir_->File("gen") +
                         " --config " + dir_->File("gen.conf"));
    ASSERT_EQ(r.code, 0) << r.output;
    raw_ = dir_->File("gen/raw_2013_10.csv");
    truth_ = dir_->File("gen/ground_truth.json");
    key_ = dir_->File("release.key");
  }
  static void TearDownTestSuite() { delete dir_; }

  static TempDir* dir_;
  static std::string raw_;
  static std::string truth_;
  static std::string key_;
};

TempDir* CliTest::dir_ = nullptr;
std::string CliTest::raw_;
std::string CliTest::truth_;
std::string CliTest::key_;

TEST_F(CliTest, UsageAndHelp) {
  EXPECT_EQ(RunCli("").code, 2);
  EXPECT_EQ(RunCli("frobnicate").code, 2);
  const Result help = RunCli("--help");
  EXPECT_EQ(help.code, 0);
  for (const char* sub : {"generate", "anonymize", "audit", "validate"}) {
    EXPECT_THAT(help.output, HasSubstr(sub));
  }
  const Result anon_help = RunCli("anonymize --help");
  EXPECT_EQ(anon_help.code, 0);
  for (const char* flag : {"--input", "--output-dir", "--config", "--key-file",
                           "--seed", "--threads", "--skip-invalid"}) {
    EXPECT_THAT(anon_help.output, HasSubstr(flag));
  }
  EXPECT_THAT(RunCli("--version").output, HasSubstr("transit-anon"));
  EXPECT_EQ(RunCli("anonymize --input x").code, 2);
}

TEST_F(CliTest, GenerateWroteBothFiles) {
  EXPECT_TRUE(std::filesystem::exists(raw_));
  EXPECT_TRUE(std::filesystem::exists(truth_));
  const Result again = RunCli("generate --output-dir " + dir_->File("gen") +
                           " --config " + dir_->File("gen.conf"));
  EXPECT_EQ(again.code, 6) << again.output;
}

TEST_F(CliTest, AnonymizeValidateAudit) {
  const std::string out = dir_->File("release");
  const std::string key = dir_->File("flow.key");
  const Result no_key =
      RunCli("anonymize --input " + raw_ + " --output-dir " + out);
  EXPECT_EQ(no_key.code, 4) << no_key.output;
  const Result absent_key = RunCli("anonymize --input " + raw_ +
                                " --output-dir " + out + " --key-file " + key);
  EXPECT_EQ(absent_key.code, 4) << absent_key.output;

  const Result first = RunCli("anonymize --input " + raw_ + " --output-dir " +
                           out + " --key-file " + key +
                           " --generate-key --seed 5");
  ASSERT_EQ(first.code, 0) << first.output;
  EXPECT_THAT(first.output, HasSubstr("config digest"));
  const std::string key_bytes = Slurp(key);
  EXPECT_EQ(key_bytes.size(), 32u);
  EXPECT_EQ(std::filesystem::status(key).permissions() &
                (std::filesystem::perms::group_all |
                 std::filesystem::perms::others_all),
            std::filesystem::perms::none);

  const Result collision = RunCli("anonymize --input " + raw_ +
                               " --output-dir " + out + " --key-file " + key +
                               " --seed 5");
  EXPECT_EQ(collision.code, 6) << collision.output;

  const std::string release = out + "/anon_2013_10.csv";
  const Result valid = RunCli("validate --input " + release);
  EXPECT_EQ(valid.code, 0) << valid.output;

  const Result audit = RunCli("audit --input " + out + " --output-dir " +
                           dir_->File("audit") + " --ground-truth " + truth_ +
                           " --key-file " + key + " --trials 2000");
  ASSERT_EQ(audit.code, 0) << audit.output;
  const std::string report = Slurp(dir_->File("audit/audit_report.json"));
  EXPECT_THAT(report, HasSubstr("trajectory_uniqueness"));
  EXPECT_THAT(report, Not(HasSubstr("2013-10-0")));
  EXPECT_TRUE(std::filesystem::exists(dir_->File("audit/audit_report.csv")));

  const Result audit_no_key = RunCli("audit --input " + out + " --output-dir " +
                                  dir_->File("audit2") + " --ground-truth " +
                                  truth_ + " --trials 2000");
  EXPECT_EQ(audit_no_key.code, 4) << audit_no_key.output;
  // A key other than the release key cannot resolve the release.
  const std::string other = dir_->File("other.key");
  Write(other, std::string(32, 'k'));
  const Result wrong_key = RunCli("audit --input " + out + " --output-dir " +
                               dir_->File("audit3") + " --ground-truth " +
                               truth_ + " --key-file " + other +
                               " --trials 2000");
  EXPECT_EQ(wrong_key.code, 5) << wrong_key.output;
}

TEST_F(CliTest, KeyNeverPrinted) {
  const std::string key = dir_->File("printed.key");
  const Result r = RunCli("anonymize --input " + raw_ + " --output-dir " +
                       dir_->File("printed") + " --key-file " + key +
                       " --generate-key");
  ASSERT_EQ(r.code, 0) << r.output;
  const std::string bytes = Slurp(key);
  static constexpr char kHex[] = "0123456789ABCDEF";
  std::string hex_upper, hex_lower;
  for (unsigned char c : bytes) {
    hex_upper += kHex[c >> 4];
    hex_upper += kHex[c & 15];
  }
  for (char c : hex_upper) hex_lower += static_cast<char>(std::tolower(c));
  EXPECT_THAT(r.output, Not(HasSubstr(hex_upper)));
  EXPECT_THAT(r.output, Not(HasSubstr(hex_lower)));
  EXPECT_THAT(Slurp(dir_->File("printed/private/manifest.json")),
              Not(HasSubstr(hex_lower)));
}

TEST_F(CliTest, ThreadsDoNotChangeOutput) {
  const std::string key = dir_->File("det.key");
  Write(key, std::string(32, 'd'));
  for (const char* threads : {"1", "3"}) {
    const Result r = RunCli("anonymize --input " + raw_ + " --output-dir " +
                         dir_->File(std::string("det") + threads) +
                         " --key-file " + key + " --seed 9 --threads " +
                         threads);
    ASSERT_EQ(r.code, 0) << r.output;
  }
  EXPECT_EQ(Slurp(dir_->File("det1/anon_2013_10.csv")),
            Slurp(dir_->File("det3/anon_2013_10.csv")));
}

TEST_F(CliTest, KeyFileFromConfig) {
  const std::string key = dir_->File("conf.key");
  Write(key, std::string(32, 'c'));
  Write(dir_->File("key.conf"), "key_file = " + key + "\nrun_seed = 3\n");
  const Result r = RunCli("anonymize --input " + raw_ + " --output-dir " +
                          dir_->File("conf_out") + " --config " +
                          dir_->File("key.conf"));
  EXPECT_EQ(r.code, 0) << r.output;
}

TEST_F(CliTest, ErrorExitCodes) {
  const std::string key = dir_->File("err.key");
  Write(key, std::string(32, 'e'));
  const Result missing = RunCli("anonymize --input " + dir_->File("absent.csv") +
                             " --output-dir " + dir_->File("e1") +
                             " --key-file " + key);
  EXPECT_EQ(missing.code, 3) << missing.output;

  Write(dir_->File("bad.conf"), "card_sample_rate = 2\n");
  const Result bad_config = RunCli("anonymize --input " + raw_ +
                                " --output-dir " + dir_->File("e2") +
                                " --key-file " + key + " --config " +
                                dir_->File("bad.conf"));
  EXPECT_EQ(bad_config.code, 8) << bad_config.output;
  Write(dir_->File("unknown.conf"), "colour = blue\n");
  EXPECT_EQ(RunCli("anonymize --input " + raw_ + " --output-dir " +
                dir_->File("e3") + " --key-file " + key + " --config " +
                dir_->File("unknown.conf"))
                .code,
            8);

  std::string raw = Slurp(raw_);
  raw += "CS1,yesterday,,1,AC Transit,300,F,2,T,,,0.00,119,P\r\n";
  Write(dir_->File("bad.csv"), raw);
  const Result bad_row = RunCli("anonymize --input " + dir_->File("bad.csv") +
                             " --output-dir " + dir_->File("e4") +
                             " --key-file " + key);
  EXPECT_EQ(bad_row.code, 5) << bad_row.output;
  const Result skipped = RunCli("anonymize --input " + dir_->File("bad.csv") +
                             " --output-dir " + dir_->File("e5") +
                             " --key-file " + key + " --skip-invalid");
  EXPECT_EQ(skipped.code, 0) << skipped.output;

  Write(dir_->File("broken.csv"), "ClipperCardID\r\nX\r\n");
  EXPECT_EQ(RunCli("validate --input " + dir_->File("broken.csv")).code, 7);
  EXPECT_EQ(RunCli("validate --input " + dir_->File("nothing.csv")).code, 3);
}

}  // namespace
}  // namespace transit_anon
