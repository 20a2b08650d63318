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
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "absl/strings/str_format.h"
#include "gmock/gmock.h"
#include "gtest/gtest.h"
#include "oracle.h"
#include "test_util.h"
#include "transit_anon/file_util.h"
#include "transit_anon/output_io.h"
#include "transit_anon/raw_io.h"
#include "transit_anon/synthgen.h"
#include "transit_anon/temporal.h"
#include "transit_anon/validate_output.h"

namespace transit_anon {
namespace {

using ::testing::HasSubstr;
using testing::BusTrip;
using testing::RailTrip;
using testing::TempDir;
using testing::TestKey;
using testing::TestKeyBytes;

std::vector<RawTransaction> SmallMonth(int64_t cards, uint64_t seed) {
  PopulationSpec spec;
  spec.card_count = cards;
  spec.seed = seed;
  auto month = GenerateMonth(spec);
  EXPECT_TRUE(month.ok()) << month.status();
  return month->MaterializeAll();
}

std::vector<AnonymizedRecord> Flatten(const InMemoryRelease& release) {
  std::vector<AnonymizedRecord> rows;
  for (const auto& [month, month_rows] : release.months) {
    rows.insert(rows.end(), month_rows.begin(), month_rows.end());
  }
  return rows;
}

std::string Slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

TEST(PipelineTest, MatchesOracle) {
  const auto input = SmallMonth(80, 3);
  ASSERT_GT(input.size(), 2000u);
  for (uint64_t seed : {1u, 2u}) {
    AnonymizationConfig config;
    config.run_seed = seed;
    auto release = AnonymizeRecords(input, config, TestKey());
    ASSERT_TRUE(release.ok()) << release.status();
    oracle::Params p;
    p.seed = seed;
    p.key = TestKeyBytes();
    const auto expected = oracle::Release(p, input);
    ASSERT_FALSE(expected.empty());
    EXPECT_EQ(Flatten(*release), expected);
  }
}

TEST(PipelineTest, OtherParametersMatchOracle) {
  const auto input = SmallMonth(40, 5);
  AnonymizationConfig config;
  config.run_seed = 9;
  config.card_sample_rate = 0.3;
  config.weekday_keep_count = 2;
  config.time_granularity_minutes = 15;
  config.circadian_boundary = TimeOfDay::FromHms(4, 0);
  auto release = AnonymizeRecords(input, config, TestKey());
  ASSERT_TRUE(release.ok()) << release.status();
  oracle::Params p;
  p.seed = 9;
  p.rate = 0.3;
  p.keep = 2;
  p.granularity_minutes = 15;
  p.boundary_hour = 4;
  p.key = TestKeyBytes();
  EXPECT_EQ(Flatten(*release), oracle::Release(p, input));
}

TEST(PipelineTest, RetainedCardCountsAndDates) {
  const auto input = SmallMonth(200, 4);
  AnonymizationConfig config;
  config.run_seed = 21;
  auto release = AnonymizeRecords(input, config, TestKey());
  ASSERT_TRUE(release.ok());
  std::map<absl::CivilDay, std::set<std::string>> active;
  for (const auto& r : input) {
    active[CircadianDate(r.tag_on_at)].insert(r.card_serial);
  }
  const auto& month = release->months.at({2013, 10});
  std::map<int, std::set<std::string>> pseudonyms;
  for (const auto& r : month) pseudonyms[r.random_week_id].insert(r.clipper_card_id);
  const MonthSummary* summary = release->manifest.FindMonth(2013, 10);
  ASSERT_NE(summary, nullptr);
  ASSERT_EQ(summary->dates.size(), 21u);
  std::map<int, int> per_weekday;
  for (const DateStats& d : summary->dates) {
    ++per_weekday[d.day_of_week_id];
    const size_t n = active[d.date].size();
    EXPECT_EQ(pseudonyms[d.random_week_id].size(), RetainedCardCount(n, 0.5))
        << FormatDate(d.date);
    EXPECT_EQ(d.active_cards, static_cast<int64_t>(n));
  }
  for (const auto& [dow, n] : per_weekday) EXPECT_EQ(n, 3);
}

TEST(PipelineTest, SequenceFollowsTrueTimeWithinTruncatedBucket) {
  std::vector<RawTransaction> input = {
      BusTrip("A", absl::CivilSecond(2013, 10, 9, 8, 7, 0)),
      BusTrip("A", absl::CivilSecond(2013, 10, 9, 8, 1, 0)),
      BusTrip("A", absl::CivilSecond(2013, 10, 10, 2, 30, 0)),
  };
  auto config = AnonymizationConfig::SamplingDisabled(1);
  auto release = AnonymizeRecords(input, config, TestKey());
  ASSERT_TRUE(release.ok());
  const auto rows = Flatten(*release);
  ASSERT_EQ(rows.size(), 3u);
  // All three share the 2013-10-09 circadian day and one pseudonym.
  for (const auto& r : rows) {
    EXPECT_EQ(r.clipper_card_id, rows[0].clipper_card_id);
    EXPECT_EQ(r.day_of_week, "Wednesday");
  }
  EXPECT_EQ(rows[0].tag_on_time, TimeOfDay::FromHms(8, 0));
  EXPECT_EQ(rows[1].tag_on_time, TimeOfDay::FromHms(8, 0));
  EXPECT_EQ(rows[2].tag_on_time, TimeOfDay::FromHms(2, 30));
  EXPECT_EQ(rows[0].trip_sequence_id, 1);
  EXPECT_EQ(rows[2].trip_sequence_id, 3);
}

TEST(PipelineTest, LateTripStaysInPreviousMonth) {
  std::vector<RawTransaction> input = {
      RailTrip("A", absl::CivilSecond(2013, 10, 31, 23, 50, 0),
               absl::CivilSecond(2013, 11, 1, 0, 30, 0)),
      BusTrip("A", absl::CivilSecond(2013, 11, 1, 2, 15, 0)),
      BusTrip("A", absl::CivilSecond(2013, 11, 1, 3, 0, 0)),
  };
  auto release = AnonymizeRecords(
      input, AnonymizationConfig::SamplingDisabled(1), TestKey());
  ASSERT_TRUE(release.ok());
  ASSERT_EQ(release->months.size(), 2u);
  EXPECT_EQ(release->months.at({2013, 10}).size(), 2u);
  EXPECT_EQ(release->months.at({2013, 11}).size(), 1u);
  EXPECT_EQ(release->months.at({2013, 10})[0].tag_off_time,
            TimeOfDay::FromHms(0, 30));
}

TEST(PipelineTest, InvalidRecordsFailOrAreSkipped) {
  auto bad = BusTrip("", absl::CivilSecond(2013, 10, 9, 8, 0, 0));
  std::vector<RawTransaction> input = {
      BusTrip("A", absl::CivilSecond(2013, 10, 9, 8, 0, 0)), bad};
  const auto config = AnonymizationConfig::SamplingDisabled(1);
  auto failed = AnonymizeRecords(input, config, TestKey());
  EXPECT_EQ(failed.status().code(), absl::StatusCode::kInvalidArgument);
  PipelineOptions options;
  options.skip_invalid = true;
  auto skipped = AnonymizeRecords(input, config, TestKey(), options);
  ASSERT_TRUE(skipped.ok());
  EXPECT_EQ(skipped->manifest.invalid_rows_skipped, 1);
  EXPECT_EQ(Flatten(*skipped).size(), 1u);
}

TEST(PipelineTest, ConfigErrorsAreFailedPrecondition) {
  AnonymizationConfig config;
  config.weekday_keep_count = 5;
  std::vector<RawTransaction> input = {
      BusTrip("A", absl::CivilSecond(2013, 10, 9, 8, 0, 0))};
  EXPECT_EQ(AnonymizeRecords(input, config, TestKey()).status().code(),
            absl::StatusCode::kFailedPrecondition);
  config = AnonymizationConfig();
  config.time_granularity_minutes = 7;
  EXPECT_EQ(AnonymizeRecords(input, config, TestKey()).status().code(),
            absl::StatusCode::kFailedPrecondition);
}

class StreamTest : public ::testing::Test {
 protected:
  void SetUp() override {
    input_ = SmallMonth(150, 8);
    ASSERT_TRUE(WriteRawCsv(dir_.File("raw.csv"), input_).ok());
    config_.run_seed = 31;
  }

  TempDir dir_;
  std::vector<RawTransaction> input_;
  AnonymizationConfig config_;
};

TEST_F(StreamTest, StreamMatchesInMemoryAndValidates) {
  PipelineOptions options;
  auto manifest = AnonymizeFile(dir_.File("raw.csv"), dir_.File("out"),
                                config_, TestKey(), options);
  ASSERT_TRUE(manifest.ok()) << manifest.status();
  auto memory = AnonymizeRecords(input_, config_, TestKey());
  ASSERT_TRUE(memory.ok());
  const std::string path = dir_.File("out/" + MonthFileName(2013, 10));
  auto rows = ReadMonth(path);
  ASSERT_TRUE(rows.ok());
  EXPECT_EQ(*rows, memory->months.at({2013, 10}));
  EXPECT_EQ(manifest->input_rows, static_cast<int64_t>(input_.size()));
  EXPECT_EQ(manifest->output_rows, static_cast<int64_t>(rows->size()));
  EXPECT_EQ(manifest->input_rows, manifest->output_rows +
                                      manifest->rows_on_dropped_dates +
                                      manifest->rows_of_dropped_cards);
  EXPECT_EQ(manifest->months[0].sha256, HexEncode(Sha256(Slurp(path))));
  auto report = ValidateOutputFile(path);
  ASSERT_TRUE(report.ok());
  EXPECT_TRUE(report->ok()) << report->ToText();
  auto on_disk = ReadManifest(ManifestPath(dir_.File("out")));
  ASSERT_TRUE(on_disk.ok());
  EXPECT_EQ(on_disk->months, manifest->months);
  EXPECT_FALSE(std::filesystem::exists(dir_.File("out/private/spill.tmp")));
}

TEST_F(StreamTest, ThreadCountDoesNotChangeBytes) {
  PipelineOptions one;
  one.threads = 1;
  PipelineOptions four;
  four.threads = 4;
  ASSERT_TRUE(AnonymizeFile(dir_.File("raw.csv"), dir_.File("a"), config_,
                            TestKey(), one)
                  .ok());
  ASSERT_TRUE(AnonymizeFile(dir_.File("raw.csv"), dir_.File("b"), config_,
                            TestKey(), four)
                  .ok());
  const std::string name = MonthFileName(2013, 10);
  EXPECT_EQ(Slurp(dir_.File("a/" + name)), Slurp(dir_.File("b/" + name)));
  EXPECT_EQ(Slurp(ManifestPath(dir_.File("a"))),
            Slurp(ManifestPath(dir_.File("b"))));
}

TEST_F(StreamTest, RefusesToOverwrite) {
  PipelineOptions options;
  ASSERT_TRUE(AnonymizeFile(dir_.File("raw.csv"), dir_.File("out"), config_,
                            TestKey(), options)
                  .ok());
  auto again = AnonymizeFile(dir_.File("raw.csv"), dir_.File("out"), config_,
                             TestKey(), options);
  EXPECT_EQ(again.status().code(), absl::StatusCode::kAlreadyExists);
  options.overwrite = true;
  EXPECT_TRUE(AnonymizeFile(dir_.File("raw.csv"), dir_.File("out"), config_,
                            TestKey(), options)
                  .ok());
}

TEST_F(StreamTest, MissingInputAndBadRows) {
  PipelineOptions options;
  EXPECT_EQ(AnonymizeFile(dir_.File("absent.csv"), dir_.File("out"), config_,
                          TestKey(), options)
                .status()
                .code(),
            absl::StatusCode::kNotFound);
  std::string text = RawHeaderLine();
  AppendRawRow(text, BusTrip("A", absl::CivilSecond(2013, 10, 9, 8, 0, 0)));
  text += "B,not a time,,1,AC Transit,300,F,2,T,,,0.00,119,P\r\n";
  std::istringstream in(text);
  auto result =
      AnonymizeStream(in, dir_.File("bad"), config_, TestKey(), options);
  EXPECT_EQ(result.status().code(), absl::StatusCode::kInvalidArgument);
  EXPECT_THAT(std::string(result.status().message()), HasSubstr("2"));
  std::istringstream again(text);
  options.skip_invalid = true;
  auto skipped =
      AnonymizeStream(again, dir_.File("skip"), config_, TestKey(), options);
  ASSERT_TRUE(skipped.ok()) << skipped.status();
  EXPECT_EQ(skipped->invalid_rows_skipped, 1);
}

}  // namespace
}  // namespace transit_anon
