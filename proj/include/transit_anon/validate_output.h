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

// Conformance checks for a monthly release file:
//
//   header            exactly the twenty schema names, in order
//   field-count       twenty fields per row
//   parse             every typed field parses (ints, money, HH:MM:SS)
//   card-id           ClipperCardID is non-empty uppercase hex
//   truncation        tag times are multiples of the granularity, seconds 0
//   optional-pairing  route id/name and tag-off time/id/name all-or-nothing
//   sequence-gap      TripSequenceIDs of each (RandomWeekID, ClipperCardID)
//                     are exactly 1..k
//   year-constant     one Year per file
//   month-constant    one Month per file, in 1..12
//   weekday-pair      DayOfWeek is the name of DayOfWeekID
//   day-tuple         one DayOfWeekID per RandomWeekID
//   random-week-id    RandomWeekID values are exactly 1..D

#ifndef TRANSIT_ANON_VALIDATE_OUTPUT_H_
#define TRANSIT_ANON_VALIDATE_OUTPUT_H_

#include <cstdint>
#include <istream>
#include <string>
#include <vector>

#include "absl/status/statusor.h"

namespace transit_anon {

struct OutputViolation {
  int64_t row = 0;  // 0 for file-level rules
  std::string rule;
  std::string detail;
};

struct ConformanceReport {
  // Only the first kMaxListed violations are kept; total_violations counts
  // them all.
  static constexpr size_t kMaxListed = 1000;

  int64_t rows = 0;
  int64_t card_days = 0;
  int64_t distinct_days = 0;
  int64_t total_violations = 0;
  std::vector<OutputViolation> violations;

  bool ok() const { return total_violations == 0; }
  bool HasRule(std::string_view rule) const;
  std::string ToText() const;
};

ConformanceReport ValidateOutput(std::istream& in,
                                 int granularity_minutes = 10);
absl::StatusOr<ConformanceReport> ValidateOutputFile(
    const std::string& path, int granularity_minutes = 10);

}  // namespace transit_anon

#endif  // TRANSIT_ANON_VALIDATE_OUTPUT_H_
