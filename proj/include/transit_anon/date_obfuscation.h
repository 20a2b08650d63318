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

#ifndef TRANSIT_ANON_DATE_OBFUSCATION_H_
#define TRANSIT_ANON_DATE_OBFUSCATION_H_

#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "absl/time/civil_time.h"

namespace transit_anon {

// Private bijection from retained service dates to the published
// RandomWeekID values 1..N. Never written to the public release.
class DateIdMap {
 public:
  DateIdMap() = default;

  std::optional<int> Find(absl::CivilDay date) const;
  std::optional<absl::CivilDay> DateFor(int id) const;

  size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  // (date, id) in chronological order.
  const std::vector<std::pair<absl::CivilDay, int>>& entries() const {
    return entries_;
  }

 private:
  friend DateIdMap BuildDateIdMap(std::span<const absl::CivilDay>, uint64_t);
  std::vector<std::pair<absl::CivilDay, int>> entries_;
};

// Assigns ids as a uniformly random permutation of 1..|dates|, so id order
// says nothing about date order. Duplicate dates are collapsed.
DateIdMap BuildDateIdMap(std::span<const absl::CivilDay> retained_dates,
                         uint64_t seed);

}  // namespace transit_anon

#endif  // TRANSIT_ANON_DATE_OBFUSCATION_H_
