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

#include "transit_anon/date_obfuscation.h"

#include <algorithm>

#include "transit_anon/rng.h"

namespace transit_anon {

std::optional<int> DateIdMap::Find(absl::CivilDay date) const {
  auto it = std::lower_bound(
      entries_.begin(), entries_.end(), date,
      [](const auto& entry, absl::CivilDay d) { return entry.first < d; });
  if (it == entries_.end() || it->first != date) return std::nullopt;
  return it->second;
}

std::optional<absl::CivilDay> DateIdMap::DateFor(int id) const {
  for (const auto& [date, entry_id] : entries_) {
    if (entry_id == id) return date;
  }
  return std::nullopt;
}

DateIdMap BuildDateIdMap(std::span<const absl::CivilDay> retained_dates,
                         uint64_t seed) {
  std::vector<absl::CivilDay> dates(retained_dates.begin(),
                                    retained_dates.end());
  std::sort(dates.begin(), dates.end());
  dates.erase(std::unique(dates.begin(), dates.end()), dates.end());

  SeededRng rng(seed);
  const std::vector<size_t> permutation =
      SampleIndices(dates.size(), dates.size(), rng);

  DateIdMap map;
  map.entries_.reserve(dates.size());
  for (size_t i = 0; i < dates.size(); ++i) {
    map.entries_.emplace_back(dates[i], static_cast<int>(permutation[i]) + 1);
  }
  return map;
}

}  // namespace transit_anon
