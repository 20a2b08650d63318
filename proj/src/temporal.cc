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

#include "transit_anon/temporal.h"

#include <algorithm>
#include <numeric>

namespace transit_anon {

absl::CivilDay CircadianDate(absl::CivilSecond ts, TimeOfDay boundary) {
  const absl::CivilDay day(ts);
  return TimeOfDay::Of(ts) < boundary ? day - 1 : day;
}

TimeOfDay TruncateTime(TimeOfDay t, int granularity_minutes) {
  const int step = granularity_minutes * 60;
  return TimeOfDay::FromSeconds(t.seconds() - t.seconds() % step);
}

std::vector<int64_t> AssignTripSequence(
    std::span<const absl::CivilSecond> tag_on_times) {
  std::vector<size_t> order(tag_on_times.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) {
    return tag_on_times[a] < tag_on_times[b];
  });
  std::vector<int64_t> sequence(tag_on_times.size());
  for (size_t rank = 0; rank < order.size(); ++rank) {
    sequence[order[rank]] = static_cast<int64_t>(rank) + 1;
  }
  return sequence;
}

}  // namespace transit_anon
