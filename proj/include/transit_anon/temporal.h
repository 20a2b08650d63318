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

// Circadian service days, time truncation and within-day trip numbering.
//
// A circadian day starts at the boundary (03:00 by default) and runs to the
// same wall-clock time the next morning, so a 01:30 tag belongs to the
// previous calendar date. All arithmetic is on local wall-clock time; a
// spring-forward day simply has no 02:00-03:00 hour.

#ifndef TRANSIT_ANON_TEMPORAL_H_
#define TRANSIT_ANON_TEMPORAL_H_

#include <cstdint>
#include <span>
#include <vector>

#include "absl/time/civil_time.h"
#include "transit_anon/model.h"

namespace transit_anon {

inline constexpr TimeOfDay kDefaultCircadianBoundary = TimeOfDay::FromHms(3, 0);

// The calendar date on which the circadian day containing `ts` began.
absl::CivilDay CircadianDate(absl::CivilSecond ts,
                             TimeOfDay boundary = kDefaultCircadianBoundary);

// Floors `t` to a multiple of `granularity_minutes` and zeroes the seconds.
// Requires 60 % granularity_minutes == 0.
TimeOfDay TruncateTime(TimeOfDay t, int granularity_minutes);

// Trip sequence numbers for one card's records within one circadian day.
// result[i] is the 1-based rank of tag_on_times[i] in ascending true time;
// equal timestamps keep their input order.
std::vector<int64_t> AssignTripSequence(
    std::span<const absl::CivilSecond> tag_on_times);

}  // namespace transit_anon

#endif  // TRANSIT_ANON_TEMPORAL_H_
