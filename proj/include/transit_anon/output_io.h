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

// Monthly release files: header of the twenty published column names, one
// AnonymizedRecord per row, times "HH:MM:SS", money with two decimals, empty
// fields for absent optionals.

#ifndef TRANSIT_ANON_OUTPUT_IO_H_
#define TRANSIT_ANON_OUTPUT_IO_H_

#include <span>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "transit_anon/model.h"

namespace transit_anon {

// "anon_<Year>_<MM>.csv".
std::string MonthFileName(int year, int month);

std::string AnonymizedHeaderLine();
void AppendAnonymizedRow(std::string& out, const AnonymizedRecord& record);
absl::StatusOr<AnonymizedRecord> ParseAnonymizedFields(
    std::span<const std::string> fields);

// Atomic write; returns the SHA-256 hex digest of the written bytes.
absl::StatusOr<std::string> WriteMonth(std::span<const AnonymizedRecord> rows,
                                       const std::string& path);
absl::StatusOr<std::vector<AnonymizedRecord>> ReadMonth(
    const std::string& path);

}  // namespace transit_anon

#endif  // TRANSIT_ANON_OUTPUT_IO_H_
