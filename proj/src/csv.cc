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

#include "transit_anon/csv.h"

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"

namespace transit_anon {

absl::StatusOr<bool> CsvReader::Next(std::vector<std::string>& fields) {
  fields.clear();
  if (!std::getline(in_, line_)) return false;
  ++line_number_;
  ++record_number_;
  const int64_t start_line = line_number_;

  std::string field;
  bool in_quotes = false;
  bool after_quote = false;  // just closed a quoted section
  size_t i = 0;
  while (true) {
    if (i == line_.size()) {
      if (!in_quotes) break;
      // Quoted field continues on the next physical line.
      if (!std::getline(in_, line_)) {
        return absl::InvalidArgumentError(
            absl::StrCat("record ", record_number_, " (line ", start_line,
                         "): unterminated quoted field"));
      }
      ++line_number_;
      field.push_back('\n');
      i = 0;
      continue;
    }
    const char c = line_[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < line_.size() && line_[i + 1] == '"') {
          field.push_back('"');
          i += 2;
          continue;
        }
        in_quotes = false;
        after_quote = true;
      } else {
        field.push_back(c);
      }
      ++i;
      continue;
    }
    if (c == ',') {
      fields.push_back(std::move(field));
      field.clear();
      after_quote = false;
    } else if (c == '\r' && i + 1 == line_.size()) {
      // CRLF terminator.
    } else if (after_quote) {
      return absl::InvalidArgumentError(
          absl::StrCat("record ", record_number_, " (line ", line_number_,
                       "): unexpected character after closing quote"));
    } else if (c == '"' && field.empty()) {
      in_quotes = true;
    } else {
      field.push_back(c);
    }
    ++i;
  }
  fields.push_back(std::move(field));
  return true;
}

void AppendCsvField(std::string& out, std::string_view field) {
  if (field.find_first_of(",\"\r\n") == std::string_view::npos) {
    out.append(field);
    return;
  }
  out.push_back('"');
  for (char c : field) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
}

void AppendCsvRecord(std::string& out, std::span<const std::string> fields) {
  for (size_t i = 0; i < fields.size(); ++i) {
    if (i > 0) out.push_back(',');
    AppendCsvField(out, fields[i]);
  }
  out.append("\r\n");
}

void AppendCsvRecord(std::string& out,
                     std::span<const std::string_view> fields) {
  for (size_t i = 0; i < fields.size(); ++i) {
    if (i > 0) out.push_back(',');
    AppendCsvField(out, fields[i]);
  }
  out.append("\r\n");
}

}  // namespace transit_anon
