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

#ifndef TRANSIT_ANON_FILE_UTIL_H_
#define TRANSIT_ANON_FILE_UTIL_H_

#include <fstream>
#include <memory>
#include <string>
#include <string_view>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "transit_anon/digest.h"

namespace transit_anon {

// Writes to "<path>.tmp" and renames over `path` on Commit(), so readers
// never observe a partial file. Abandoned writers remove their temp file.
// Commit() returns the SHA-256 (uppercase hex) of everything appended.
class AtomicFileWriter {
 public:
  static absl::StatusOr<AtomicFileWriter> Open(const std::string& path);

  AtomicFileWriter(AtomicFileWriter&&) = default;
  AtomicFileWriter& operator=(AtomicFileWriter&&) = default;
  ~AtomicFileWriter();

  void Append(std::string_view data);
  absl::StatusOr<std::string> Commit();

 private:
  AtomicFileWriter(std::string path, std::string temp_path);

  std::string path_;
  std::string temp_path_;
  std::unique_ptr<std::ofstream> out_;
  std::unique_ptr<Sha256Hasher> hasher_;
  bool committed_ = false;
};

absl::StatusOr<std::string> ReadFileToString(const std::string& path);

}  // namespace transit_anon

#endif  // TRANSIT_ANON_FILE_UTIL_H_
