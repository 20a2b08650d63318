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

#include "transit_anon/file_util.h"

#include <filesystem>
#include <sstream>

#include "absl/strings/str_cat.h"

namespace transit_anon {

AtomicFileWriter::AtomicFileWriter(std::string path, std::string temp_path)
    : path_(std::move(path)),
      temp_path_(std::move(temp_path)),
      hasher_(std::make_unique<Sha256Hasher>()) {}

absl::StatusOr<AtomicFileWriter> AtomicFileWriter::Open(
    const std::string& path) {
  AtomicFileWriter writer(path, path + ".tmp");
  writer.out_ = std::make_unique<std::ofstream>(
      writer.temp_path_, std::ios::binary | std::ios::trunc);
  if (!*writer.out_) {
    return absl::UnavailableError(
        absl::StrCat("cannot create ", writer.temp_path_));
  }
  return writer;
}

AtomicFileWriter::~AtomicFileWriter() {
  if (out_ != nullptr && !committed_) {
    out_->close();
    std::error_code ignored;
    std::filesystem::remove(temp_path_, ignored);
  }
}

void AtomicFileWriter::Append(std::string_view data) {
  out_->write(data.data(), static_cast<std::streamsize>(data.size()));
  hasher_->Update(data);
}

absl::StatusOr<std::string> AtomicFileWriter::Commit() {
  out_->flush();
  if (!*out_) {
    return absl::DataLossError(absl::StrCat("write failed: ", temp_path_));
  }
  out_->close();
  std::error_code ec;
  std::filesystem::rename(temp_path_, path_, ec);
  if (ec) {
    return absl::DataLossError(absl::StrCat("cannot rename ", temp_path_,
                                            " to ", path_, ": ", ec.message()));
  }
  committed_ = true;
  return HexEncode(hasher_->Finish());
}

absl::StatusOr<std::string> ReadFileToString(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return absl::NotFoundError(absl::StrCat("cannot open ", path));
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

}  // namespace transit_anon
