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

#ifndef TRANSIT_ANON_DIGEST_H_
#define TRANSIT_ANON_DIGEST_H_

#include <array>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <string_view>

#include "absl/status/statusor.h"

namespace transit_anon {

using Sha256Digest = std::array<uint8_t, 32>;

Sha256Digest Sha256(std::span<const uint8_t> data);
Sha256Digest Sha256(std::string_view data);

Sha256Digest HmacSha256(std::span<const uint8_t> key,
                        std::span<const uint8_t> message);

// Uppercase hexadecimal.
std::string HexEncode(std::span<const uint8_t> bytes);

// Incremental SHA-256 for streaming file contents.
class Sha256Hasher {
 public:
  Sha256Hasher();
  ~Sha256Hasher();
  Sha256Hasher(const Sha256Hasher&) = delete;
  Sha256Hasher& operator=(const Sha256Hasher&) = delete;

  void Update(std::string_view data);
  Sha256Digest Finish();

 private:
  struct State;
  std::unique_ptr<State> state_;
};

// SHA-256 of a whole file as uppercase hex.
absl::StatusOr<std::string> FileSha256Hex(const std::string& path);

}  // namespace transit_anon

#endif  // TRANSIT_ANON_DIGEST_H_
