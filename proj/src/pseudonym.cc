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

#include "transit_anon/pseudonym.h"

#include <fcntl.h>
#include <openssl/rand.h>
#include <unistd.h>

#include <algorithm>
#include <cerrno>
#include <cstring>
#include <fstream>
#include <iterator>

#include "absl/strings/str_cat.h"

namespace transit_anon {
namespace {

constexpr std::string_view kPrfContext = "transit-anon/v1";

void AppendLength(std::string& out, size_t n) {
  for (int shift = 24; shift >= 0; shift -= 8) {
    out.push_back(static_cast<char>((n >> shift) & 0xFF));
  }
}

std::string EncodeDate(absl::CivilDay day) {
  const auto year = static_cast<uint32_t>(day.year());
  return std::string{static_cast<char>(year >> 8), static_cast<char>(year),
                     static_cast<char>(day.month()),
                     static_cast<char>(day.day())};
}

}  // namespace

absl::StatusOr<SecretKey> SecretKey::FromBytes(std::span<const uint8_t> bytes) {
  if (bytes.empty()) {
    return absl::InvalidArgumentError(
        "secret key is empty; refusing to pseudonymize without a key");
  }
  return SecretKey(std::vector<uint8_t>(bytes.begin(), bytes.end()));
}

absl::StatusOr<SecretKey> SecretKey::Generate() {
  std::vector<uint8_t> bytes(kFileSize);
  if (RAND_bytes(bytes.data(), static_cast<int>(bytes.size())) != 1) {
    return absl::InternalError("CSPRNG failure while generating key");
  }
  return SecretKey(std::move(bytes));
}

absl::StatusOr<SecretKey> SecretKey::ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return absl::NotFoundError(absl::StrCat("cannot open key file ", path));
  std::vector<uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                             std::istreambuf_iterator<char>());
  if (bytes.size() != kFileSize) {
    return absl::InvalidArgumentError(
        absl::StrCat("key file ", path, " must hold exactly ", kFileSize,
                     " bytes, found ", bytes.size()));
  }
  return FromBytes(bytes);
}

absl::Status SecretKey::WriteFile(const std::string& path) const {
  const int fd = ::open(path.c_str(), O_WRONLY | O_CREAT | O_EXCL, 0600);
  if (fd < 0) {
    if (errno == EEXIST) {
      return absl::AlreadyExistsError(
          absl::StrCat("key file ", path, " already exists"));
    }
    return absl::UnavailableError(
        absl::StrCat("cannot create key file ", path, ": ", strerror(errno)));
  }
  size_t written = 0;
  while (written < bytes_.size()) {
    const ssize_t n =
        ::write(fd, bytes_.data() + written, bytes_.size() - written);
    if (n <= 0) {
      ::close(fd);
      return absl::DataLossError(absl::StrCat("short write to ", path));
    }
    written += static_cast<size_t>(n);
  }
  if (::close(fd) != 0) {
    return absl::DataLossError(absl::StrCat("close failed for ", path));
  }
  return absl::OkStatus();
}

std::string SecretKey::Fingerprint() const {
  const Sha256Digest digest = KeyedPrf(bytes_, "key-fingerprint", {});
  return HexEncode(std::span<const uint8_t>(digest).first(8));
}

Sha256Digest KeyedPrf(std::span<const uint8_t> key, std::string_view label,
                      std::initializer_list<std::string_view> fields) {
  std::string message(kPrfContext);
  message.push_back('\0');
  AppendLength(message, label.size());
  message.append(label);
  for (std::string_view field : fields) {
    AppendLength(message, field.size());
    message.append(field);
  }
  return HmacSha256(key, std::span<const uint8_t>(
                             reinterpret_cast<const uint8_t*>(message.data()),
                             message.size()));
}

DayPseudonym Pseudonymize(std::string_view card_serial,
                          absl::CivilDay service_date, const SecretKey& key) {
  const Sha256Digest digest =
      KeyedPrf(key.bytes(), "pseudonym", {card_serial, EncodeDate(service_date)});
  std::array<uint8_t, DayPseudonym::kBytes> truncated{};
  std::copy_n(digest.begin(), truncated.size(), truncated.begin());
  return DayPseudonym(truncated);
}

uint64_t DeriveSeed(uint64_t run_seed, std::string_view label,
                    std::string_view context) {
  std::array<uint8_t, 8> seed_bytes{};
  for (size_t i = 0; i < seed_bytes.size(); ++i) {
    seed_bytes[i] = static_cast<uint8_t>(run_seed >> (8 * i));
  }
  const Sha256Digest digest =
      KeyedPrf(seed_bytes, "seed/" + std::string(label), {context});
  uint64_t out = 0;
  for (size_t i = 0; i < 8; ++i) out |= uint64_t{digest[i]} << (8 * i);
  return out;
}

}  // namespace transit_anon
