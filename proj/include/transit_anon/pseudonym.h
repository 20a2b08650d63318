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

// Day-scoped card pseudonyms.
//
// A pseudonym is HMAC-SHA256(key, "pseudonym" | serial | service date)
// truncated to 16 bytes and rendered as 32 uppercase hex characters. The
// same card gets the same pseudonym for every transaction of one circadian
// day and an unrelated one on any other day. Without the key the serial can
// not be recovered, even by enumerating the serial space.

#ifndef TRANSIT_ANON_PSEUDONYM_H_
#define TRANSIT_ANON_PSEUDONYM_H_

#include <array>
#include <compare>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/time/civil_time.h"
#include "transit_anon/digest.h"

namespace transit_anon {

// Release-scoped secret. Holds raw bytes only; it has no stream operator and
// no accessor that formats it, so it cannot end up in logs by accident.
class SecretKey {
 public:
  static constexpr size_t kFileSize = 32;

  // Empty keys are refused: an unkeyed hash over the card-serial space is
  // reversible by dictionary attack.
  static absl::StatusOr<SecretKey> FromBytes(std::span<const uint8_t> bytes);
  // 32 bytes from the OS CSPRNG.
  static absl::StatusOr<SecretKey> Generate();

  // A key file is exactly 32 raw bytes.
  static absl::StatusOr<SecretKey> ReadFile(const std::string& path);
  // Creates `path` with owner-only permissions; never overwrites.
  absl::Status WriteFile(const std::string& path) const;

  std::span<const uint8_t> bytes() const { return bytes_; }

  // 16 hex chars identifying the key without revealing it.
  std::string Fingerprint() const;

 private:
  explicit SecretKey(std::vector<uint8_t> bytes) : bytes_(std::move(bytes)) {}
  std::vector<uint8_t> bytes_;
};

class DayPseudonym {
 public:
  static constexpr size_t kBytes = 16;

  DayPseudonym() = default;
  explicit DayPseudonym(const std::array<uint8_t, kBytes>& bytes)
      : bytes_(bytes) {}

  const std::array<uint8_t, kBytes>& bytes() const { return bytes_; }
  // 32 uppercase hex characters. Lexicographic order of the hex equals the
  // order of the bytes.
  std::string Hex() const { return HexEncode(bytes_); }

  friend auto operator<=>(const DayPseudonym&,
                          const DayPseudonym&) = default;

  template <typename H>
  friend H AbslHashValue(H h, const DayPseudonym& p) {
    return H::combine_contiguous(std::move(h), p.bytes_.data(),
                                 p.bytes_.size());
  }

 private:
  std::array<uint8_t, kBytes> bytes_{};
};

// HMAC-SHA256 over a domain label and a list of fields, each length-prefixed
// so that no two distinct (label, fields) tuples share a message.
Sha256Digest KeyedPrf(std::span<const uint8_t> key, std::string_view label,
                      std::initializer_list<std::string_view> fields);

DayPseudonym Pseudonymize(std::string_view card_serial,
                          absl::CivilDay service_date, const SecretKey& key);

// Sub-seed for one stochastic step. Keyed by the run seed; `label` separates
// steps, `context` separates dates or months within a step.
uint64_t DeriveSeed(uint64_t run_seed, std::string_view label,
                    std::string_view context);

}  // namespace transit_anon

#endif  // TRANSIT_ANON_PSEUDONYM_H_
