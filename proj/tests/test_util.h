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


#ifndef TRANSIT_ANON_TESTS_TEST_UTIL_H_
#define TRANSIT_ANON_TESTS_TEST_UTIL_H_

#include <cstdlib>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "transit_anon/model.h"
#include "transit_anon/pseudonym.h"

namespace transit_anon::testing {

// A fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  TempDir() {
    std::string pattern =
        (std::filesystem::temp_directory_path() / "transit_anon_XXXXXX")
            .string();
    path_ = ::mkdtemp(pattern.data());
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::string& path() const { return path_; }
  std::string File(const std::string& name) const {
    return (std::filesystem::path(path_) / name).string();
  }

 private:
  std::string path_;
};

inline std::vector<uint8_t> TestKeyBytes() {
  std::vector<uint8_t> bytes(SecretKey::kFileSize);
  for (size_t i = 0; i < bytes.size(); ++i) {
    bytes[i] = static_cast<uint8_t>(0xA5 ^ (i * 7));
  }
  return bytes;
}

inline SecretKey TestKey() { return SecretKey::FromBytes(TestKeyBytes()).value(); }

// A flat-fare bus trip (route, no tag-off).
inline RawTransaction BusTrip(std::string serial, absl::CivilSecond on,
                              int64_t stop = 2) {
  RawTransaction r;
  r.card_serial = std::move(serial);
  r.tag_on_at = on;
  r.agency_id = 1;
  r.agency_name = "AC Transit";
  r.route_id = 300;
  r.route_name = "F";
  r.tag_on_location_id = stop;
  r.tag_on_location_name = "Transbay Terminal";
  r.fare_amount = Money::FromCents(0);
  r.payment_product_id = 119;
  r.payment_product_name = "AC Transit Adult local pass";
  return r;
}

// A distance-fared rail trip (tag-off, no route).
inline RawTransaction RailTrip(std::string serial, absl::CivilSecond on,
                               absl::CivilSecond off, int64_t from = 16,
                               int64_t to = 15) {
  RawTransaction r;
  r.card_serial = std::move(serial);
  r.tag_on_at = on;
  r.tag_off_at = off;
  r.agency_id = 4;
  r.agency_name = "Caltrain";
  r.tag_on_location_id = from;
  r.tag_on_location_name = "San Francisco (4th & King)";
  r.tag_off_location_id = to;
  r.tag_off_location_name = "Millbrae (Caltrain)";
  r.fare_amount = Money::FromCents(425);
  r.payment_product_id = 602;
  r.payment_product_name = "Caltrain Adult cash value";
  return r;
}

}  // namespace transit_anon::testing

#endif  // TRANSIT_ANON_TESTS_TEST_UTIL_H_
