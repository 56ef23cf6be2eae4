// Copyright 2026 The ETP Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef ETP_TOLL_LOCATION_H_
#define ETP_TOLL_LOCATION_H_

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>

#include "common/bytes.h"
#include "crypto/hash.h"

namespace etp::toll {

inline constexpr int64_t kMicroPerDegree = 1'000'000;

// Fixed-point degrees with six decimals.
struct Location {
  int64_t lat_micro = 0;
  int64_t lon_micro = 0;

  static Location FromDegrees(double lat, double lon);
  double lat_degrees() const { return static_cast<double>(lat_micro) / kMicroPerDegree; }
  double lon_degrees() const { return static_cast<double>(lon_micro) / kMicroPerDegree; }
  bool Valid() const;

  auto operator<=>(const Location&) const = default;
};

struct LocationTuple {
  Location location;
  int64_t time = 0;
  std::string group_id;

  auto operator<=>(const LocationTuple&) const = default;
};

struct TollSession {
  std::string sid;
  int64_t start_time = 0;
  int64_t end_time = 0;

  bool Contains(int64_t t) const { return t >= start_time && t < end_time; }
  bool operator==(const TollSession&) const = default;
};

// "lat|lon|t", e.g. "48.500000|-2.250000|60".
std::string FormatFixed6(int64_t micro);
std::string CanonicalLocationText(const Location& location, int64_t time);
Bytes CanonicalLocationBytes(const Location& location, int64_t time);
// Inverse of CanonicalLocationText; throws Error(kMalformed) on anything
// that is not in canonical form.
std::pair<Location, int64_t> ParseCanonicalLocation(std::string_view text);
// Accepts up to six decimals ("48.5", "-2.25", "7").
int64_t ParseFixed6(std::string_view text);

crypto::Digest HashLocation(const Location& location, int64_t time);

// Equirectangular approximation in meters.
double PlanarDistanceMeters(const Location& a, const Location& b);

}  // namespace etp::toll

#endif  // ETP_TOLL_LOCATION_H_
