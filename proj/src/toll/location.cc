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

#include "toll/location.h"

#include <charconv>
#include <cmath>
#include <cstdlib>

#include "common/error.h"

namespace etp::toll {

namespace {

constexpr double kEarthRadiusMeters = 6'371'000.0;
constexpr double kPi = 3.14159265358979323846;

}  // namespace

Location Location::FromDegrees(double lat, double lon) {
  return {static_cast<int64_t>(std::llround(lat * kMicroPerDegree)),
          static_cast<int64_t>(std::llround(lon * kMicroPerDegree))};
}

bool Location::Valid() const {
  return std::llabs(lat_micro) <= 90 * kMicroPerDegree &&
         std::llabs(lon_micro) <= 180 * kMicroPerDegree;
}

std::string FormatFixed6(int64_t micro) {
  uint64_t mag = micro < 0 ? static_cast<uint64_t>(-(micro + 1)) + 1
                           : static_cast<uint64_t>(micro);
  std::string frac = std::to_string(mag % kMicroPerDegree);
  std::string out = micro < 0 ? "-" : "";
  out += std::to_string(mag / kMicroPerDegree);
  out += '.';
  out.append(6 - frac.size(), '0');
  out += frac;
  return out;
}

std::string CanonicalLocationText(const Location& location, int64_t time) {
  return FormatFixed6(location.lat_micro) + "|" +
         FormatFixed6(location.lon_micro) + "|" + std::to_string(time);
}

Bytes CanonicalLocationBytes(const Location& location, int64_t time) {
  return ToBytes(CanonicalLocationText(location, time));
}

int64_t ParseFixed6(std::string_view text) {
  auto fail = [&] {
    return Error(ErrorCode::kMalformed,
                 "bad fixed-point value '" + std::string(text) + "'");
  };
  bool negative = !text.empty() && text.front() == '-';
  std::string_view body = negative ? text.substr(1) : text;
  size_t dot = body.find('.');
  std::string_view whole = body.substr(0, dot);
  std::string_view frac =
      dot == std::string_view::npos ? std::string_view{} : body.substr(dot + 1);
  if (whole.empty() || frac.size() > 6 ||
      (dot != std::string_view::npos && frac.empty())) {
    throw fail();
  }
  int64_t w = 0;
  auto [p1, e1] = std::from_chars(whole.data(), whole.data() + whole.size(), w);
  if (e1 != std::errc() || p1 != whole.data() + whole.size() || w < 0 ||
      w > 1'000'000) {
    throw fail();
  }
  int64_t f = 0;
  if (!frac.empty()) {
    auto [p2, e2] = std::from_chars(frac.data(), frac.data() + frac.size(), f);
    if (e2 != std::errc() || p2 != frac.data() + frac.size() || f < 0) {
      throw fail();
    }
    for (size_t i = frac.size(); i < 6; ++i) f *= 10;
  }
  int64_t v = w * kMicroPerDegree + f;
  return negative ? -v : v;
}

std::pair<Location, int64_t> ParseCanonicalLocation(std::string_view text) {
  size_t a = text.find('|');
  size_t b = a == std::string_view::npos ? a : text.find('|', a + 1);
  ETP_ENFORCE(b != std::string_view::npos, ErrorCode::kMalformed,
              "location text needs three fields");
  Location loc{ParseFixed6(text.substr(0, a)),
               ParseFixed6(text.substr(a + 1, b - a - 1))};
  std::string_view ts = text.substr(b + 1);
  int64_t t = 0;
  auto [p, ec] = std::from_chars(ts.data(), ts.data() + ts.size(), t);
  ETP_ENFORCE(ec == std::errc() && p == ts.data() + ts.size() && t >= 0,
              ErrorCode::kMalformed, "bad timestamp in location text");
  ETP_ENFORCE(loc.Valid(), ErrorCode::kOutOfRange, "coordinates out of range");
  ETP_ENFORCE(CanonicalLocationText(loc, t) == text, ErrorCode::kMalformed,
              "location text is not canonical");
  return {loc, t};
}

crypto::Digest HashLocation(const Location& location, int64_t time) {
  return crypto::Hash(CanonicalLocationBytes(location, time));
}

double PlanarDistanceMeters(const Location& a, const Location& b) {
  const double to_rad = kPi / 180.0;
  double lat1 = a.lat_degrees() * to_rad;
  double lat2 = b.lat_degrees() * to_rad;
  double dlon = (b.lon_degrees() - a.lon_degrees()) * to_rad;
  double x = dlon * std::cos((lat1 + lat2) / 2);
  double y = lat2 - lat1;
  return kEarthRadiusMeters * std::sqrt(x * x + y * y);
}

}  // namespace etp::toll
