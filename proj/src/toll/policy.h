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

#ifndef ETP_TOLL_POLICY_H_
#define ETP_TOLL_POLICY_H_

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "toll/location.h"

namespace etp::toll {

// Keeps rate * multiplier well inside int64.
inline constexpr int64_t kMaxRateCents = 1'000'000'000'000;

// Multiplier applies to hours h (UTC) with start <= h < end; windows with
// start > end wrap past midnight.
struct PeakWindow {
  int start_hour = 0;
  int end_hour = 0;
  int multiplier_percent = 100;

  bool Covers(int hour) const;
  bool operator==(const PeakWindow&) const = default;
};

// Public pricing rule f(l, t). Zones are grid cells named "row:col" where
// row = floor(lat / cell) and col = floor(lon / cell).
struct ChargingPolicy {
  int64_t grid_cell_micro = 10'000;  // 0.01 degrees
  int64_t default_rate_cents = 0;
  std::map<std::string, int64_t> zone_rates;
  std::vector<PeakWindow> peak_windows;

  // Throws Error(kConfig).
  void Validate() const;
  bool operator==(const ChargingPolicy&) const = default;
};

std::string ZoneOf(const ChargingPolicy& policy, const Location& location);

int HourOfDay(int64_t time);

// Percent multiplier in effect at `time`: the largest covering window, or
// 100 off-peak.
int PeakMultiplier(const ChargingPolicy& policy, int64_t time);

// zone rate * multiplier / 100, floored.
int64_t ComputeFee(const ChargingPolicy& policy, const Location& location,
                   int64_t time);

}  // namespace etp::toll

#endif  // ETP_TOLL_POLICY_H_
