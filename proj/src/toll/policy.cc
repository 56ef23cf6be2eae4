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

#include "toll/policy.h"

#include <algorithm>

#include "common/error.h"

namespace etp::toll {

namespace {

int64_t FloorDiv(int64_t a, int64_t b) {
  int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

}  // namespace

bool PeakWindow::Covers(int hour) const {
  if (start_hour <= end_hour) return hour >= start_hour && hour < end_hour;
  return hour >= start_hour || hour < end_hour;
}

void ChargingPolicy::Validate() const {
  ETP_ENFORCE(grid_cell_micro > 0, ErrorCode::kConfig,
              "policy grid cell size must be positive");
  ETP_ENFORCE(default_rate_cents >= 0, ErrorCode::kConfig,
              "policy default rate must be non-negative");
  ETP_ENFORCE(default_rate_cents <= kMaxRateCents, ErrorCode::kConfig,
              "policy default rate too large");
  for (const auto& [zone, rate] : zone_rates) {
    ETP_ENFORCE(rate >= 0 && rate <= kMaxRateCents, ErrorCode::kConfig,
                "policy rate for zone " + zone + " out of range");
  }
  for (const PeakWindow& w : peak_windows) {
    ETP_ENFORCE(w.start_hour >= 0 && w.start_hour < 24 && w.end_hour >= 0 &&
                    w.end_hour <= 24 && w.start_hour != w.end_hour,
                ErrorCode::kConfig, "peak window hours must lie in [0, 24]");
    ETP_ENFORCE(w.multiplier_percent >= 100 && w.multiplier_percent <= 100'000,
                ErrorCode::kConfig,
                "peak multiplier must lie in [100, 100000] percent");
  }
}

std::string ZoneOf(const ChargingPolicy& policy, const Location& location) {
  return std::to_string(FloorDiv(location.lat_micro, policy.grid_cell_micro)) +
         ":" +
         std::to_string(FloorDiv(location.lon_micro, policy.grid_cell_micro));
}

int HourOfDay(int64_t time) {
  return static_cast<int>(FloorDiv(time, 3600) % 24 + 24) % 24;
}

int PeakMultiplier(const ChargingPolicy& policy, int64_t time) {
  int hour = HourOfDay(time);
  int multiplier = 100;
  for (const PeakWindow& w : policy.peak_windows) {
    if (w.Covers(hour)) multiplier = std::max(multiplier, w.multiplier_percent);
  }
  return multiplier;
}

int64_t ComputeFee(const ChargingPolicy& policy, const Location& location,
                   int64_t time) {
  auto it = policy.zone_rates.find(ZoneOf(policy, location));
  int64_t rate =
      it == policy.zone_rates.end() ? policy.default_rate_cents : it->second;
  return rate * PeakMultiplier(policy, time) / 100;
}

}  // namespace etp::toll
