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

#include "protocol/spot_check.h"

#include <cmath>
#include <cstdlib>

#include "common/error.h"

namespace etp::protocol {

void SpotCheckParams::Validate() const {
  ETP_ENFORCE(std::isfinite(epsilon_seconds) && epsilon_seconds > 0,
              ErrorCode::kConfig, "epsilon must be positive");
  ETP_ENFORCE(std::isfinite(gamma_mps) && gamma_mps > 0, ErrorCode::kConfig,
              "gamma must be positive");
}

SpotCheckResult SpotCheck(const Observation& observation,
                          std::span<const toll::LocationTuple> group_records,
                          const SpotCheckParams& params) {
  params.Validate();
  SpotCheckResult result;
  for (const auto& record : group_records) {
    double dt = std::fabs(static_cast<double>(observation.time - record.time));
    if (!(dt < params.epsilon_seconds / 2)) continue;
    ++result.records_in_window;
    double d = toll::PlanarDistanceMeters(observation.location, record.location);
    if (d <= params.gamma_mps * dt && !result.consistent) {
      result.consistent = true;
      result.witness = SpotCheckMatch{record, dt, d};
    }
  }
  return result;
}

}  // namespace etp::protocol
