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

#ifndef ETP_PROTOCOL_SPOT_CHECK_H_
#define ETP_PROTOCOL_SPOT_CHECK_H_

#include <optional>
#include <span>
#include <string>

#include "toll/location.h"

namespace etp::protocol {

struct Observation {
  toll::Location location;
  int64_t time = 0;
  std::string plate;

  bool operator==(const Observation&) const = default;
};

struct SpotCheckParams {
  double epsilon_seconds = 60.0;
  double gamma_mps = 50.0;

  // Throws Error(kConfig) unless both are positive and finite.
  void Validate() const;
  bool operator==(const SpotCheckParams&) const = default;
};

struct SpotCheckMatch {
  toll::LocationTuple tuple;
  double dt_seconds = 0;
  double distance_meters = 0;
};

struct SpotCheckResult {
  bool consistent = false;
  std::optional<SpotCheckMatch> witness;  // first matching record
  size_t records_in_window = 0;
};

// Consistent iff some record lies within epsilon/2 of the observation time
// and within gamma * |dt| of its position. The distance bound is inclusive
// so an exact coincidence (dt = 0, distance 0) counts as consistent.
SpotCheckResult SpotCheck(const Observation& observation,
                          std::span<const toll::LocationTuple> group_records,
                          const SpotCheckParams& params);

}  // namespace etp::protocol

#endif  // ETP_PROTOCOL_SPOT_CHECK_H_
