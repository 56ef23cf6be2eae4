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

#ifndef ETP_SIM_SCENARIO_H_
#define ETP_SIM_SCENARIO_H_

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "crypto/group.h"
#include "protocol/spot_check.h"
#include "toll/location.h"
#include "toll/policy.h"

namespace etp::sim {

struct Region {
  std::string name;
  toll::Location center;
  double radius_m = 5000;

  bool operator==(const Region&) const = default;
};

struct UserSpec {
  std::string id;
  std::string region;
  std::string plate;

  bool operator==(const UserSpec&) const = default;
};

enum class ActionKind : uint8_t {
  kUserSkipFees,         // beta1
  kUserRefusePay,        // beta2
  kServerWrongFee,       // beta3
  kServerForgeLocation,  // beta4
  kServerOmitPayment,    // beta5
  kObuFalseTuple,        // OBU manipulation
};

const char* ActionKindName(ActionKind kind);
// Throws Error(kConfig).
ActionKind ParseActionKind(std::string_view name);

// Only the fields of the given kind are meaningful.
struct AdversaryAction {
  ActionKind kind = ActionKind::kUserSkipFees;
  std::string user;
  double fraction = 0;       // skip_fees
  uint64_t tuple_index = 0;  // wrong_fee: the user's n-th transmitted tuple
  int64_t delta_cents = 0;   // wrong_fee
  std::string group;         // forge_location
  toll::Location location;   // forge_location
  // Activation time. forge_location: the fake tuple's time. obu_false_tuple:
  // start of the manipulation window. Phase 3 actions act at session close.
  int64_t at = 0;
  int64_t until = 0;  // obu_false_tuple: end of the window (exclusive)
  // omit_payment: "omit" | "tamper". obu_false_tuple: "silent" | "shift".
  std::string mode;
  double shift_m = 0;  // obu_false_tuple shift, metres north

  bool operator==(const AdversaryAction&) const = default;
};

struct SpotCheckSpec {
  std::string user;
  int64_t time = 0;

  bool operator==(const SpotCheckSpec&) const = default;
};

struct Scenario {
  uint64_t seed = 1;
  crypto::SecurityMode mode = crypto::SecurityMode::kInsecureTest;
  unsigned paillier_bits = 128;
  toll::TollSession session;
  int64_t interval_seconds = 60;
  double max_speed_mps = 30;
  protocol::SpotCheckParams spot_check;
  std::vector<Region> regions;
  std::map<std::string, std::string> region_groups;
  std::vector<UserSpec> users;
  toll::ChargingPolicy policy;
  std::vector<AdversaryAction> actions;
  std::vector<SpotCheckSpec> spot_checks;

  // Throws Error(kConfig) naming the offending field.
  void Validate() const;
  const UserSpec& User(const std::string& id) const;
  const Region& RegionNamed(const std::string& name) const;
  bool operator==(const Scenario&) const = default;
};

// Users "u01".."uNN" assigned to regions round-robin, plates "PL-<id>".
std::vector<UserSpec> MakeUsers(size_t count, const std::vector<Region>& regions);

struct TracePoint {
  toll::Location location;
  int64_t time = 0;

  bool operator==(const TracePoint&) const = default;
};

using Trace = std::vector<TracePoint>;

// Bounded random walk per user: a random start inside the region, one point
// every interval from a per-user phase offset, speed at most max_speed_mps.
std::map<std::string, Trace> GenerateTrips(const Scenario& scenario);

// Moves a location by the given metres along the local meridian and parallel.
toll::Location OffsetMeters(const toll::Location& from, double north_m,
                            double east_m);

// Straight-line position between the bracketing trace points.
toll::Location PositionAt(const Trace& trace, int64_t time);

}  // namespace etp::sim

#endif  // ETP_SIM_SCENARIO_H_
