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

#include "sim/scenario.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>

#include "common/error.h"
#include "crypto/rng.h"

namespace etp::sim {

namespace {

constexpr double kEarthRadiusM = 6371000.0;
constexpr double kMetersPerDegree = kEarthRadiusM * std::numbers::pi / 180.0;

void Require(bool cond, const std::string& field, const std::string& msg) {
  if (!cond) throw Error(ErrorCode::kConfig, field + ": " + msg);
}

toll::Location Offset(const toll::Location& from, double north_m, double east_m) {
  return OffsetMeters(from, north_m, east_m);
}

}  // namespace

toll::Location OffsetMeters(const toll::Location& from, double north_m,
                            double east_m) {
  double lat = from.lat_degrees() + north_m / kMetersPerDegree;
  double coslat = std::cos(from.lat_degrees() * std::numbers::pi / 180.0);
  double lon = from.lon_degrees() + east_m / (kMetersPerDegree * coslat);
  return toll::Location::FromDegrees(lat, lon);
}

const char* ActionKindName(ActionKind kind) {
  switch (kind) {
    case ActionKind::kUserSkipFees: return "user_skip_fees";
    case ActionKind::kUserRefusePay: return "user_refuse_pay";
    case ActionKind::kServerWrongFee: return "server_wrong_fee";
    case ActionKind::kServerForgeLocation: return "server_forge_location";
    case ActionKind::kServerOmitPayment: return "server_omit_payment";
    case ActionKind::kObuFalseTuple: return "obu_false_tuple";
  }
  return "unknown";
}

ActionKind ParseActionKind(std::string_view name) {
  for (int k = 0; k <= 5; ++k) {
    auto kind = static_cast<ActionKind>(k);
    if (name == ActionKindName(kind)) return kind;
  }
  throw Error(ErrorCode::kConfig, "unknown action kind '" + std::string(name) + "'");
}

const UserSpec& Scenario::User(const std::string& id) const {
  for (const auto& u : users) {
    if (u.id == id) return u;
  }
  throw Error(ErrorCode::kConfig, "unknown user '" + id + "'");
}

const Region& Scenario::RegionNamed(const std::string& name) const {
  for (const auto& r : regions) {
    if (r.name == name) return r;
  }
  throw Error(ErrorCode::kConfig, "unknown region '" + name + "'");
}

void Scenario::Validate() const {
  Require(!session.sid.empty(), "session.sid", "must be non-empty");
  Require(session.start_time < session.end_time, "session", "start must precede end");
  Require(interval_seconds > 0, "interval_seconds", "must be positive");
  Require(paillier_bits >= 64, "paillier_bits", "must be at least 64");
  Require(mode != crypto::SecurityMode::kProduction || paillier_bits >= 2048,
          "paillier_bits", "production mode needs at least 2048");
  try {
    spot_check.Validate();
  } catch (const Error& e) {
    Require(false, "spot_check", e.what());
  }
  Require(std::isfinite(max_speed_mps) && max_speed_mps > 0, "max_speed_mps",
          "must be positive");
  Require(max_speed_mps <= spot_check.gamma_mps, "max_speed_mps",
          "must not exceed spot_check.gamma_mps");
  try {
    policy.Validate();
  } catch (const Error& e) {
    Require(false, "policy", e.what());
  }

  Require(!regions.empty(), "regions", "at least one region required");
  std::set<std::string> region_names;
  for (size_t i = 0; i < regions.size(); ++i) {
    const auto& r = regions[i];
    std::string field = "regions[" + std::to_string(i) + "]";
    Require(!r.name.empty(), field + ".name", "must be non-empty");
    Require(region_names.insert(r.name).second, field + ".name", "duplicate region");
    Require(r.center.Valid(), field + ".center", "invalid coordinates");
    Require(r.radius_m > 0 && r.radius_m <= 200000, field + ".radius_m",
            "must be in (0, 200000]");
    Require(region_groups.contains(r.name), "groups",
            "region '" + r.name + "' has no group");
  }
  for (const auto& [region, g] : region_groups) {
    Require(region_names.contains(region), "groups",
            "unknown region '" + region + "'");
    Require(!g.empty(), "groups." + region, "group id must be non-empty");
  }

  Require(!users.empty(), "users", "at least one user required");
  std::set<std::string> ids, plates;
  for (size_t i = 0; i < users.size(); ++i) {
    const auto& u = users[i];
    std::string field = "users[" + std::to_string(i) + "]";
    Require(!u.id.empty() && u.id.find(':') == std::string::npos, field + ".id",
            "must be non-empty without ':'");
    Require(ids.insert(u.id).second, field + ".id", "duplicate user '" + u.id + "'");
    Require(!u.plate.empty() && plates.insert(u.plate).second, field + ".plate",
            "must be unique and non-empty");
    Require(region_names.contains(u.region), field + ".region",
            "unknown region '" + u.region + "'");
  }

  std::set<std::string> groups;
  for (const auto& [r, g] : region_groups) groups.insert(g);
  for (size_t i = 0; i < actions.size(); ++i) {
    const auto& a = actions[i];
    std::string field = "actions[" + std::to_string(i) + "]";
    bool needs_user = a.kind != ActionKind::kServerForgeLocation;
    if (needs_user) {
      Require(ids.contains(a.user), field + ".user", "unknown user '" + a.user + "'");
    }
    switch (a.kind) {
      case ActionKind::kUserSkipFees:
        Require(a.fraction > 0 && a.fraction <= 1, field + ".fraction",
                "must be in (0, 1]");
        break;
      case ActionKind::kServerWrongFee:
        Require(a.delta_cents != 0, field + ".delta_cents", "must be non-zero");
        break;
      case ActionKind::kServerForgeLocation:
        Require(groups.contains(a.group), field + ".group",
                "unknown group '" + a.group + "'");
        Require(a.location.Valid(), field + ".location", "invalid coordinates");
        Require(session.Contains(a.at), field + ".at", "must lie in the session");
        break;
      case ActionKind::kServerOmitPayment:
        Require(a.mode == "omit" || a.mode == "tamper", field + ".mode",
                "must be 'omit' or 'tamper'");
        break;
      case ActionKind::kObuFalseTuple:
        Require(a.mode == "silent" || a.mode == "shift", field + ".mode",
                "must be 'silent' or 'shift'");
        Require(a.at < a.until, field + ".until", "must follow 'at'");
        Require(a.mode != "shift" || a.shift_m != 0, field + ".shift_m",
                "must be non-zero");
        break;
      case ActionKind::kUserRefusePay:
        break;
    }
  }
  for (size_t i = 0; i < spot_checks.size(); ++i) {
    std::string field = "spot_checks[" + std::to_string(i) + "]";
    Require(ids.contains(spot_checks[i].user), field + ".user",
            "unknown user '" + spot_checks[i].user + "'");
    Require(session.Contains(spot_checks[i].time), field + ".time",
            "must lie in the session");
  }
}

std::vector<UserSpec> MakeUsers(size_t count, const std::vector<Region>& regions) {
  ETP_ENFORCE(!regions.empty(), ErrorCode::kConfig, "regions: none defined");
  size_t width = std::max<size_t>(2, std::to_string(count).size());
  std::vector<UserSpec> out;
  for (size_t i = 0; i < count; ++i) {
    std::string num = std::to_string(i + 1);
    std::string id = "u" + std::string(width - num.size(), '0') + num;
    out.push_back({id, regions[i % regions.size()].name, "PL-" + id});
  }
  return out;
}

std::map<std::string, Trace> GenerateTrips(const Scenario& scenario) {
  crypto::Rng root(scenario.seed);
  std::map<std::string, Trace> out;
  const int64_t eps = scenario.interval_seconds;
  // Rounding to micro-degrees can add ~0.2 m per step; keep clear of the cap.
  const double max_step = 0.95 * scenario.max_speed_mps * static_cast<double>(eps);
  for (const auto& user : scenario.users) {
    crypto::Rng rng = root.Fork("trips/" + user.id);
    const Region& region = scenario.RegionNamed(user.region);
    auto uniform = [&rng](double lo, double hi) { return lo + (hi - lo) * rng.NextUnit(); };

    double r0 = region.radius_m * std::sqrt(rng.NextUnit());
    double a0 = uniform(0, 2 * std::numbers::pi);
    toll::Location pos = Offset(region.center, r0 * std::cos(a0), r0 * std::sin(a0));
    int64_t phase = static_cast<int64_t>(rng.NextU64() % static_cast<uint64_t>(eps));

    Trace trace;
    for (int64_t t = scenario.session.start_time + phase;
         t < scenario.session.end_time; t += eps) {
      if (!trace.empty()) {
        double step = uniform(0, max_step);
        double heading = uniform(0, 2 * std::numbers::pi);
        toll::Location next =
            Offset(pos, step * std::cos(heading), step * std::sin(heading));
        if (toll::PlanarDistanceMeters(next, region.center) > region.radius_m) {
          // Turn back towards the centre.
          double dn = (region.center.lat_degrees() - pos.lat_degrees()) * kMetersPerDegree;
          double de = (region.center.lon_degrees() - pos.lon_degrees()) * kMetersPerDegree *
                      std::cos(pos.lat_degrees() * std::numbers::pi / 180.0);
          double len = std::hypot(dn, de);
          if (len > 0) next = Offset(pos, step * dn / len, step * de / len);
        }
        pos = next;
      }
      trace.push_back({pos, t});
    }
    out[user.id] = std::move(trace);
  }
  return out;
}

toll::Location PositionAt(const Trace& trace, int64_t time) {
  ETP_ENFORCE(!trace.empty(), ErrorCode::kInvalidArgument, "empty trace");
  if (time <= trace.front().time) return trace.front().location;
  if (time >= trace.back().time) return trace.back().location;
  auto it = std::upper_bound(trace.begin(), trace.end(), time,
                             [](int64_t t, const TracePoint& p) { return t < p.time; });
  const TracePoint& b = *it;
  const TracePoint& a = *(it - 1);
  double f = static_cast<double>(time - a.time) / static_cast<double>(b.time - a.time);
  auto lerp = [f](int64_t x, int64_t y) {
    return x + static_cast<int64_t>(std::llround(f * static_cast<double>(y - x)));
  };
  return toll::Location{lerp(a.location.lat_micro, b.location.lat_micro),
                        lerp(a.location.lon_micro, b.location.lon_micro)};
}

}  // namespace etp::sim
