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

#include "io/documents.h"

#include <fstream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "common/error.h"
#include "crypto/bigint.h"

namespace etp::io {

using nlohmann::json;

namespace {

// Strict view of a JSON object: typed lookups with field paths in errors,
// and unknown keys rejected by Finish().
class Obj {
 public:
  Obj(const json& j, std::string path, ErrorCode code)
      : j_(j), path_(std::move(path)), code_(code) {
    if (!j_.is_object()) Fail(path_, "expected an object");
  }

  [[noreturn]] void Fail(const std::string& field, const std::string& msg) const {
    throw Error(code_, (field.empty() ? std::string("document") : field) + ": " + msg);
  }

  std::string Path(std::string_view key) const {
    return path_.empty() ? std::string(key) : path_ + "." + std::string(key);
  }

  const json* Find(std::string_view key) {
    used_.insert(std::string(key));
    auto it = j_.find(key);
    return it == j_.end() ? nullptr : &*it;
  }

  const json& Need(std::string_view key) {
    const json* v = Find(key);
    if (v == nullptr) Fail(Path(key), "required");
    return *v;
  }

  bool Has(std::string_view key) const { return j_.contains(key); }

  template <typename T>
  T Req(std::string_view key) {
    return As<T>(Need(key), Path(key));
  }

  template <typename T>
  T Opt(std::string_view key, T fallback) {
    const json* v = Find(key);
    return v == nullptr ? fallback : As<T>(*v, Path(key));
  }

  Obj Child(std::string_view key) { return Obj(Need(key), Path(key), code_); }

  const json& Array(std::string_view key) {
    const json& v = Need(key);
    if (!v.is_array()) Fail(Path(key), "expected an array");
    return v;
  }

  void Finish() const {
    for (const auto& [k, v] : j_.items()) {
      if (!used_.contains(k)) Fail(Path(k), "unknown field");
    }
  }

  template <typename T>
  T As(const json& v, const std::string& field) const {
    if constexpr (std::is_same_v<T, bool>) {
      if (!v.is_boolean()) Fail(field, "expected true or false");
      return v.get<bool>();
    } else if constexpr (std::is_same_v<T, std::string>) {
      if (!v.is_string()) Fail(field, "expected a string");
      return v.get<std::string>();
    } else if constexpr (std::is_same_v<T, double>) {
      if (!v.is_number()) Fail(field, "expected a number");
      return v.get<double>();
    } else if constexpr (std::is_unsigned_v<T>) {
      if (!v.is_number_unsigned()) Fail(field, "expected a non-negative integer");
      return static_cast<T>(v.get<uint64_t>());
    } else {
      if (!v.is_number_integer()) Fail(field, "expected an integer");
      return static_cast<T>(v.get<int64_t>());
    }
  }

  ErrorCode code() const { return code_; }

 private:
  const json& j_;
  std::string path_;
  ErrorCode code_;
  std::set<std::string> used_;
};

std::string Index(const std::string& path, size_t i) {
  return path + "[" + std::to_string(i) + "]";
}

json Parse(std::string_view text, ErrorCode code) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    // Byte offset to line and column.
    size_t line = 1, col = 1;
    for (size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw Error(code, "line " + std::to_string(line) + ", column " +
                          std::to_string(col) + ": syntax error");
  }
}

// --- shared pieces ---

json LocationJson(const toll::Location& l) {
  return {{"lat", l.lat_degrees()}, {"lon", l.lon_degrees()}};
}

toll::Location ReadLocation(Obj o) {
  auto loc = toll::Location::FromDegrees(o.Req<double>("lat"), o.Req<double>("lon"));
  o.Finish();
  return loc;
}

std::string ModeName(crypto::SecurityMode mode) {
  return mode == crypto::SecurityMode::kProduction ? "production" : "insecure-test";
}

crypto::SecurityMode ReadMode(const Obj& o, const std::string& field,
                              const std::string& text) {
  if (text == "insecure-test" || text == "test") return crypto::SecurityMode::kInsecureTest;
  if (text == "production") return crypto::SecurityMode::kProduction;
  o.Fail(field, "expected 'insecure-test' or 'production'");
}

json PolicyJson(const toll::ChargingPolicy& p) {
  json windows = json::array();
  for (const auto& w : p.peak_windows) {
    windows.push_back({{"start_hour", w.start_hour},
                       {"end_hour", w.end_hour},
                       {"multiplier_percent", w.multiplier_percent}});
  }
  return {{"grid_cell_micro", p.grid_cell_micro},
          {"default_rate_cents", p.default_rate_cents},
          {"zone_rates", p.zone_rates},
          {"peak_windows", windows}};
}

toll::ChargingPolicy ReadPolicy(Obj o) {
  toll::ChargingPolicy p;
  o.Opt<int64_t>("schema", kSchemaVersion);
  p.grid_cell_micro = o.Opt<int64_t>("grid_cell_micro", p.grid_cell_micro);
  p.default_rate_cents = o.Req<int64_t>("default_rate_cents");
  if (const json* zones = o.Find("zone_rates")) {
    Obj z(*zones, o.Path("zone_rates"), o.code());
    for (const auto& [k, v] : zones->items()) {
      p.zone_rates[k] = z.Req<int64_t>(k);
    }
  }
  if (o.Has("peak_windows")) {
    const json& arr = o.Array("peak_windows");
    for (size_t i = 0; i < arr.size(); ++i) {
      Obj w(arr[i], Index(o.Path("peak_windows"), i), o.code());
      p.peak_windows.push_back({w.Req<int>("start_hour"), w.Req<int>("end_hour"),
                                w.Req<int>("multiplier_percent")});
      w.Finish();
    }
  }
  o.Finish();
  return p;
}

// --- scenario ---

json ActionJson(const sim::AdversaryAction& a) {
  json j = {{"kind", sim::ActionKindName(a.kind)}};
  switch (a.kind) {
    case sim::ActionKind::kUserSkipFees:
      j["user"] = a.user;
      j["fraction"] = a.fraction;
      break;
    case sim::ActionKind::kUserRefusePay:
      j["user"] = a.user;
      break;
    case sim::ActionKind::kServerWrongFee:
      j["user"] = a.user;
      j["tuple_index"] = a.tuple_index;
      j["delta_cents"] = a.delta_cents;
      break;
    case sim::ActionKind::kServerForgeLocation:
      j["group"] = a.group;
      j["location"] = LocationJson(a.location);
      j["at"] = a.at;
      break;
    case sim::ActionKind::kServerOmitPayment:
      j["user"] = a.user;
      j["mode"] = a.mode;
      break;
    case sim::ActionKind::kObuFalseTuple:
      j["user"] = a.user;
      j["mode"] = a.mode;
      j["at"] = a.at;
      j["until"] = a.until;
      if (a.mode == "shift") j["shift_m"] = a.shift_m;
      break;
  }
  return j;
}

sim::AdversaryAction ReadAction(Obj o) {
  sim::AdversaryAction a;
  std::string kind = o.Req<std::string>("kind");
  try {
    a.kind = sim::ParseActionKind(kind);
  } catch (const Error&) {
    o.Fail(o.Path("kind"), "unknown action kind '" + kind + "'");
  }
  switch (a.kind) {
    case sim::ActionKind::kUserSkipFees:
      a.user = o.Req<std::string>("user");
      a.fraction = o.Req<double>("fraction");
      break;
    case sim::ActionKind::kUserRefusePay:
      a.user = o.Req<std::string>("user");
      break;
    case sim::ActionKind::kServerWrongFee:
      a.user = o.Req<std::string>("user");
      a.tuple_index = o.Opt<uint64_t>("tuple_index", 0);
      a.delta_cents = o.Req<int64_t>("delta_cents");
      break;
    case sim::ActionKind::kServerForgeLocation:
      a.group = o.Req<std::string>("group");
      a.location = ReadLocation(o.Child("location"));
      a.at = o.Req<int64_t>("at");
      break;
    case sim::ActionKind::kServerOmitPayment:
      a.user = o.Req<std::string>("user");
      a.mode = o.Opt<std::string>("mode", "omit");
      break;
    case sim::ActionKind::kObuFalseTuple:
      a.user = o.Req<std::string>("user");
      a.mode = o.Opt<std::string>("mode", "silent");
      a.at = o.Req<int64_t>("at");
      a.until = o.Req<int64_t>("until");
      if (a.mode == "shift") a.shift_m = o.Req<double>("shift_m");
      break;
  }
  o.Finish();
  return a;
}

json ScenarioJsonValue(const sim::Scenario& s) {
  json regions = json::array();
  for (const auto& r : s.regions) {
    regions.push_back({{"name", r.name},
                       {"lat", r.center.lat_degrees()},
                       {"lon", r.center.lon_degrees()},
                       {"radius_m", r.radius_m}});
  }
  json users = json::array();
  for (const auto& u : s.users) {
    users.push_back({{"id", u.id}, {"region", u.region}, {"plate", u.plate}});
  }
  json actions = json::array();
  for (const auto& a : s.actions) actions.push_back(ActionJson(a));
  json checks = json::array();
  for (const auto& c : s.spot_checks) checks.push_back({{"user", c.user}, {"time", c.time}});
  return {{"schema", kSchemaVersion},
          {"seed", s.seed},
          {"mode", ModeName(s.mode)},
          {"paillier_bits", s.paillier_bits},
          {"session",
           {{"sid", s.session.sid}, {"start", s.session.start_time}, {"end", s.session.end_time}}},
          {"interval_seconds", s.interval_seconds},
          {"max_speed_mps", s.max_speed_mps},
          {"spot_check",
           {{"epsilon_seconds", s.spot_check.epsilon_seconds},
            {"gamma_mps", s.spot_check.gamma_mps}}},
          {"regions", regions},
          {"groups", s.region_groups},
          {"users", users},
          {"policy", PolicyJson(s.policy)},
          {"actions", actions},
          {"spot_checks", checks}};
}

sim::Scenario ReadScenario(Obj o, const std::filesystem::path& base_dir, bool validate) {
  sim::Scenario s;
  auto schema = o.Req<int64_t>("schema");
  if (schema != kSchemaVersion) {
    o.Fail("schema", "unsupported version " + std::to_string(schema));
  }
  s.seed = o.Opt<uint64_t>("seed", s.seed);
  s.mode = ReadMode(o, "mode", o.Opt<std::string>("mode", "insecure-test"));
  s.paillier_bits = o.Opt<unsigned>("paillier_bits", s.paillier_bits);
  {
    Obj session = o.Child("session");
    s.session.sid = session.Req<std::string>("sid");
    s.session.start_time = session.Req<int64_t>("start");
    s.session.end_time = session.Req<int64_t>("end");
    session.Finish();
  }
  s.interval_seconds = o.Opt<int64_t>("interval_seconds", s.interval_seconds);
  s.max_speed_mps = o.Opt<double>("max_speed_mps", s.max_speed_mps);
  if (o.Has("spot_check")) {
    Obj sc = o.Child("spot_check");
    s.spot_check.epsilon_seconds =
        sc.Opt<double>("epsilon_seconds", static_cast<double>(s.interval_seconds));
    s.spot_check.gamma_mps = sc.Opt<double>("gamma_mps", s.spot_check.gamma_mps);
    sc.Finish();
  } else {
    s.spot_check.epsilon_seconds = static_cast<double>(s.interval_seconds);
  }

  const json& regions = o.Array("regions");
  for (size_t i = 0; i < regions.size(); ++i) {
    Obj r(regions[i], Index("regions", i), o.code());
    sim::Region region;
    region.name = r.Req<std::string>("name");
    region.center = toll::Location::FromDegrees(r.Req<double>("lat"), r.Req<double>("lon"));
    region.radius_m = r.Opt<double>("radius_m", region.radius_m);
    r.Finish();
    s.regions.push_back(region);
  }
  {
    Obj groups = o.Child("groups");
    for (const auto& [k, v] : o.Need("groups").items()) {
      s.region_groups[k] = groups.Req<std::string>(k);
    }
  }

  bool has_users = o.Has("users");
  bool has_count = o.Has("user_count");
  if (has_users == has_count) o.Fail("users", "give exactly one of users or user_count");
  if (has_count) {
    s.users = sim::MakeUsers(o.Req<size_t>("user_count"), s.regions);
  } else {
    const json& users = o.Array("users");
    for (size_t i = 0; i < users.size(); ++i) {
      Obj u(users[i], Index("users", i), o.code());
      sim::UserSpec spec;
      spec.id = u.Req<std::string>("id");
      spec.region = u.Req<std::string>("region");
      spec.plate = u.Opt<std::string>("plate", "PL-" + spec.id);
      u.Finish();
      s.users.push_back(spec);
    }
  }

  const json& policy = o.Need("policy");
  if (policy.is_string()) {
    std::filesystem::path p = base_dir / policy.get<std::string>();
    std::string text;
    try {
      text = ReadFile(p);
    } catch (const Error& e) {
      o.Fail("policy", e.what());
    }
    try {
      s.policy = ReadPolicy(Obj(Parse(text, ErrorCode::kConfig), "", ErrorCode::kConfig));
    } catch (const Error& e) {
      o.Fail("policy", p.string() + ": " + e.what());
    }
  } else {
    s.policy = ReadPolicy(o.Child("policy"));
  }

  if (o.Has("actions")) {
    const json& actions = o.Array("actions");
    for (size_t i = 0; i < actions.size(); ++i) {
      s.actions.push_back(ReadAction(Obj(actions[i], Index("actions", i), o.code())));
    }
  }
  if (o.Has("spot_checks")) {
    const json& checks = o.Array("spot_checks");
    for (size_t i = 0; i < checks.size(); ++i) {
      Obj c(checks[i], Index("spot_checks", i), o.code());
      s.spot_checks.push_back({c.Req<std::string>("user"), c.Req<int64_t>("time")});
      c.Finish();
    }
  }
  o.Finish();
  if (validate) s.Validate();
  return s;
}

// --- ledger ---

std::string Hex(const Bytes& b) { return ToHex(b); }

Bytes Unhex(const Obj& o, const std::string& field, const std::string& text) {
  try {
    return FromHex(text);
  } catch (const Error& e) {
    o.Fail(field, e.what());
  }
}

json LedgerJsonValue(const sim::SessionLedger& l) {
  json users = json::array();
  for (const auto& u : l.users) {
    users.push_back({{"user_id", u.user_id},
                     {"group_id", u.group_id},
                     {"records", u.records},
                     {"claimed_cents", u.claimed_cents},
                     {"real_cents", u.real_cents},
                     {"paid_cents", u.paid_cents},
                     {"refunded_cents", u.refunded_cents},
                     {"status", u.status},
                     {"accused", u.accused}});
  }
  json groups = json::array();
  for (const auto& g : l.groups) {
    groups.push_back({{"group_id", g.group_id},
                      {"members", g.members},
                      {"records", g.records},
                      {"expected_cents", g.expected_cents},
                      {"paid_cents", g.paid_cents},
                      {"disputed", g.disputed},
                      {"aborted", g.aborted},
                      {"balanced", g.balanced},
                      {"fee_set_digest", g.fee_set_digest}});
  }
  json disputes = json::array();
  for (const auto& d : l.disputes) {
    json res = json::array();
    for (const auto& r : d.res) {
      res.push_back({{"user_id", r.user_id}, {"real_cents", r.real_cents},
                     {"committed", r.committed}});
    }
    json adjustments = json::array();
    for (const auto& a : d.adjustments) {
      adjustments.push_back({{"user_id", a.user_id},
                             {"claimed_cents", a.claimed_cents},
                             {"real_cents", a.real_cents},
                             {"unpaid_cents", a.unpaid_cents}});
    }
    disputes.push_back({{"group_id", d.group_id},
                        {"deficit_cents", d.deficit_cents},
                        {"verdict", d.verdict},
                        {"res", res},
                        {"adjustments", adjustments},
                        {"bundle_ref", d.bundle_ref},
                        {"result_ref", d.result_ref}});
  }
  json aborts = json::array();
  for (const auto& a : l.aborts) {
    aborts.push_back({{"user_id", a.user_id},
                      {"group_id", a.group_id},
                      {"reason", a.reason},
                      {"evidence_refs", a.evidence_refs}});
  }
  json evidence = json::array();
  for (const auto& e : l.evidence) {
    evidence.push_back({{"kind", protocol::EvidenceKindName(e.kind)},
                        {"holder", e.holder},
                        {"payload", Hex(e.payload)}});
  }
  json accusations = json::array();
  for (const auto& a : l.accusations) {
    accusations.push_back({{"action_index", a.action_index},
                           {"action", a.action},
                           {"attack", a.attack},
                           {"user", a.user},
                           {"expected", a.expected},
                           {"accused", a.accused},
                           {"evidence_refs", a.evidence_refs},
                           {"correct", a.correct}});
  }
  json checks = json::array();
  for (const auto& c : l.spot_checks) {
    checks.push_back({{"user_id", c.user_id},
                      {"plate", c.plate},
                      {"time", c.time},
                      {"location", LocationJson(c.location)},
                      {"consistent", c.consistent},
                      {"records_in_window", c.records_in_window},
                      {"has_witness", c.has_witness},
                      {"dt_seconds", c.dt_seconds},
                      {"distance_m", c.distance_m},
                      {"bound_m", c.bound_m},
                      {"evidence_ref", c.evidence_ref}});
  }
  return {{"schema", l.schema},
          {"scenario", ScenarioJsonValue(l.scenario)},
          {"users", users},
          {"groups", groups},
          {"disputes", disputes},
          {"aborts", aborts},
          {"evidence", evidence},
          {"accusations", accusations},
          {"spot_checks", checks},
          {"messages", l.messages},
          {"accepted_records", l.accepted_records},
          {"rejected_records", l.rejected_records},
          {"total_paid_cents", l.total_paid_cents},
          {"total_fee_cents", l.total_fee_cents},
          {"conserved", l.conserved}};
}

template <typename F>
void EachObject(Obj& parent, std::string_view key, F&& f) {
  const json& arr = parent.Array(key);
  for (size_t i = 0; i < arr.size(); ++i) {
    Obj o(arr[i], Index(parent.Path(key), i), parent.code());
    f(o);
    o.Finish();
  }
}

std::vector<uint64_t> Refs(Obj& o, std::string_view key) {
  std::vector<uint64_t> out;
  const json& arr = o.Array(key);
  for (size_t i = 0; i < arr.size(); ++i) {
    out.push_back(o.As<uint64_t>(arr[i], Index(o.Path(key), i)));
  }
  return out;
}

sim::SessionLedger ReadLedger(Obj o) {
  sim::SessionLedger l;
  l.schema = o.Req<uint32_t>("schema");
  if (l.schema != kSchemaVersion) o.Fail("schema", "unsupported version");
  l.scenario = ReadScenario(o.Child("scenario"), {}, false);
  EachObject(o, "users", [&](Obj& u) {
    l.users.push_back({u.Req<std::string>("user_id"), u.Req<std::string>("group_id"),
                       u.Req<uint64_t>("records"), u.Req<int64_t>("claimed_cents"),
                       u.Req<int64_t>("real_cents"), u.Req<int64_t>("paid_cents"),
                       u.Req<int64_t>("refunded_cents"), u.Req<std::string>("status"),
                       u.Req<bool>("accused")});
  });
  EachObject(o, "groups", [&](Obj& g) {
    l.groups.push_back({g.Req<std::string>("group_id"), g.Req<uint64_t>("members"),
                        g.Req<uint64_t>("records"), g.Req<int64_t>("expected_cents"),
                        g.Req<int64_t>("paid_cents"), g.Req<bool>("disputed"),
                        g.Req<bool>("aborted"), g.Req<bool>("balanced"),
                        g.Req<std::string>("fee_set_digest")});
  });
  EachObject(o, "disputes", [&](Obj& d) {
    sim::DisputeRecord rec;
    rec.group_id = d.Req<std::string>("group_id");
    rec.deficit_cents = d.Req<int64_t>("deficit_cents");
    rec.verdict = d.Req<std::string>("verdict");
    EachObject(d, "res", [&](Obj& r) {
      rec.res.push_back({r.Req<std::string>("user_id"), r.Req<int64_t>("real_cents"),
                         r.Req<bool>("committed")});
    });
    EachObject(d, "adjustments", [&](Obj& a) {
      rec.adjustments.push_back({a.Req<std::string>("user_id"), a.Req<int64_t>("claimed_cents"),
                                 a.Req<int64_t>("real_cents"), a.Req<int64_t>("unpaid_cents")});
    });
    rec.bundle_ref = d.Req<uint64_t>("bundle_ref");
    rec.result_ref = d.Req<uint64_t>("result_ref");
    l.disputes.push_back(std::move(rec));
  });
  EachObject(o, "aborts", [&](Obj& a) {
    l.aborts.push_back({a.Req<std::string>("user_id"), a.Req<std::string>("group_id"),
                        a.Req<std::string>("reason"), Refs(a, "evidence_refs")});
  });
  EachObject(o, "evidence", [&](Obj& e) {
    protocol::EvidenceItem item;
    std::string kind = e.Req<std::string>("kind");
    try {
      item.kind = protocol::ParseEvidenceKind(kind);
    } catch (const Error&) {
      e.Fail(e.Path("kind"), "unknown evidence kind '" + kind + "'");
    }
    item.holder = e.Req<std::string>("holder");
    item.payload = Unhex(e, e.Path("payload"), e.Req<std::string>("payload"));
    l.evidence.push_back(std::move(item));
  });
  EachObject(o, "accusations", [&](Obj& a) {
    sim::Accusation acc;
    acc.action_index = a.Req<uint64_t>("action_index");
    acc.action = a.Req<std::string>("action");
    acc.attack = a.Req<std::string>("attack");
    acc.user = a.Req<std::string>("user");
    acc.expected = a.Req<std::string>("expected");
    acc.accused = a.Req<std::string>("accused");
    acc.evidence_refs = Refs(a, "evidence_refs");
    acc.correct = a.Req<bool>("correct");
    l.accusations.push_back(std::move(acc));
  });
  EachObject(o, "spot_checks", [&](Obj& c) {
    sim::SpotCheckRecord rec;
    rec.user_id = c.Req<std::string>("user_id");
    rec.plate = c.Req<std::string>("plate");
    rec.time = c.Req<int64_t>("time");
    rec.location = ReadLocation(c.Child("location"));
    rec.consistent = c.Req<bool>("consistent");
    rec.records_in_window = c.Req<uint64_t>("records_in_window");
    rec.has_witness = c.Req<bool>("has_witness");
    rec.dt_seconds = c.Req<double>("dt_seconds");
    rec.distance_m = c.Req<double>("distance_m");
    rec.bound_m = c.Req<double>("bound_m");
    rec.evidence_ref = c.Req<uint64_t>("evidence_ref");
    l.spot_checks.push_back(rec);
  });
  {
    Obj phases = o.Child("messages");
    for (const auto& [phase, types] : o.Need("messages").items()) {
      Obj t = phases.Child(phase);
      for (const auto& [type, count] : types.items()) {
        l.messages[phase][type] = t.Req<uint64_t>(type);
      }
    }
  }
  l.accepted_records = o.Req<uint64_t>("accepted_records");
  l.rejected_records = o.Req<uint64_t>("rejected_records");
  l.total_paid_cents = o.Req<int64_t>("total_paid_cents");
  l.total_fee_cents = o.Req<int64_t>("total_fee_cents");
  l.conserved = o.Req<bool>("conserved");
  o.Finish();
  for (const auto& d : l.disputes) {
    if (d.bundle_ref >= l.evidence.size() || d.result_ref >= l.evidence.size()) {
      o.Fail("disputes", "evidence reference out of range");
    }
  }
  return l;
}

std::vector<std::string> SplitLines(std::string_view text) {
  std::vector<std::string> lines;
  std::istringstream in{std::string(text)};
  for (std::string line; std::getline(in, line);) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(line);
  }
  return lines;
}

std::vector<std::string> SplitFields(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

}  // namespace

sim::Scenario ParseScenario(std::string_view text, const std::filesystem::path& base_dir) {
  json j = Parse(text, ErrorCode::kConfig);
  return ReadScenario(Obj(j, "", ErrorCode::kConfig), base_dir, true);
}

sim::Scenario LoadScenarioFile(const std::filesystem::path& path) {
  std::string text = ReadFile(path);
  try {
    return ParseScenario(text, path.parent_path());
  } catch (const Error& e) {
    throw Error(e.code(), path.string() + ": " + e.what());
  }
}

std::string ScenarioToJson(const sim::Scenario& scenario) {
  return ScenarioJsonValue(scenario).dump(2) + "\n";
}

toll::ChargingPolicy ParsePolicy(std::string_view text) {
  json j = Parse(text, ErrorCode::kConfig);
  toll::ChargingPolicy p = ReadPolicy(Obj(j, "", ErrorCode::kConfig));
  p.Validate();
  return p;
}

std::string LedgerToJson(const sim::SessionLedger& ledger) {
  return LedgerJsonValue(ledger).dump(2) + "\n";
}

sim::SessionLedger ParseLedger(std::string_view text) {
  json j = Parse(text, ErrorCode::kMalformed);
  return ReadLedger(Obj(j, "", ErrorCode::kMalformed));
}

std::string SummaryCsv(const sim::SessionLedger& ledger) {
  std::string out = "user_id,claimed_cents,real_cents,paid_cents,accused\n";
  for (const auto& u : ledger.users) {
    out += u.user_id + "," + std::to_string(u.claimed_cents) + "," +
           std::to_string(u.real_cents) + "," + std::to_string(u.paid_cents) + "," +
           (u.accused ? "true" : "false") + "\n";
  }
  return out;
}

std::vector<protocol::Observation> ParseObservations(std::string_view text) {
  std::vector<std::string> lines = SplitLines(text);
  auto fail = [](size_t line, const std::string& msg) {
    throw Error(ErrorCode::kMalformed,
                "observations line " + std::to_string(line) + ": " + msg);
  };
  if (lines.empty() || lines[0] != "lat,lon,t,plate") {
    fail(1, "expected header 'lat,lon,t,plate'");
  }
  std::vector<protocol::Observation> out;
  for (size_t i = 1; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    std::vector<std::string> f = SplitFields(lines[i]);
    if (f.size() != 4) fail(i + 1, "expected 4 fields, got " + std::to_string(f.size()));
    protocol::Observation obs;
    try {
      size_t used = 0;
      double lat = std::stod(f[0], &used);
      if (used != f[0].size()) throw std::invalid_argument("lat");
      double lon = std::stod(f[1], &used);
      if (used != f[1].size()) throw std::invalid_argument("lon");
      obs.time = std::stoll(f[2], &used);
      if (used != f[2].size()) throw std::invalid_argument("t");
      obs.location = toll::Location::FromDegrees(lat, lon);
    } catch (const std::exception&) {
      fail(i + 1, "non-numeric lat, lon or t");
    }
    if (!obs.location.Valid()) fail(i + 1, "coordinates out of range");
    if (f[3].empty()) fail(i + 1, "empty plate");
    obs.plate = f[3];
    out.push_back(std::move(obs));
  }
  return out;
}

std::string ObservationsCsv(const std::vector<protocol::Observation>& rows) {
  std::string out = "lat,lon,t,plate\n";
  for (const auto& r : rows) {
    out += toll::FormatFixed6(r.location.lat_micro) + "," +
           toll::FormatFixed6(r.location.lon_micro) + "," + std::to_string(r.time) + "," +
           r.plate + "\n";
  }
  return out;
}

std::string LocationDbLines(const std::vector<protocol::LocationRecord>& records) {
  std::string out;
  for (const auto& r : records) {
    json line = {{"group_id", r.tuple.group_id},
                 {"location", toll::CanonicalLocationText(r.tuple.location, r.tuple.time)},
                 {"record", Hex(r.Encode())}};
    out += line.dump() + "\n";
  }
  return out;
}

std::vector<protocol::LocationRecord> ParseLocationDb(std::string_view text) {
  std::vector<protocol::LocationRecord> out;
  std::vector<std::string> lines = SplitLines(text);
  for (size_t i = 0; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    std::string where = "line " + std::to_string(i + 1);
    json j = Parse(lines[i], ErrorCode::kMalformed);
    Obj o(j, where, ErrorCode::kMalformed);
    std::string group = o.Req<std::string>("group_id");
    std::string loc = o.Req<std::string>("location");
    auto record = protocol::LocationRecord::Decode(
        Unhex(o, o.Path("record"), o.Req<std::string>("record")));
    o.Finish();
    if (record.tuple.group_id != group ||
        toll::CanonicalLocationText(record.tuple.location, record.tuple.time) != loc) {
      o.Fail(where, "record does not match its location");
    }
    out.push_back(std::move(record));
  }
  return out;
}

std::string LocationDbFileName(const std::string& group_id, const std::string& sid) {
  return group_id + "." + sid + ".jsonl";
}

std::string ReadFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void WriteFile(const std::filesystem::path& path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path.string());
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  if (!out) throw Error(ErrorCode::kIo, "write failed for " + path.string());
}

}  // namespace etp::io
