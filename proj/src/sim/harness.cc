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

#include "sim/harness.h"

#include <algorithm>
#include <set>
#include <tuple>
#include <utility>

#include "common/error.h"
#include "crypto/bigint.h"
#include "crypto/hash.h"
#include "toll/fee.h"

namespace etp::sim {

using protocol::AttackKind;
using protocol::EvidenceItem;
using protocol::EvidenceKind;
using protocol::LocationRecord;
using protocol::MessageType;
using protocol::Principal;

namespace {

constexpr std::string_view kServer = protocol::TollServer::kName;
constexpr std::string_view kAuthority = protocol::Authority::kName;

std::string RecordKey(const std::string& group_id, const toll::Location& loc,
                      int64_t time) {
  return group_id + "/" + toll::CanonicalLocationText(loc, time);
}

AttackKind AttackFor(ActionKind kind) {
  switch (kind) {
    case ActionKind::kUserSkipFees: return AttackKind::kUserUnderpay;
    case ActionKind::kUserRefusePay: return AttackKind::kUserNoCommit;
    case ActionKind::kServerWrongFee: return AttackKind::kServerWrongFee;
    case ActionKind::kServerForgeLocation: return AttackKind::kServerForgeLocation;
    case ActionKind::kServerOmitPayment: return AttackKind::kServerUnderreportPayment;
    case ActionKind::kObuFalseTuple: return AttackKind::kObuManipulation;
  }
  return AttackKind::kUserUnderpay;
}

Principal ScriptedPrincipal(const AdversaryAction& a) {
  switch (a.kind) {
    case ActionKind::kUserSkipFees:
    case ActionKind::kUserRefusePay:
    case ActionKind::kObuFalseTuple:
      return Principal::User(a.user);
    default:
      return Principal::Server();
  }
}

int64_t Cents(const crypto::PaillierSecretKey& sk, const protocol::PaillierCiphertext& c) {
  return crypto::PaillierDecrypt(sk, c).get_si();
}

// Phases 2-4 plus judging for one run.
class Run {
 public:
  Run(const Scenario& scenario, const RunOptions& options)
      : s_(scenario), options_(options), world_(scenario), bus_(world_.group()) {}

  RunResult Execute();

 private:
  struct Event {
    int64_t time;
    std::string user;
    toll::Location location;
  };

  uint64_t AddEvidence(EvidenceKind kind, std::string holder, Bytes payload) {
    ledger_.evidence.push_back({kind, std::move(holder), std::move(payload)});
    return ledger_.evidence.size() - 1;
  }

  template <typename M>
  M Send(Phase phase, protocol::SealedEnvelope env,
         const protocol::GroupElement& sender_public) {
    return M::Decode(bus_.Deliver(phase, env, sender_public));
  }

  void Drive();
  void ConfigureAdversary();
  void CalculateTolls();
  void ResolveDisputes();
  void RunSpotChecks();
  void Judge();
  void Summarize();

  const Scenario& s_;
  const RunOptions& options_;
  World world_;
  Bus bus_;
  SessionLedger ledger_;
  RunResult result_;
  std::map<std::string, Trace> traces_;
  std::map<std::string, std::vector<toll::LocationTuple>> accepted_;  // by user
  std::map<std::string, UserOutcome> users_;
  std::map<std::string, GroupOutcome> groups_;
  std::map<std::string, uint64_t> fee_set_ref_;
  std::map<std::string, uint64_t> log_ref_;
  std::set<std::string> aborted_groups_;
  std::map<std::string, int64_t> receipts_;
  std::map<std::string, int64_t> adjustments_;
};

RunResult Run::Execute() {
  world_.Setup(bus_);
  ledger_.scenario = s_;
  for (const auto& u : s_.users) {
    UserOutcome& out = users_[u.id];
    out.user_id = u.id;
    out.group_id = s_.region_groups.at(u.region);
  }
  Drive();
  ConfigureAdversary();
  CalculateTolls();
  ResolveDisputes();
  RunSpotChecks();
  Judge();
  Summarize();
  result_.view = CaptureServerView(world_.server(), s_.session.sid);
  for (const auto& g : world_.server().GroupIds()) {
    result_.stored[g] = world_.server().StoredRecords(g, s_.session.sid);
  }
  result_.ledger = std::move(ledger_);
  return std::move(result_);
}

void Run::Drive() {
  traces_ = GenerateTrips(s_);
  if (options_.swap.has_value()) {
    const TupleSwap& sw = *options_.swap;
    Trace& a = traces_.at(sw.user_a);
    Trace& b = traces_.at(sw.user_b);
    ETP_ENFORCE(sw.index < a.size() && sw.index < b.size(), ErrorCode::kConfig,
                "swap index out of range");
    std::swap(a[sw.index], b[sw.index]);
    std::sort(a.begin(), a.end(), [](auto& x, auto& y) { return x.time < y.time; });
    std::sort(b.begin(), b.end(), [](auto& x, auto& y) { return x.time < y.time; });
  }

  std::vector<Event> events;
  for (const auto& [id, trace] : traces_) {
    for (const auto& p : trace) {
      toll::Location loc = p.location;
      bool silent = false;
      for (const auto& a : s_.actions) {
        if (a.kind != ActionKind::kObuFalseTuple || a.user != id) continue;
        if (p.time < a.at || p.time >= a.until) continue;
        if (a.mode == "silent") silent = true;
        if (a.mode == "shift") loc = OffsetMeters(loc, a.shift_m, 0);
      }
      if (!silent) events.push_back({p.time, id, loc});
    }
  }
  std::sort(events.begin(), events.end(), [](const Event& a, const Event& b) {
    return std::tie(a.time, a.user) < std::tie(b.time, b.user);
  });

  std::vector<const AdversaryAction*> forgeries;
  for (const auto& a : s_.actions) {
    if (a.kind == ActionKind::kServerForgeLocation) forgeries.push_back(&a);
  }
  std::sort(forgeries.begin(), forgeries.end(),
            [](auto* x, auto* y) { return x->at < y->at; });
  size_t next_forgery = 0;
  auto forge_until = [&](int64_t time_limit) {
    auto& server = world_.server();
    for (; next_forgery < forgeries.size() && forgeries[next_forgery]->at < time_limit;
         ++next_forgery) {
      const AdversaryAction& a = *forgeries[next_forgery];
      LocationRecord fake;
      fake.tuple = {a.location, a.at, a.group};
      // The best the server can do: reuse a real signature from the group.
      const auto& stored = server.StoredRecords(a.group, s_.session.sid);
      if (!stored.empty()) {
        fake.signature = stored.back().signature;
      } else {
        fake.signature.group_id = a.group;
      }
      server.InjectRecord(fake);
    }
  };

  const int64_t eps = s_.interval_seconds;
  size_t i = 0;
  while (i < events.size()) {
    int64_t window = (events[i].time - s_.session.start_time) / eps;
    int64_t window_end = s_.session.start_time + (window + 1) * eps;
    std::vector<LocationRecord> batch;
    for (; i < events.size() && events[i].time < window_end; ++i) {
      const Event& e = events[i];
      batch.push_back(world_.user(e.user).Record(e.location, e.time));
      result_.signer_of[RecordKey(users_[e.user].group_id, e.location, e.time)] = e.user;
    }
    for (const auto& record : bus_.Mix(batch)) {
      auto status = world_.server().Ingest(record);
      std::string key = RecordKey(record.tuple.group_id, record.tuple.location,
                                  record.tuple.time);
      if (status == protocol::IngestStatus::kAccepted) {
        ++ledger_.accepted_records;
        accepted_[result_.signer_of.at(key)].push_back(record.tuple);
      }
    }
    forge_until(window_end);
  }
  forge_until(s_.session.end_time);
  ledger_.rejected_records = world_.server().rejected_count();
}

void Run::ConfigureAdversary() {
  auto& mis = world_.server().misbehaviour();
  for (size_t i = 0; i < s_.actions.size(); ++i) {
    const AdversaryAction& a = s_.actions[i];
    switch (a.kind) {
      case ActionKind::kUserSkipFees:
        world_.user(a.user).misbehaviour().skip_fraction = a.fraction;
        break;
      case ActionKind::kUserRefusePay:
        world_.user(a.user).misbehaviour().refuse_commit = true;
        break;
      case ActionKind::kServerWrongFee: {
        const auto& sent = accepted_[a.user];
        ETP_ENFORCE(a.tuple_index < sent.size(), ErrorCode::kConfig,
                    "actions[" + std::to_string(i) + "].tuple_index: user has only " +
                        std::to_string(sent.size()) + " records");
        const auto& t = sent[a.tuple_index];
        mis.fee_delta[toll::HashLocation(t.location, t.time)] += a.delta_cents;
        break;
      }
      case ActionKind::kServerOmitPayment:
        (a.mode == "omit" ? mis.omit_payments : mis.tamper_commitments).insert(a.user);
        break;
      case ActionKind::kServerForgeLocation:
      case ActionKind::kObuFalseTuple:
        break;
    }
  }
}

void Run::CalculateTolls() {
  auto& server = world_.server();
  const std::string& sid = s_.session.sid;
  for (const auto& g : world_.authority().GroupIds()) {
    log_ref_[g] = AddEvidence(EvidenceKind::kLocationLog, std::string(kServer),
                              server.ExportLocationLog(g, sid).Encode());
    const protocol::FeeSet& fs = server.PublishFees(g, sid);
    fee_set_ref_[g] = AddEvidence(EvidenceKind::kFeeSet, "group:" + g, fs.Encode());
    groups_[g].fee_set_digest = ToHex(crypto::Hash(fs.Encode()).view());

    for (const auto& id : world_.MembersOf(g)) {
      protocol::UserAgent& user = world_.user(id);
      UserOutcome& out = users_[id];
      auto received = Send<protocol::FeeSet>(
          Phase::kTollCalculation,
          server.Seal(MessageType::kFeeSet, id, fs.Encode()), server.public_key());
      protocol::TollOutcome toll = user.ComputeToll(
          received, s_.session, s_.policy, server.public_key(), server.paillier_public());
      if (toll.abort.has_value()) {
        out.status = "aborted: " + toll.abort->message;
        AbortRecord rec{id, g, toll.abort->message, {fee_set_ref_[g]}};
        if (toll.abort->reason != protocol::TollAbortReason::kBadFeeSet) {
          protocol::Opening opening{id, sid, {toll.abort->tuple}, 1};
          rec.evidence_refs.push_back(
              AddEvidence(EvidenceKind::kOpening, id, opening.Encode()));
        }
        ledger_.aborts.push_back(std::move(rec));
        aborted_groups_.insert(g);
        continue;
      }
      if (!toll.commitment.has_value()) {
        out.status = "no commitment";
        continue;
      }
      out.claimed_cents = toll.claimed_cents;
      auto commitment = Send<protocol::PaymentCommitment>(
          Phase::kTollCalculation,
          user.Seal(MessageType::kPaymentCommitment, std::string(kServer),
                    toll.commitment->Encode()),
          user.public_key());
      AddEvidence(EvidenceKind::kPaymentCommitment, std::string(kServer),
                  commitment.Encode());
      try {
        protocol::Receipt receipt = server.Settle(commitment);
        auto delivered = Send<protocol::Receipt>(
            Phase::kTollCalculation,
            server.Seal(MessageType::kReceipt, id, receipt.Encode()),
            server.public_key());
        user.AcceptReceipt(delivered, server.public_key());
        AddEvidence(EvidenceKind::kReceipt, id, delivered.Encode());
        receipts_[id] = delivered.cost_cents;
        out.status = "settled";
      } catch (const Error& e) {
        out.status = "settlement refused";
      }
    }
  }
}

void Run::ResolveDisputes() {
  auto& server = world_.server();
  auto& authority = world_.authority();
  const std::string& sid = s_.session.sid;
  const auto& sk = server.paillier_secret();
  for (const auto& g : authority.GroupIds()) {
    GroupOutcome& go = groups_[g];
    go.aborted = aborted_groups_.contains(g);
    // A user abort with evidence terminates the session for the group.
    if (go.aborted) continue;
    protocol::BalanceReport report = server.CheckBalance(g, sid);
    // A server hiding payments raises the dispute itself: T must be
    // published for the omission to take effect.
    const auto& mis = server.misbehaviour();
    bool forced = false;
    for (const auto& id : world_.MembersOf(g)) {
      forced |= mis.omit_payments.contains(id) || mis.tamper_commitments.contains(id);
    }
    if (report.balanced() && !forced) continue;

    go.disputed = true;
    DisputeRecord rec;
    rec.group_id = g;
    rec.deficit_cents = report.deficit_cents();
    auto bundle = Send<protocol::DisputeBundle>(
        Phase::kDispute,
        server.Seal(MessageType::kDisputeBundle, std::string(kAuthority),
                    server.BuildDispute(g, sid).Encode()),
        server.public_key());
    rec.bundle_ref = AddEvidence(EvidenceKind::kDisputeBundle, std::string(kAuthority),
                                 bundle.Encode());
    auto result = Send<protocol::DisputeResult>(
        Phase::kDispute,
        authority.Seal(MessageType::kDisputeResult, std::string(kServer),
                       authority.ResolveDispute(bundle).Encode()),
        authority.public_key());
    rec.result_ref = AddEvidence(EvidenceKind::kDisputeResult, std::string(kServer),
                                 result.Encode());
    rec.verdict = std::string(protocol::VerdictText(result.verdict));
    for (const auto& a : result.res) {
      rec.res.push_back({a.user_id, Cents(sk, a.real_toll), a.committed});
    }
    rec.adjustments = server.FinalizeDispute(result);
    for (const auto& adj : rec.adjustments) adjustments_[adj.user_id] += adj.unpaid_cents;

    // Listed users holding a receipt contest the listing with an opening of
    // their commitment's randomness.
    protocol::PublicDirectory dir = world_.Directory();
    for (const auto& a : result.res) {
      protocol::UserAgent& user = world_.user(a.user_id);
      if (!user.receipt(sid).has_value()) continue;
      protocol::Opening opening = user.MakeOpening(sid, server.paillier_public());
      opening.tuples.clear();
      AddEvidence(EvidenceKind::kOpening, a.user_id, opening.Encode());
      protocol::Attack contest{AttackKind::kServerUnderreportPayment, a.user_id, sid};
      if (protocol::Find(ledger_.evidence, contest, dir) == Principal::Server()) {
        int64_t charged = 0;
        for (const auto& adj : rec.adjustments) {
          if (adj.user_id == a.user_id) charged = adj.unpaid_cents;
        }
        users_[a.user_id].refunded_cents += charged;
      }
    }
    ledger_.disputes.push_back(std::move(rec));
  }
}

void Run::RunSpotChecks() {
  auto& server = world_.server();
  std::map<std::string, std::vector<toll::LocationTuple>> logs;
  for (const auto& [g, ref] : log_ref_) {
    logs[g] = protocol::LocationLog::Decode(ledger_.evidence[ref].payload).tuples;
  }
  for (const auto& spec : s_.spot_checks) {
    const UserSpec& u = s_.User(spec.user);
    protocol::Observation obs{PositionAt(traces_.at(u.id), spec.time), spec.time,
                              u.plate};
    SpotCheckRecord rec;
    rec.user_id = u.id;
    rec.plate = u.plate;
    rec.time = spec.time;
    rec.location = obs.location;
    rec.evidence_ref = AddEvidence(EvidenceKind::kObservation, std::string(kServer),
                                   server.AttestObservation(obs).Encode());
    auto result = protocol::SpotCheck(obs, logs[users_.at(u.id).group_id], s_.spot_check);
    rec.consistent = result.consistent;
    rec.records_in_window = result.records_in_window;
    if (result.witness.has_value()) {
      rec.has_witness = true;
      rec.dt_seconds = result.witness->dt_seconds;
      rec.distance_m = result.witness->distance_meters;
      rec.bound_m = s_.spot_check.gamma_mps * result.witness->dt_seconds;
    }
    ledger_.spot_checks.push_back(rec);
  }
}

void Run::Judge() {
  protocol::PublicDirectory dir = world_.Directory();
  for (size_t i = 0; i < s_.actions.size(); ++i) {
    const AdversaryAction& a = s_.actions[i];
    protocol::Attack attack{AttackFor(a.kind), a.user, s_.session.sid};
    protocol::Finding f = protocol::FindWithEvidence(ledger_.evidence, attack, dir);
    Accusation acc;
    acc.action_index = i;
    acc.action = ActionKindName(a.kind);
    acc.attack = protocol::AttackKindName(attack.kind);
    acc.user = a.user;
    acc.expected = ScriptedPrincipal(a).ToString();
    acc.accused = f.accused.ToString();
    acc.evidence_refs.assign(f.evidence.begin(), f.evidence.end());
    acc.correct = f.accused == ScriptedPrincipal(a);
    if (f.accused.role == Principal::Role::kUser) users_[f.accused.id].accused = true;
    ledger_.accusations.push_back(std::move(acc));
  }
}

void Run::Summarize() {
  const auto& policy = s_.policy;
  for (auto& [id, out] : users_) {
    const auto& sent = accepted_[id];
    out.records = sent.size();
    for (const auto& t : sent) out.real_cents += toll::ComputeFee(policy, t.location, t.time);
    out.paid_cents = receipts_[id] + adjustments_[id] - out.refunded_cents;
    ledger_.users.push_back(out);
  }
  for (const auto& g : world_.authority().GroupIds()) {
    GroupOutcome& go = groups_[g];
    go.group_id = g;
    go.members = world_.MembersOf(g).size();
    protocol::BalanceReport report = world_.server().CheckBalance(g, s_.session.sid);
    go.records = report.record_count;
    go.expected_cents = report.expected_cents;
    for (const auto& id : world_.MembersOf(g)) go.paid_cents += users_[id].paid_cents;
    go.balanced = go.paid_cents == go.expected_cents;
    ledger_.total_fee_cents += go.expected_cents;
    ledger_.total_paid_cents += go.paid_cents;
    ledger_.groups.push_back(go);
  }
  ledger_.conserved = ledger_.total_fee_cents == ledger_.total_paid_cents;
  ledger_.messages = bus_.counts();

  auto& ids = result_.identifiers.by_user;
  for (const auto& u : s_.users) {
    protocol::UserAgent& agent = world_.user(u.id);
    const auto& gpk = world_.authority().gpk(users_.at(u.id).group_id);
    ids[u.id] = {ToBytes(u.id), ToBytes(u.plate),
                 crypto::BigIntToBytes(agent.public_key().value),
                 crypto::BigIntToBytes(gpk.roster.at(agent.member_index()).member_public.value)};
  }
  if (options_.swap.has_value()) {
    const TupleSwap& sw = *options_.swap;
    auto original = GenerateTrips(s_);
    for (const auto& id : {sw.user_a, sw.user_b}) {
      const auto& p = original.at(id).at(sw.index);
      result_.swapped.push_back(toll::CanonicalLocationText(p.location, p.time));
    }
  }
}

}  // namespace

// --- World ---

World::World(const Scenario& scenario)
    : scenario_((scenario.Validate(), scenario)),
      group_(crypto::GroupParamsFor(scenario.mode)),
      authority_(group_, crypto::Rng(scenario.seed).Fork("authority"),
                 scenario.region_groups),
      server_(group_, crypto::Rng(scenario.seed).Fork("server"),
              scenario.paillier_bits, scenario.mode, scenario.policy,
              authority_.public_key()) {
  authority_.SetServer(server_.public_key(), server_.paillier_public());
  server_.OpenSession(scenario.session);
  crypto::Rng root(scenario.seed);
  for (const auto& u : scenario.users) {
    users_[u.id] = std::make_unique<protocol::UserAgent>(u.id, u.region, group_,
                                                         root.Fork("user/" + u.id));
  }
}

void World::Setup(Bus& bus) {
  const std::string server_name(kServer);
  const std::string authority_name(kAuthority);
  for (auto& [id, user] : users_) {
    // Pin and serial travel out of band (mail, OBU packaging).
    user->SetPin(server_.Enroll(id));
    user->SetSerial(authority_.IssueSerial(id));

    protocol::RegisterKeyRequest req = user->MakeRegisterRequest();
    auto delivered = protocol::RegisterKeyRequest::Decode(bus.Deliver(
        Phase::kSetup,
        user->Seal(MessageType::kRegisterKey, server_name, req.Encode()),
        req.user_public));
    protocol::KeyCert cert = server_.RegisterKey(delivered);
    user->AcceptKeyCert(
        protocol::KeyCert::Decode(bus.Deliver(
            Phase::kSetup, server_.Seal(MessageType::kKeyCert, id, cert.Encode()),
            server_.public_key())),
        server_.public_key());

    auto join = protocol::JoinRequest::Decode(bus.Deliver(
        Phase::kSetup,
        user->Seal(MessageType::kJoinRequest, authority_name,
                   user->MakeJoinRequest().Encode()),
        user->public_key()));
    protocol::JoinResponse resp = authority_.Join(join);
    user->AcceptJoin(
        protocol::JoinResponse::Decode(bus.Deliver(
            Phase::kSetup,
            authority_.Seal(MessageType::kJoinResponse, id, resp.Encode()),
            authority_.public_key())),
        authority_.public_key());
  }
  for (const auto& g : authority_.GroupIds()) {
    Bytes ann = authority_.Announce(g).Encode();
    server_.AcceptGroup(protocol::GroupAnnouncement::Decode(bus.Deliver(
        Phase::kSetup,
        authority_.Seal(MessageType::kGroupAnnouncement, server_name, ann),
        authority_.public_key())));
    for (const auto& id : MembersOf(g)) {
      auto delivered = protocol::GroupAnnouncement::Decode(bus.Deliver(
          Phase::kSetup, authority_.Seal(MessageType::kGroupAnnouncement, id, ann),
          authority_.public_key()));
      users_.at(id)->UpdateGroupKey(delivered.gpk);
    }
  }
}

std::vector<std::string> World::MembersOf(const std::string& group_id) const {
  std::vector<std::string> out;
  for (const auto& [id, user] : users_) {
    if (user->group_id() == group_id) out.push_back(id);
  }
  return out;
}

protocol::PublicDirectory World::Directory() const {
  protocol::PublicDirectory d{
      .group = group_,
      .server_public = server_.public_key(),
      .server_paillier = server_.paillier_public(),
      .authority_public = authority_.public_key(),
      .policy = scenario_.policy,
      .spot_check = scenario_.spot_check,
      .user_publics = {},
      .user_groups = {},
      .group_keys = {},
      .plate_owners = {},
  };
  for (const auto& u : scenario_.users) {
    if (auto pk = server_.UserPublic(u.id)) d.user_publics[u.id] = *pk;
    if (auto g = server_.GroupOfUser(u.id)) d.user_groups[u.id] = *g;
    d.plate_owners[u.plate] = u.id;
  }
  for (const auto& g : authority_.GroupIds()) d.group_keys[g] = authority_.gpk(g);
  return d;
}

const UserOutcome* SessionLedger::FindUser(const std::string& id) const {
  for (const auto& u : users) {
    if (u.user_id == id) return &u;
  }
  return nullptr;
}

const GroupOutcome* SessionLedger::FindGroup(const std::string& id) const {
  for (const auto& g : groups) {
    if (g.group_id == id) return &g;
  }
  return nullptr;
}

RunResult RunScenario(const Scenario& scenario, const RunOptions& options) {
  Run run(scenario, options);
  return run.Execute();
}

protocol::DisputeResult ReplayDispute(const Scenario& scenario,
                                      const protocol::DisputeBundle& bundle) {
  World world(scenario);
  Bus bus(world.group());
  world.Setup(bus);
  return world.authority().ResolveDispute(bundle);
}

UnlinkabilityReport EvaluateUnlinkability(const RunResult& run,
                                          const RunResult* swapped_run) {
  UnlinkabilityReport report;
  report.identifier_hits = ScanForIdentifiers(run.view, run.identifiers);
  report.identifiers_absent = report.identifier_hits.empty();
  report.repeated_fields = CountRepeatedFields(run.view, run.signer_of);
  report.fields_fresh = report.repeated_fields == 0;
  for (const auto& g : run.ledger.groups) {
    report.anonymity_sets[g.group_id] = g.members;
    if (g.members < 2) report.singleton_groups.push_back(g.group_id);
  }
  if (swapped_run != nullptr) {
    report.swap_equivalent = SwapEquivalent(run.view, swapped_run->view,
                                            swapped_run->swapped, &report.swap_detail);
  }
  return report;
}

}  // namespace etp::sim
