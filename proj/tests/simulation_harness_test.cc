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

#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <string>

#include "common/error.h"
#include "protocol/accountability.h"
#include "protocol/messages.h"
#include "sim/harness.h"
#include "sim_fixtures.h"
#include "toll/policy.h"

namespace etp::sim {
namespace {

using etp::testing::Action;
using etp::testing::BaseScenario;
using etp::testing::kSessionStart;

// Plaintext oracle: policy fees summed over a user's generated trace.
std::map<std::string, int64_t> OracleCosts(const Scenario& s) {
  std::map<std::string, int64_t> out;
  for (const auto& [id, trace] : GenerateTrips(s)) {
    for (const auto& p : trace) out[id] += toll::ComputeFee(s.policy, p.location, p.time);
  }
  return out;
}

const Accusation& OnlyAccusation(const SessionLedger& ledger) {
  EXPECT_EQ(ledger.accusations.size(), 1u);
  return ledger.accusations.at(0);
}

TEST(TripsTest, SameSeedSameTraces) {
  Scenario s = BaseScenario(6);
  EXPECT_EQ(GenerateTrips(s), GenerateTrips(s));
  Scenario other = s;
  other.seed = 12;
  EXPECT_NE(GenerateTrips(s), GenerateTrips(other));
}

TEST(TripsTest, OneHourAtOneMinuteGivesSixtyPoints) {
  Scenario s = BaseScenario(6);
  for (const auto& [id, trace] : GenerateTrips(s)) {
    EXPECT_EQ(trace.size(), 60u) << id;
    for (size_t i = 1; i < trace.size(); ++i) {
      EXPECT_EQ(trace[i].time - trace[i - 1].time, s.interval_seconds);
    }
    EXPECT_TRUE(s.session.Contains(trace.front().time));
    EXPECT_TRUE(s.session.Contains(trace.back().time));
  }
}

TEST(TripsTest, SpeedsStayBelowGamma) {
  for (uint64_t seed : {1, 2, 3, 4, 5}) {
    Scenario s = BaseScenario(8, seed);
    for (const auto& [id, trace] : GenerateTrips(s)) {
      for (size_t i = 1; i < trace.size(); ++i) {
        double d = toll::PlanarDistanceMeters(trace[i - 1].location, trace[i].location);
        double v = d / static_cast<double>(trace[i].time - trace[i - 1].time);
        EXPECT_LE(v, s.max_speed_mps) << id << " step " << i;
        EXPECT_LE(v, s.spot_check.gamma_mps);
      }
    }
  }
}

TEST(ScenarioTest, ValidationNamesTheField) {
  Scenario s = BaseScenario(2);
  s.interval_seconds = 0;
  try {
    s.Validate();
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kConfig);
    EXPECT_NE(std::string(e.what()).find("interval_seconds"), std::string::npos);
  }
  s = BaseScenario(2);
  s.actions.push_back(Action(ActionKind::kUserRefusePay, "nobody"));
  EXPECT_THROW(s.Validate(), Error);
}

TEST(RunTest, HonestTenUsersPayExactly) {
  Scenario s = BaseScenario(10);
  RunResult run = RunScenario(s);
  const SessionLedger& l = run.ledger;
  auto oracle = OracleCosts(s);

  EXPECT_TRUE(l.disputes.empty());
  EXPECT_TRUE(l.aborts.empty());
  EXPECT_FALSE(l.messages.contains("dispute"));
  ASSERT_EQ(l.users.size(), 10u);
  for (const auto& u : l.users) {
    EXPECT_EQ(u.status, "settled") << u.user_id;
    EXPECT_EQ(u.records, 60u);
    EXPECT_EQ(u.real_cents, oracle.at(u.user_id));
    EXPECT_EQ(u.claimed_cents, u.real_cents);
    EXPECT_EQ(u.paid_cents, u.real_cents);
    EXPECT_FALSE(u.accused);
  }
  for (const auto& g : l.groups) {
    EXPECT_TRUE(g.balanced) << g.group_id;
    EXPECT_EQ(g.members, 5u);
  }
  EXPECT_TRUE(l.conserved);
  EXPECT_EQ(l.accepted_records, 600u);
  EXPECT_EQ(l.rejected_records, 0u);
  EXPECT_EQ(l.messages.at("driving").at("location_record"), 600u);
  EXPECT_EQ(l.messages.at("setup").at("join_request"), 10u);
}

TEST(RunTest, IdenticalSeedsGiveIdenticalLedgers) {
  Scenario s = BaseScenario(6);
  s.actions.push_back(Action(ActionKind::kUserSkipFees, "u02"));
  s.actions.back().fraction = 0.3;
  RunResult a = RunScenario(s);
  RunResult b = RunScenario(s);
  EXPECT_EQ(a.ledger, b.ledger);
  EXPECT_EQ(a.view, b.view);
  s.seed = 99;
  EXPECT_NE(RunScenario(s).ledger.evidence, a.ledger.evidence);
}

TEST(RunTest, ConservationAcrossSeeds) {
  for (uint64_t seed : {3, 4, 5}) {
    Scenario s = BaseScenario(4, seed);
    s.actions.push_back(Action(ActionKind::kUserSkipFees, "u01"));
    s.actions.back().fraction = 0.5;
    s.actions.push_back(Action(ActionKind::kUserRefusePay, "u02"));
    const SessionLedger l = RunScenario(s).ledger;
    int64_t paid = 0, fees = 0;
    for (const auto& u : l.users) paid += u.paid_cents;
    for (const auto& g : l.groups) fees += g.expected_cents;
    EXPECT_EQ(paid, l.total_paid_cents);
    EXPECT_EQ(fees, l.total_fee_cents);
    EXPECT_EQ(paid, fees) << "seed " << seed;
    EXPECT_TRUE(l.conserved);
  }
}

TEST(AttackTest, SkippedFeesAreChargedAfterDispute) {
  Scenario s = BaseScenario(6);
  s.actions.push_back(Action(ActionKind::kUserSkipFees, "u03"));
  s.actions.back().fraction = 0.3;
  const SessionLedger l = RunScenario(s).ledger;
  const int64_t real = OracleCosts(s).at("u03");

  ASSERT_EQ(l.disputes.size(), 1u);
  const DisputeRecord& d = l.disputes[0];
  EXPECT_EQ(d.group_id, "G1");
  EXPECT_EQ(d.verdict, "resolved");
  ASSERT_EQ(d.res.size(), 1u);
  EXPECT_EQ(d.res[0].user_id, "u03");
  EXPECT_EQ(d.res[0].real_cents, real);
  EXPECT_TRUE(d.res[0].committed);

  const UserOutcome* u = l.FindUser("u03");
  ASSERT_NE(u, nullptr);
  EXPECT_LT(u->claimed_cents, real);
  EXPECT_EQ(u->paid_cents, real);
  EXPECT_TRUE(u->accused);
  EXPECT_TRUE(l.FindGroup("G1")->balanced);

  const Accusation& acc = OnlyAccusation(l);
  EXPECT_EQ(acc.accused, "user:u03");
  EXPECT_TRUE(acc.correct);
  EXPECT_FALSE(acc.evidence_refs.empty());
}

TEST(AttackTest, RefusedPaymentBlamesTheUser) {
  Scenario s = BaseScenario(6);
  s.actions.push_back(Action(ActionKind::kUserRefusePay, "u02"));
  const SessionLedger l = RunScenario(s).ledger;
  ASSERT_EQ(l.disputes.size(), 1u);
  EXPECT_EQ(l.disputes[0].group_id, "G2");
  ASSERT_EQ(l.disputes[0].res.size(), 1u);
  EXPECT_FALSE(l.disputes[0].res[0].committed);
  EXPECT_EQ(l.FindUser("u02")->status, "no commitment");
  EXPECT_EQ(l.FindUser("u02")->paid_cents, OracleCosts(s).at("u02"));
  EXPECT_EQ(OnlyAccusation(l).accused, "user:u02");
  EXPECT_TRUE(l.conserved);
}

TEST(AttackTest, WrongFeeAbortsAndBlamesServer) {
  Scenario s = BaseScenario(6);
  auto a = Action(ActionKind::kServerWrongFee, "u04");
  a.tuple_index = 5;
  a.delta_cents = 40;
  s.actions.push_back(a);
  const SessionLedger l = RunScenario(s).ledger;
  ASSERT_EQ(l.aborts.size(), 1u);
  EXPECT_EQ(l.aborts[0].user_id, "u04");
  EXPECT_EQ(l.aborts[0].reason, "wrong fee");
  EXPECT_GE(l.aborts[0].evidence_refs.size(), 2u);
  EXPECT_TRUE(l.FindGroup("G2")->aborted);
  EXPECT_TRUE(l.disputes.empty());
  const Accusation& acc = OnlyAccusation(l);
  EXPECT_EQ(acc.accused, "server");
  EXPECT_TRUE(acc.correct);
}

TEST(AttackTest, WrongFeeTargetOutOfRangeIsConfigError) {
  Scenario s = BaseScenario(2);
  auto a = Action(ActionKind::kServerWrongFee, "u01");
  a.tuple_index = 500;
  a.delta_cents = 1;
  s.actions.push_back(a);
  EXPECT_THROW(RunScenario(s), Error);
}

TEST(AttackTest, ForgedLocationGivesFakedSignatureVerdict) {
  Scenario s = BaseScenario(6);
  auto a = Action(ActionKind::kServerForgeLocation, "");
  a.group = "G1";
  a.location = toll::Location::FromDegrees(48.51, -2.24);
  a.at = kSessionStart + 1234;
  s.actions.push_back(a);
  const SessionLedger l = RunScenario(s).ledger;
  ASSERT_EQ(l.disputes.size(), 1u);
  EXPECT_EQ(l.disputes[0].verdict, protocol::kVerdictFakedLocationSignatures);
  EXPECT_TRUE(l.disputes[0].adjustments.empty());
  const Accusation& acc = OnlyAccusation(l);
  EXPECT_EQ(acc.accused, "server");
  EXPECT_TRUE(acc.correct);
  for (const auto& u : l.users) EXPECT_FALSE(u.accused);
}

TEST(AttackTest, OmittedPaymentIsRefundedAndBlamesServer) {
  Scenario s = BaseScenario(6);
  auto a = Action(ActionKind::kServerOmitPayment, "u05");
  a.mode = "omit";
  s.actions.push_back(a);
  const SessionLedger l = RunScenario(s).ledger;
  ASSERT_EQ(l.disputes.size(), 1u);
  EXPECT_EQ(l.disputes[0].verdict, "resolved");
  const UserOutcome* u = l.FindUser("u05");
  EXPECT_GT(u->refunded_cents, 0);
  EXPECT_EQ(u->paid_cents, u->real_cents);
  EXPECT_FALSE(u->accused);
  EXPECT_EQ(OnlyAccusation(l).accused, "server");
  EXPECT_TRUE(l.conserved);
}

TEST(AttackTest, TamperedCommitmentFailsCheckOfT) {
  Scenario s = BaseScenario(6);
  auto a = Action(ActionKind::kServerOmitPayment, "u01");
  a.mode = "tamper";
  s.actions.push_back(a);
  const SessionLedger l = RunScenario(s).ledger;
  ASSERT_EQ(l.disputes.size(), 1u);
  EXPECT_EQ(l.disputes[0].verdict, protocol::kVerdictCheckOfTFailed);
  EXPECT_EQ(OnlyAccusation(l).accused, "server");
  EXPECT_EQ(l.FindUser("u01")->paid_cents, l.FindUser("u01")->real_cents);
}

TEST(AttackTest, SilentObuIsFlaggedBySpotCheck) {
  Scenario s = BaseScenario(6);
  auto a = Action(ActionKind::kObuFalseTuple, "u01");
  a.mode = "silent";
  a.at = kSessionStart + 1200;
  a.until = kSessionStart + 1500;
  s.actions.push_back(a);
  s.spot_checks = {{"u01", kSessionStart + 1290},
                   {"u01", kSessionStart + 1350},
                   {"u03", kSessionStart + 1350}};
  const SessionLedger l = RunScenario(s).ledger;
  ASSERT_EQ(l.spot_checks.size(), 3u);
  EXPECT_TRUE(!l.spot_checks[0].consistent || !l.spot_checks[1].consistent);
  EXPECT_TRUE(l.spot_checks[2].consistent);
  EXPECT_LT(l.FindUser("u01")->records, 60u);
  const Accusation& acc = OnlyAccusation(l);
  EXPECT_EQ(acc.accused, "user:u01");
  EXPECT_TRUE(acc.correct);
}

TEST(AttackTest, ShiftedObuIsFlaggedBySpotCheck) {
  Scenario s = BaseScenario(6);
  auto a = Action(ActionKind::kObuFalseTuple, "u02");
  a.mode = "shift";
  a.shift_m = 4000;
  a.at = kSessionStart + 600;
  a.until = kSessionStart + 900;
  s.actions.push_back(a);
  for (int64_t t = 630; t < 900; t += 60) s.spot_checks.push_back({"u02", kSessionStart + t});
  const SessionLedger l = RunScenario(s).ledger;
  // Records of other group members can vouch for an observation by chance,
  // so only some of the checks need to fail.
  size_t flagged = 0;
  for (const auto& c : l.spot_checks) flagged += c.consistent ? 0 : 1;
  EXPECT_GE(flagged, 1u);
  EXPECT_EQ(OnlyAccusation(l).accused, "user:u02");
}

TEST(AttackTest, HonestSpotChecksAreConsistent) {
  Scenario s = BaseScenario(4);
  for (int64_t dt : {0, 45, 600, 1799, 3000}) {
    s.spot_checks.push_back({"u01", kSessionStart + 60 + dt});
    s.spot_checks.push_back({"u04", kSessionStart + 60 + dt});
  }
  const SessionLedger l = RunScenario(s).ledger;
  for (const auto& c : l.spot_checks) {
    EXPECT_TRUE(c.consistent) << c.user_id << " at " << c.time;
    EXPECT_TRUE(c.has_witness);
    EXPECT_LE(c.distance_m, c.bound_m);
  }
}

TEST(AttackTest, EveryAccusationCitesEvidence) {
  Scenario s = BaseScenario(8);
  s.actions.push_back(Action(ActionKind::kUserSkipFees, "u01"));
  s.actions.back().fraction = 0.2;
  s.actions.push_back(Action(ActionKind::kUserRefusePay, "u02"));
  auto omit = Action(ActionKind::kServerOmitPayment, "u04");
  omit.mode = "omit";
  s.actions.push_back(omit);
  const SessionLedger l = RunScenario(s).ledger;
  ASSERT_EQ(l.accusations.size(), 3u);
  for (const auto& acc : l.accusations) {
    EXPECT_TRUE(acc.correct) << acc.action << " -> " << acc.accused;
    ASSERT_FALSE(acc.evidence_refs.empty());
    for (uint64_t ref : acc.evidence_refs) EXPECT_LT(ref, l.evidence.size());
  }
}

TEST(ReplayTest, DisputeReplayIsByteIdentical) {
  Scenario s = BaseScenario(4);
  s.actions.push_back(Action(ActionKind::kUserSkipFees, "u03"));
  s.actions.back().fraction = 0.5;
  const SessionLedger l = RunScenario(s).ledger;
  ASSERT_EQ(l.disputes.size(), 1u);
  auto bundle = protocol::DisputeBundle::Decode(
      l.evidence.at(l.disputes[0].bundle_ref).payload);
  protocol::DisputeResult replay = ReplayDispute(s, bundle);
  EXPECT_EQ(replay.Encode(), l.evidence.at(l.disputes[0].result_ref).payload);
}

TEST(UnlinkabilityTest, HonestRunPasses) {
  RunResult run = RunScenario(BaseScenario(6));
  UnlinkabilityReport r = EvaluateUnlinkability(run);
  EXPECT_TRUE(r.identifiers_absent) << (r.identifier_hits.empty() ? "" : r.identifier_hits[0]);
  EXPECT_TRUE(r.fields_fresh);
  EXPECT_TRUE(r.passed());
  EXPECT_EQ(r.anonymity_sets.at("G1"), 3u);
  EXPECT_TRUE(r.singleton_groups.empty());
}

TEST(UnlinkabilityTest, InjectedSenderTagFails) {
  RunResult run = RunScenario(BaseScenario(4));
  run.view.records.at(3).fields.push_back({"sender", ToBytes("u01")});
  UnlinkabilityReport r = EvaluateUnlinkability(run);
  EXPECT_FALSE(r.identifiers_absent);
  EXPECT_FALSE(r.passed());
}

TEST(UnlinkabilityTest, IdentifierValueInAnyFieldFails) {
  RunResult run = RunScenario(BaseScenario(4));
  run.view.records.at(0).fields.push_back({"extra", ToBytes("PL-u02")});
  EXPECT_FALSE(EvaluateUnlinkability(run).identifiers_absent);
}

TEST(UnlinkabilityTest, RepeatedSignatureFieldIsDetected) {
  RunResult run = RunScenario(BaseScenario(4));
  // Copy one record's t1 onto another record of the same signer.
  auto& recs = run.view.records;
  std::map<std::string, size_t> first;
  bool copied = false;
  for (size_t i = 0; i < recs.size() && !copied; ++i) {
    std::string key = recs[i].group_id + "/" +
                      std::string(recs[i].Field("location")->value.begin(),
                                  recs[i].Field("location")->value.end());
    const std::string& signer = run.signer_of.at(key);
    if (auto it = first.find(signer); it != first.end()) {
      for (auto& f : recs[i].fields) {
        if (f.name == "sig.t1") f.value = recs[it->second].Field("sig.t1")->value;
      }
      copied = true;
    } else {
      first[signer] = i;
    }
  }
  ASSERT_TRUE(copied);
  UnlinkabilityReport r = EvaluateUnlinkability(run);
  EXPECT_FALSE(r.fields_fresh);
  EXPECT_GE(r.repeated_fields, 1u);
}

TEST(UnlinkabilityTest, SingleUserGroupIsFlagged) {
  RunResult run = RunScenario(BaseScenario(3));  // south holds only u02
  UnlinkabilityReport r = EvaluateUnlinkability(run);
  EXPECT_EQ(r.anonymity_sets.at("G2"), 1u);
  ASSERT_EQ(r.singleton_groups.size(), 1u);
  EXPECT_EQ(r.singleton_groups[0], "G2");
}

TEST(UnlinkabilityTest, LocationSwapViewsMatchUpToPayloads) {
  Scenario s = BaseScenario(6);
  RunResult base = RunScenario(s);
  RunResult swapped = RunScenario(s, {TupleSwap{"u01", "u03", 17}});
  ASSERT_EQ(swapped.swapped.size(), 2u);
  UnlinkabilityReport r = EvaluateUnlinkability(base, &swapped);
  ASSERT_TRUE(r.swap_equivalent.has_value());
  EXPECT_TRUE(*r.swap_equivalent) << r.swap_detail;
  EXPECT_TRUE(r.passed());

  // Control: a different seed changes every record.
  Scenario other = s;
  other.seed = 77;
  RunResult unrelated = RunScenario(other, {TupleSwap{"u01", "u03", 17}});
  EXPECT_FALSE(*EvaluateUnlinkability(base, &unrelated).swap_equivalent);
}

}  // namespace
}  // namespace etp::sim
