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

#include <memory>
#include <set>
#include <string>
#include <vector>

#include "common/error.h"
#include "crypto/group.h"
#include "crypto/paillier.h"
#include "protocol/accountability.h"
#include "protocol/authority.h"
#include "protocol/envelope.h"
#include "protocol/messages.h"
#include "protocol/spot_check.h"
#include "protocol/toll_server.h"
#include "protocol/user_agent.h"
#include "toll/fee.h"

namespace etp::protocol {
namespace {

using crypto::Rng;
using toll::TollSession;

constexpr int64_t kStart = 1699947000;  // 07:30 UTC
constexpr int64_t kEnd = 1699950600;    // 08:30 UTC
constexpr int64_t kOffPeak = kStart + 600;   // 07:40
constexpr int64_t kPeak = kStart + 2400;     // 08:10

toll::ChargingPolicy Policy() {
  toll::ChargingPolicy p;
  p.default_rate_cents = 100;
  p.peak_windows = {{8, 9, 150}};
  return p;
}

int64_t Decrypt(const TollServer& s, const PaillierCiphertext& c) {
  return crypto::PaillierDecrypt(s.paillier_secret(), c).get_si();
}

// Server, authority and users wired directly, without the harness bus.
class World {
 public:
  explicit World(std::map<std::string, std::string> regions = {{"north", "G1"},
                                                               {"south", "G2"}})
      : group_(crypto::TestGroupParams()),
        authority_(group_, Rng(7).Fork("authority"), regions),
        server_(group_, Rng(7).Fork("server"), 128,
                crypto::SecurityMode::kInsecureTest, Policy(),
                authority_.public_key()),
        session_{"s1", kStart, kEnd} {
    authority_.SetServer(server_.public_key(), server_.paillier_public());
    server_.OpenSession(session_);
  }

  UserAgent& AddUser(const std::string& id, const std::string& region = "north") {
    users_.push_back(std::make_unique<UserAgent>(id, region, group_,
                                                 Rng(7).Fork("user/" + id)));
    UserAgent& u = *users_.back();
    u.SetPin(server_.Enroll(id));
    u.AcceptKeyCert(server_.RegisterKey(u.MakeRegisterRequest()),
                    server_.public_key());
    u.SetSerial(authority_.IssueSerial(id));
    u.AcceptJoin(authority_.Join(u.MakeJoinRequest()), authority_.public_key());
    return u;
  }

  void Announce() {
    for (const auto& g : authority_.GroupIds()) {
      server_.AcceptGroup(authority_.Announce(g));
    }
    for (auto& u : users_) u->UpdateGroupKey(authority_.gpk(*u->group_id()));
  }

  void Drive(UserAgent& u, std::vector<int64_t> times, double lon = -2.25) {
    for (size_t i = 0; i < times.size(); ++i) {
      auto loc = toll::Location::FromDegrees(48.5 + 0.001 * static_cast<double>(i), lon);
      ASSERT_EQ(server_.Ingest(u.Record(loc, times[i])), IngestStatus::kAccepted);
    }
  }

  TollOutcome Pay(UserAgent& u) {
    const FeeSet& fs = server_.PublishFees(*u.group_id(), session_.sid);
    TollOutcome out = u.ComputeToll(fs, session_, server_.policy(),
                                    server_.public_key(), server_.paillier_public());
    if (out.commitment) {
      u.AcceptReceipt(server_.Settle(*out.commitment), server_.public_key());
    }
    return out;
  }

  PublicDirectory Directory() const {
    PublicDirectory d{group_, server_.public_key(), server_.paillier_public(),
                      authority_.public_key(), server_.policy(), {}, {}, {}, {}, {}};
    for (const auto& u : users_) {
      d.user_publics[u->id()] = u->public_key();
      d.user_groups[u->id()] = *u->group_id();
      d.plate_owners["PL-" + u->id()] = u->id();
    }
    for (const auto& g : authority_.GroupIds()) d.group_keys[g] = authority_.gpk(g);
    return d;
  }

  Group group_;
  Authority authority_;
  TollServer server_;
  TollSession session_;
  std::vector<std::unique_ptr<UserAgent>> users_;
};

// --- Phase 1 ---

TEST(SetupTest, EnrollRejectsDuplicatesAndIssuesDistinctPins) {
  World w;
  std::set<Bytes> pins;
  for (int i = 0; i < 1000; ++i) {
    Bytes pin = w.server_.Enroll("u" + std::to_string(i));
    EXPECT_EQ(pin.size(), 16u);
    pins.insert(pin);
  }
  EXPECT_EQ(pins.size(), 1000u);
  try {
    w.server_.Enroll("u0");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kDuplicate);
  }
}

TEST(SetupTest, RegistrationChecksPinBoundToUser) {
  World w;
  UserAgent a("a", "north", w.group_, Rng(1));
  UserAgent b("b", "north", w.group_, Rng(2));
  a.SetPin(w.server_.Enroll("a"));
  b.SetPin(w.server_.Enroll("b"));

  KeyCert cert = w.server_.RegisterKey(a.MakeRegisterRequest());
  EXPECT_TRUE(crypto::StdVerify(w.group_, w.server_.public_key(),
                                KeyCertMessage("a", a.public_key()),
                                cert.server_sig));
  EXPECT_NO_THROW(a.AcceptKeyCert(cert, w.server_.public_key()));

  // a's message replayed as b: verified against b's pin, so it fails.
  RegisterKeyRequest replay = a.MakeRegisterRequest();
  replay.user_id = "b";
  EXPECT_THROW(w.server_.RegisterKey(replay), Error);

  UserAgent wrong("b", "north", w.group_, Rng(2));
  wrong.SetPin(Bytes(16, 0xab));
  try {
    w.server_.RegisterKey(wrong.MakeRegisterRequest());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kVerificationFailed);
  }

  UserAgent stranger("z", "north", w.group_, Rng(3));
  stranger.SetPin(Bytes(16, 1));
  try {
    w.server_.RegisterKey(stranger.MakeRegisterRequest());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNotFound);
  }
}

TEST(SetupTest, JoinIsIdempotentAndRegionDriven) {
  World w;
  UserAgent& a = w.AddUser("a", "north");
  UserAgent& b = w.AddUser("b", "south");
  EXPECT_EQ(*a.group_id(), "G1");
  EXPECT_EQ(*b.group_id(), "G2");

  const auto& gpk = w.authority_.gpk("G1");
  EXPECT_TRUE(crypto::StdVerify(
      w.group_, w.authority_.public_key(),
      gs::RosterCertMessage("G1", a.member_index(), gpk.roster[a.member_index()].member_public),
      gpk.roster[a.member_index()].cert));

  JoinRequest again = a.MakeJoinRequest();
  JoinResponse r1 = w.authority_.Join(again);
  JoinResponse r2 = w.authority_.Join(again);
  EXPECT_EQ(r1.group_id, "G1");
  EXPECT_EQ(r1.member_index, r2.member_index);
  EXPECT_EQ(r1.cert, r2.cert);
  EXPECT_EQ(w.authority_.gpk("G1").roster.size(), 1u);

  JoinRequest forged = again;
  forged.key_cert.server_sig.response.value += 1;
  try {
    w.authority_.Join(forged);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kVerificationFailed);
  }

  JoinRequest bad_serial = again;
  bad_serial.serial[0] ^= 1;
  try {
    w.authority_.Join(bad_serial);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNotFound);
  }
}

// --- Phase 2 ---

TEST(DrivingTest, IngestAcceptsValidAndRejectsTampered) {
  World w;
  UserAgent& a = w.AddUser("a", "north");
  w.AddUser("b", "south");
  w.Announce();

  auto loc = toll::Location::FromDegrees(48.5, -2.25);
  LocationRecord r = a.Record(loc, kOffPeak);
  EXPECT_EQ(a.travelled().size(), 1u);
  EXPECT_EQ(w.server_.Ingest(r), IngestStatus::kAccepted);
  EXPECT_EQ(w.server_.Ingest(r), IngestStatus::kDuplicate);

  EXPECT_THROW(w.authority_.IdentifySigner(r), Error);
  w.authority_.set_allow_signer_queries(true);
  EXPECT_EQ(w.authority_.IdentifySigner(r), "a");

  LocationRecord moved = a.Record(loc, kOffPeak + 60);
  moved.tuple.location.lat_micro += 1;
  EXPECT_EQ(w.server_.Ingest(moved), IngestStatus::kBadSignature);

  LocationRecord foreign = a.Record(loc, kOffPeak + 120);
  foreign.tuple.group_id = "G2";
  EXPECT_EQ(w.server_.Ingest(foreign), IngestStatus::kUnknownGroup);
  foreign.signature.group_id = "G2";
  EXPECT_EQ(w.server_.Ingest(foreign), IngestStatus::kBadSignature);

  EXPECT_EQ(w.server_.Ingest(a.Record(loc, kEnd + 10)),
            IngestStatus::kOutsideSession);
  EXPECT_EQ(w.server_.rejected_count(), 5u);
  EXPECT_EQ(w.server_.StoredRecords("G1", "s1").size(), 1u);
}

TEST(DrivingTest, StoredRecordsCarryNoUserIdentifier) {
  World w;
  UserAgent& a = w.AddUser("alice-unique-id", "north");
  w.Announce();
  w.Drive(a, {kOffPeak, kPeak});
  Bytes needle = ToBytes("alice-unique-id");
  for (const auto& r : w.server_.StoredRecords("G1", "s1")) {
    Bytes enc = r.Encode();
    EXPECT_EQ(std::search(enc.begin(), enc.end(), needle.begin(), needle.end()),
              enc.end());
  }
}

// --- Phase 3 ---

TEST(TollTest, PublishIsImmutableAndFeesDecryptToPolicy) {
  World w;
  UserAgent& a = w.AddUser("a");
  UserAgent& b = w.AddUser("b");
  w.Announce();
  w.Drive(a, {kOffPeak, kPeak, kPeak + 60});
  w.Drive(b, {kOffPeak + 30}, -2.0);

  Bytes first = w.server_.PublishFees("G1", "s1").Encode();
  Bytes second = w.server_.PublishFees("G1", "s1").Encode();
  EXPECT_EQ(first, second);

  const FeeSet& fs = w.server_.PublishFees("G1", "s1");
  EXPECT_EQ(fs.tuples.size(), 4u);
  std::map<Digest, int64_t> expected;
  for (const auto& t : w.server_.StoredTuples("G1", "s1")) {
    expected[toll::HashLocation(t.location, t.time)] =
        toll::ComputeFee(w.server_.policy(), t.location, t.time);
  }
  for (const auto& t : fs.tuples) {
    EXPECT_EQ(Decrypt(w.server_, t.enc_fee), expected.at(t.loc_hash));
  }
  // Ingestion closes once the fee set is out.
  EXPECT_EQ(w.server_.Ingest(a.Record(toll::Location::FromDegrees(48.6, -2.25),
                                      kPeak + 600)),
            IngestStatus::kOutsideSession);
}

TEST(TollTest, UserTollSumsFeesAndEmptyTravelIsCanonical) {
  World w;
  UserAgent& a = w.AddUser("a");
  UserAgent& idle = w.AddUser("idle");
  w.Announce();
  w.Drive(a, {kOffPeak, kPeak});

  TollOutcome out = w.Pay(a);
  ASSERT_TRUE(out.commitment.has_value());
  EXPECT_EQ(Decrypt(w.server_, out.commitment->toll), 250);
  EXPECT_EQ(out.claimed_cents, 250);
  EXPECT_EQ(a.receipt("s1")->cost_cents, 250);
  EXPECT_TRUE(crypto::StdVerify(w.group_, w.server_.public_key(),
                                ReceiptMessage("s1", "a", 250),
                                a.receipt("s1")->server_sig));

  TollOutcome empty = w.Pay(idle);
  ASSERT_TRUE(empty.commitment.has_value());
  EXPECT_EQ(empty.commitment->toll,
            toll::CanonicalEmptyCommitment(w.server_.paillier_public(), "s1", "idle"));
  EXPECT_EQ(Decrypt(w.server_, empty.commitment->toll), 0);
  EXPECT_TRUE(w.server_.CheckBalance("G1", "s1").balanced());
}

TEST(TollTest, UserAbortsOnWrongOrMissingFee) {
  World w;
  UserAgent& a = w.AddUser("a");
  UserAgent& b = w.AddUser("b");
  w.Announce();
  w.Drive(a, {kOffPeak});
  w.Drive(b, {kPeak}, -2.0);
  const auto& tb = b.travelled()[0];
  const auto& ta = a.travelled()[0];
  w.server_.misbehaviour().fee_delta[toll::HashLocation(ta.location, ta.time)] = -40;
  w.server_.misbehaviour().drop_from_fee_set.insert(
      toll::HashLocation(tb.location, tb.time));

  TollOutcome wrong = w.Pay(a);
  ASSERT_TRUE(wrong.abort.has_value());
  EXPECT_EQ(wrong.abort->message, "wrong fee");
  EXPECT_EQ(wrong.abort->tuple, ta);
  EXPECT_FALSE(wrong.commitment.has_value());

  TollOutcome missing = w.Pay(b);
  ASSERT_TRUE(missing.abort.has_value());
  EXPECT_EQ(missing.abort->message, "incomplete fee set");

  FeeSet forged = w.server_.PublishFees("G1", "s1");
  forged.server_sig.response.value += 1;
  TollOutcome bad = a.ComputeToll(forged, w.session_, w.server_.policy(),
                                  w.server_.public_key(), w.server_.paillier_public());
  ASSERT_TRUE(bad.abort.has_value());
  EXPECT_EQ(bad.abort->reason, TollAbortReason::kBadFeeSet);
}

TEST(TollTest, SettlementRefusesForeignBinding) {
  World w;
  UserAgent& a = w.AddUser("a");
  w.Announce();
  w.Drive(a, {kOffPeak});
  const FeeSet& fs = w.server_.PublishFees("G1", "s1");
  TollOutcome out = a.ComputeToll(fs, w.session_, w.server_.policy(),
                                  w.server_.public_key(), w.server_.paillier_public());
  PaymentCommitment foreign = *out.commitment;
  foreign.fee_set_sig.challenge.value += 1;
  try {
    w.server_.Settle(foreign);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kVerificationFailed);
  }
  PaymentCommitment resigned = *out.commitment;
  resigned.toll.value = resigned.toll.value * resigned.toll.value %
                        w.server_.paillier_public().n_squared;
  EXPECT_THROW(w.server_.Settle(resigned), Error);
  EXPECT_EQ(w.server_.refused_settlements(), 2u);

  Receipt r = w.server_.Settle(*out.commitment);
  EXPECT_EQ(r.cost_cents, 100);
  EXPECT_THROW(w.server_.Settle(*out.commitment), Error);
}

// --- Phase 4 ---

TEST(DisputeTest, HonestRunIsBalancedAndResolvesEmpty) {
  World w;
  UserAgent& a = w.AddUser("a");
  UserAgent& b = w.AddUser("b");
  w.Announce();
  w.Drive(a, {kOffPeak, kPeak});
  w.Drive(b, {kOffPeak + 10, kPeak + 10, kPeak + 70}, -2.0);
  w.Pay(a);
  w.Pay(b);
  BalanceReport rep = w.server_.CheckBalance("G1", "s1");
  EXPECT_TRUE(rep.balanced());
  EXPECT_EQ(rep.expected_cents, 100 + 150 + 100 + 150 + 150);

  DisputeBundle bundle = w.server_.BuildDispute("G1", "s1");
  EXPECT_EQ(bundle.set_s.size(), 5u);
  EXPECT_EQ(bundle.set_t.size(), 2u);
  const FeeSet& fs = w.server_.PublishFees("G1", "s1");
  for (const auto& s : bundle.set_s) {
    ASSERT_NE(fs.Find(s.loc_hash), nullptr);
    EXPECT_EQ(fs.Find(s.loc_hash)->enc_fee, s.enc_fee);
  }
  DisputeResult r = w.authority_.ResolveDispute(bundle);
  EXPECT_EQ(r.verdict, Verdict::kResolved);
  EXPECT_TRUE(r.res.empty());
  EXPECT_TRUE(w.server_.FinalizeDispute(r).empty());
  // Replays sign identically.
  EXPECT_EQ(w.authority_.ResolveDispute(bundle).Encode(), r.Encode());
}

TEST(DisputeTest, SkippedFeeIsRecoveredExactly) {
  World w;
  UserAgent& a = w.AddUser("a");
  UserAgent& b = w.AddUser("b");
  w.Announce();
  w.Drive(a, {kOffPeak, kPeak});
  w.Drive(b, {kPeak + 5}, -2.0);
  b.misbehaviour().skip_fraction = 1.0;  // omits its single 150 fee
  w.Pay(a);
  TollOutcome cheat = w.Pay(b);
  EXPECT_EQ(cheat.claimed_cents, 0);
  EXPECT_EQ(w.server_.CheckBalance("G1", "s1").deficit_cents(), 150);

  DisputeResult r = w.authority_.ResolveDispute(w.server_.BuildDispute("G1", "s1"));
  ASSERT_EQ(r.verdict, Verdict::kResolved);
  ASSERT_EQ(r.res.size(), 1u);
  EXPECT_EQ(r.res[0].user_id, "b");
  EXPECT_TRUE(r.res[0].committed);
  EXPECT_EQ(Decrypt(w.server_, r.res[0].real_toll), 150);
  EXPECT_NE(r.res[0].real_toll, cheat.commitment->toll);

  auto adj = w.server_.FinalizeDispute(r);
  ASSERT_EQ(adj.size(), 1u);
  EXPECT_EQ(adj[0], (Adjustment{"b", 0, 150, 150}));
  EXPECT_TRUE(w.server_.CheckBalance("G1", "s1").balanced());

  DisputeResult forged = r;
  forged.res[0].real_toll.value += 1;
  EXPECT_THROW(w.server_.FinalizeDispute(forged), Error);
}

TEST(DisputeTest, UncommittedUserIsListedWithFullToll) {
  World w;
  UserAgent& a = w.AddUser("a");
  w.Announce();
  w.Drive(a, {kOffPeak, kPeak});
  a.misbehaviour().refuse_commit = true;
  TollOutcome out = w.Pay(a);
  EXPECT_FALSE(out.commitment.has_value());
  EXPECT_FALSE(out.abort.has_value());
  EXPECT_EQ(w.server_.CheckBalance("G1", "s1").deficit_cents(), 250);
  DisputeResult r = w.authority_.ResolveDispute(w.server_.BuildDispute("G1", "s1"));
  ASSERT_EQ(r.res.size(), 1u);
  EXPECT_FALSE(r.res[0].committed);
  EXPECT_EQ(Decrypt(w.server_, r.res[0].real_toll), 250);
}

TEST(DisputeTest, VerdictStringsForForgedSignaturesAndTamperedT) {
  World w;
  UserAgent& a = w.AddUser("a");
  w.Announce();
  w.Drive(a, {kOffPeak, kPeak});
  w.Pay(a);

  // A record for a place the user never visited, reusing a real signature.
  LocationRecord forged = w.server_.StoredRecords("G1", "s1")[0];
  forged.tuple.location.lon_micro += 5000;
  w.server_.InjectRecord(forged);
  DisputeResult faked = w.authority_.ResolveDispute(w.server_.BuildDispute("G1", "s1"));
  EXPECT_EQ(faked.verdict, Verdict::kFakedLocationSignatures);
  EXPECT_EQ(VerdictText(faked.verdict), "Faked location signatures");
  EXPECT_TRUE(faked.res.empty());
  EXPECT_TRUE(w.server_.FinalizeDispute(faked).empty());

  World w2;
  UserAgent& c = w2.AddUser("c");
  w2.Announce();
  w2.Drive(c, {kOffPeak});
  w2.Pay(c);
  w2.server_.misbehaviour().tamper_commitments.insert("c");
  DisputeBundle bundle = w2.server_.BuildDispute("G1", "s1");
  DisputeResult t_failed = w2.authority_.ResolveDispute(bundle);
  EXPECT_EQ(t_failed.verdict, Verdict::kCheckOfTFailed);
  EXPECT_EQ(VerdictText(t_failed.verdict), "check of T failed");

  // Alg. 1 checks T whether or not the bundle is still server-signed.
  bundle.server_sig.response.value += 1;
  EXPECT_EQ(w2.authority_.ResolveDispute(bundle).verdict, Verdict::kCheckOfTFailed);
}

TEST(DisputeTest, ProductConsistencyBetweenUserAndAuthority) {
  World w;
  UserAgent& a = w.AddUser("a");
  UserAgent& b = w.AddUser("b");
  w.Announce();
  w.Drive(a, {kOffPeak, kPeak, kPeak + 60, kPeak + 120});
  w.Drive(b, {kOffPeak}, -2.0);
  TollOutcome out = w.Pay(a);
  b.misbehaviour().refuse_commit = true;
  w.Pay(b);
  // b's absence forces a dispute; a's ciphertexts must match bitwise, so a
  // is not listed.
  DisputeResult r = w.authority_.ResolveDispute(w.server_.BuildDispute("G1", "s1"));
  ASSERT_EQ(r.res.size(), 1u);
  EXPECT_EQ(r.res[0].user_id, "b");
  EXPECT_EQ(r.Find("a"), nullptr);
  (void)out;
}

// --- spot checks ---

TEST(SpotCheckTest, InequalityExamples) {
  SpotCheckParams params{60, 50};
  toll::Location base = toll::Location::FromDegrees(48.5, -2.25);
  auto shifted = [&](double meters) {
    // Northward offset along a meridian.
    double deg = meters / (6371000.0 * 3.14159265358979323846 / 180.0);
    return toll::Location::FromDegrees(48.5 + deg, -2.25);
  };
  std::vector<LocationTuple> rec{{shifted(50), 1010, "G1"}};
  Observation obs{base, 1000, "PL"};
  EXPECT_NEAR(toll::PlanarDistanceMeters(base, shifted(50)), 50, 0.2);
  EXPECT_TRUE(SpotCheck(obs, rec, params).consistent);

  std::vector<LocationTuple> far_in_time{{base, 1031, "G1"}};
  EXPECT_FALSE(SpotCheck(obs, far_in_time, params).consistent);

  std::vector<LocationTuple> too_far{{shifted(2000), 1020, "G1"}};
  SpotCheckResult r = SpotCheck(obs, too_far, params);
  EXPECT_FALSE(r.consistent);
  EXPECT_EQ(r.records_in_window, 1u);

  std::vector<LocationTuple> same{{base, 1000, "G1"}};
  EXPECT_TRUE(SpotCheck(obs, same, params).consistent);

  try {
    SpotCheck(obs, rec, SpotCheckParams{0, 50});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kConfig);
  }
  EXPECT_THROW(SpotCheck(obs, rec, SpotCheckParams{60, -1}), Error);
}

// --- accountability ---

std::vector<EvidenceItem> Items(
    std::initializer_list<std::pair<EvidenceKind, Bytes>> items) {
  std::vector<EvidenceItem> out;
  for (const auto& [k, b] : items) out.push_back({k, "holder", b});
  return out;
}

TEST(FindTest, UnderpayingUserIsAccused) {
  World w;
  UserAgent& a = w.AddUser("a");
  w.Announce();
  w.Drive(a, {kOffPeak, kPeak, kPeak + 60});
  a.misbehaviour().skip_fraction = 0.34;
  TollOutcome out = w.Pay(a);
  DisputeResult r = w.authority_.ResolveDispute(w.server_.BuildDispute("G1", "s1"));
  auto ev = Items({{EvidenceKind::kDisputeResult, r.Encode()},
                   {EvidenceKind::kPaymentCommitment, out.commitment->Encode()}});
  Attack attack{AttackKind::kUserUnderpay, "a", "s1"};
  EXPECT_EQ(Find(ev, attack, w.Directory()), Principal::User("a"));
  // Either item alone is not enough.
  EXPECT_EQ(Find(std::span(ev).first(1), attack, w.Directory()),
            Principal::Inconclusive());
  EXPECT_EQ(Find(std::span(ev).last(1), attack, w.Directory()),
            Principal::Inconclusive());
  // A verdict whose signature was altered carries no weight.
  r.res[0].real_toll.value += 1;
  auto tampered = Items({{EvidenceKind::kDisputeResult, r.Encode()},
                         {EvidenceKind::kPaymentCommitment, out.commitment->Encode()}});
  EXPECT_EQ(Find(tampered, attack, w.Directory()), Principal::Inconclusive());
}

TEST(FindTest, NonCommittingUserVersusReceiptHolder) {
  World w;
  UserAgent& a = w.AddUser("a");
  w.Announce();
  w.Drive(a, {kOffPeak});
  a.misbehaviour().refuse_commit = true;
  w.Pay(a);
  DisputeResult r = w.authority_.ResolveDispute(w.server_.BuildDispute("G1", "s1"));
  Attack attack{AttackKind::kUserNoCommit, "a", "s1"};
  EXPECT_EQ(Find(Items({{EvidenceKind::kDisputeResult, r.Encode()}}), attack,
                 w.Directory()),
            Principal::User("a"));

  // If the user holds a receipt, the server hid a payment.
  World w2;
  UserAgent& b = w2.AddUser("a");
  w2.Announce();
  w2.Drive(b, {kOffPeak});
  w2.Pay(b);
  w2.server_.misbehaviour().omit_payments.insert("a");
  DisputeResult r2 = w2.authority_.ResolveDispute(w2.server_.BuildDispute("G1", "s1"));
  auto ev = Items({{EvidenceKind::kDisputeResult, r2.Encode()},
                   {EvidenceKind::kReceipt, b.receipt("s1")->Encode()}});
  EXPECT_EQ(Find(ev, attack, w2.Directory()), Principal::Server());
}

TEST(FindTest, WrongFeeIsProvenByOpening) {
  World w;
  UserAgent& a = w.AddUser("a");
  w.Announce();
  w.Drive(a, {kOffPeak, kPeak});
  const auto& t = a.travelled()[1];
  w.server_.misbehaviour().fee_delta[toll::HashLocation(t.location, t.time)] = 25;
  TollOutcome out = w.Pay(a);
  ASSERT_TRUE(out.abort.has_value());
  Opening opening{"a", "s1", {out.abort->tuple}, 1};
  auto ev = Items({{EvidenceKind::kFeeSet, out.abort->evidence.Encode()},
                   {EvidenceKind::kOpening, opening.Encode()}});
  Attack attack{AttackKind::kServerWrongFee, "a", "s1"};
  EXPECT_EQ(Find(ev, attack, w.Directory()), Principal::Server());

  // Opening an honestly priced tuple proves nothing.
  Opening honest{"a", "s1", {a.travelled()[0]}, 1};
  auto ev2 = Items({{EvidenceKind::kFeeSet, out.abort->evidence.Encode()},
                    {EvidenceKind::kOpening, honest.Encode()}});
  EXPECT_EQ(Find(ev2, attack, w.Directory()), Principal::Inconclusive());
}

TEST(FindTest, ForgedLocationInBundle) {
  World w;
  UserAgent& a = w.AddUser("a");
  w.Announce();
  w.Drive(a, {kOffPeak});
  w.Pay(a);
  LocationRecord forged = w.server_.StoredRecords("G1", "s1")[0];
  forged.tuple.time += 300;
  w.server_.InjectRecord(forged);
  DisputeBundle bundle = w.server_.BuildDispute("G1", "s1");
  Attack attack{AttackKind::kServerForgeLocation, "", "s1"};
  EXPECT_EQ(Find(Items({{EvidenceKind::kDisputeBundle, bundle.Encode()}}), attack,
                 w.Directory()),
            Principal::Server());

  World honest;
  UserAgent& b = honest.AddUser("b");
  honest.Announce();
  honest.Drive(b, {kOffPeak});
  honest.Pay(b);
  EXPECT_EQ(Find(Items({{EvidenceKind::kDisputeBundle,
                         honest.server_.BuildDispute("G1", "s1").Encode()}}),
                 attack, honest.Directory()),
            Principal::Inconclusive());
}

TEST(FindTest, UnderreportedPaymentIsProvenByReceiptAndOpening) {
  World w;
  UserAgent& a = w.AddUser("a");
  w.Announce();
  w.Drive(a, {kOffPeak, kPeak});
  w.Pay(a);
  w.server_.misbehaviour().omit_payments.insert("a");
  DisputeResult r = w.authority_.ResolveDispute(w.server_.BuildDispute("G1", "s1"));
  ASSERT_EQ(r.res.size(), 1u);
  Opening opening = a.MakeOpening("s1", w.server_.paillier_public());
  auto ev = Items({{EvidenceKind::kDisputeResult, r.Encode()},
                   {EvidenceKind::kReceipt, a.receipt("s1")->Encode()},
                   {EvidenceKind::kOpening, opening.Encode()}});
  Attack attack{AttackKind::kServerUnderreportPayment, "a", "s1"};
  EXPECT_EQ(Find(ev, attack, w.Directory()), Principal::Server());

  // A wrong randomness does not open the verdict's ciphertext.
  opening.randomness += 1;
  auto bad = Items({{EvidenceKind::kDisputeResult, r.Encode()},
                    {EvidenceKind::kReceipt, a.receipt("s1")->Encode()},
                    {EvidenceKind::kOpening, opening.Encode()}});
  EXPECT_EQ(Find(bad, attack, w.Directory()), Principal::Inconclusive());

  // Tampered T inside a server-signed bundle.
  World w2;
  UserAgent& c = w2.AddUser("c");
  w2.Announce();
  w2.Drive(c, {kOffPeak});
  w2.Pay(c);
  w2.server_.misbehaviour().tamper_commitments.insert("c");
  Attack attack2{AttackKind::kServerUnderreportPayment, "c", "s1"};
  EXPECT_EQ(Find(Items({{EvidenceKind::kDisputeBundle,
                         w2.server_.BuildDispute("G1", "s1").Encode()}}),
                 attack2, w2.Directory()),
            Principal::Server());
}

TEST(FindTest, ObuManipulationFlagsPlateOwner) {
  World w;
  UserAgent& a = w.AddUser("a");
  w.Announce();
  w.Drive(a, {kOffPeak, kOffPeak + 60});
  LocationLog log = w.server_.ExportLocationLog("G1", "s1");
  // Seen 20 km away from every transmitted point.
  Observation obs{toll::Location::FromDegrees(48.7, -2.25), kOffPeak + 20, "PL-a"};
  auto ev = Items({{EvidenceKind::kObservation, w.server_.AttestObservation(obs).Encode()},
                   {EvidenceKind::kLocationLog, log.Encode()}});
  Attack attack{AttackKind::kObuManipulation, "a", "s1"};
  EXPECT_EQ(Find(ev, attack, w.Directory()), Principal::User("a"));

  Observation ok{a.travelled()[0].location, kOffPeak + 5, "PL-a"};
  auto ev2 = Items({{EvidenceKind::kObservation, w.server_.AttestObservation(ok).Encode()},
                    {EvidenceKind::kLocationLog, log.Encode()}});
  EXPECT_EQ(Find(ev2, attack, w.Directory()), Principal::Inconclusive());
}

TEST(FindTest, PrincipalTextRoundTrip) {
  for (const auto& p : {Principal::User("u7"), Principal::Server(),
                        Principal::Inconclusive()}) {
    EXPECT_EQ(Principal::Parse(p.ToString()), p);
  }
  EXPECT_THROW(Principal::Parse("user:"), Error);
  for (int k = 1; k <= 6; ++k) {
    auto kind = static_cast<AttackKind>(k);
    EXPECT_EQ(ParseAttackKind(AttackKindName(kind)), kind);
  }
}

// --- wire format ---

TEST(WireTest, EnvelopesRoundTripAndAuthenticate) {
  Group group(crypto::TestGroupParams());
  Rng rng(11);
  auto key = crypto::StdKeygen(group, rng);
  SealedEnvelope env = Seal(group, key, MessageType::kReceipt, "server", "u1",
                            ToBytes("payload"), rng);
  Bytes wire = env.Encode();
  EXPECT_EQ(wire[0], static_cast<uint8_t>(MessageType::kReceipt));
  SealedEnvelope back = SealedEnvelope::Decode(wire);
  EXPECT_EQ(back, env);
  EXPECT_TRUE(VerifySeal(group, key.public_key, back));
  back.recipient = "u2";
  EXPECT_FALSE(VerifySeal(group, key.public_key, back));

  AnonymousEnvelope anon{MessageType::kLocationRecord, ToBytes("rec")};
  Bytes anon_wire = anon.Encode();
  EXPECT_EQ(anon_wire[0], 6);
  EXPECT_EQ(AnonymousEnvelope::Decode(anon_wire), anon);
  anon_wire[0] = 99;
  EXPECT_THROW(AnonymousEnvelope::Decode(anon_wire), Error);
}

TEST(WireTest, MessagesRoundTrip) {
  World w;
  UserAgent& a = w.AddUser("a");
  w.Announce();
  w.Drive(a, {kOffPeak, kPeak});
  TollOutcome out = w.Pay(a);
  a.misbehaviour().skip_fraction = 0;

  RegisterKeyRequest reg = a.MakeRegisterRequest();
  EXPECT_EQ(RegisterKeyRequest::Decode(reg.Encode()), reg);
  JoinRequest jr = a.MakeJoinRequest();
  EXPECT_EQ(JoinRequest::Decode(jr.Encode()), jr);
  JoinResponse resp = w.authority_.Join(jr);
  EXPECT_EQ(JoinResponse::Decode(resp.Encode()), resp);
  GroupAnnouncement ann = w.authority_.Announce("G1");
  EXPECT_EQ(GroupAnnouncement::Decode(ann.Encode()), ann);
  const auto& rec = w.server_.StoredRecords("G1", "s1")[0];
  EXPECT_EQ(LocationRecord::Decode(rec.Encode()), rec);
  const FeeSet& fs = w.server_.PublishFees("G1", "s1");
  EXPECT_EQ(FeeSet::Decode(fs.Encode()), fs);
  EXPECT_EQ(PaymentCommitment::Decode(out.commitment->Encode()), *out.commitment);
  EXPECT_EQ(Receipt::Decode(a.receipt("s1")->Encode()), *a.receipt("s1"));
  DisputeBundle b = w.server_.BuildDispute("G1", "s1");
  EXPECT_EQ(DisputeBundle::Decode(b.Encode()), b);
  DisputeResult r = w.authority_.ResolveDispute(b);
  EXPECT_EQ(DisputeResult::Decode(r.Encode()), r);
  Opening o = a.MakeOpening("s1", w.server_.paillier_public());
  EXPECT_EQ(Opening::Decode(o.Encode()), o);

  Bytes truncated = fs.Encode();
  truncated.pop_back();
  EXPECT_THROW(FeeSet::Decode(truncated), Error);
}

}  // namespace
}  // namespace etp::protocol
