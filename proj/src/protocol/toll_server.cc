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

#include "protocol/toll_server.h"

#include <algorithm>
#include <utility>

#include "common/error.h"
#include "crypto/encoding.h"
#include "toll/fee.h"

namespace etp::protocol {

using crypto::Decoder;
using crypto::Encoder;

namespace {

// Cents fit in int64 by construction; anything else is a malformed toll.
int64_t ToCents(const BigInt& v) {
  ETP_ENFORCE(v >= 0 && v.fits_slong_p(), ErrorCode::kOutOfRange,
              "amount exceeds 64 bits");
  return v.get_si();
}

Bytes EncodeObservation(const Observation& obs) {
  return Encoder()
      .Str(toll::CanonicalLocationText(obs.location, obs.time))
      .Str(obs.plate)
      .Take();
}

Observation DecodeObservation(Decoder& d) {
  Observation obs;
  auto [loc, t] = toll::ParseCanonicalLocation(d.Str());
  obs.location = loc;
  obs.time = t;
  obs.plate = d.Str();
  return obs;
}

}  // namespace

const char* IngestStatusName(IngestStatus status) {
  switch (status) {
    case IngestStatus::kAccepted: return "accepted";
    case IngestStatus::kUnknownGroup: return "unknown group";
    case IngestStatus::kBadSignature: return "bad signature";
    case IngestStatus::kOutsideSession: return "outside session";
    case IngestStatus::kDuplicate: return "duplicate";
  }
  return "unknown";
}

// --- LocationLog / SignedObservation ---

Bytes LocationLog::SignedPart() const {
  Encoder e;
  e.Str("etp/location-log").Str(group_id).Str(sid).U64(tuples.size());
  for (const auto& t : tuples) e.Raw(EncodeLocationTuple(t));
  return e.Take();
}

Bytes LocationLog::Encode() const {
  return Encoder().Raw(SignedPart()).Raw(server_sig.Encode()).Take();
}

LocationLog LocationLog::Decode(ByteView bytes) {
  Decoder outer(bytes);
  Bytes part = outer.Raw();
  LocationLog log;
  log.server_sig = StdSignature::Decode(outer.Raw());
  outer.ExpectEnd();
  Decoder d(part);
  ETP_ENFORCE(d.Str() == "etp/location-log", ErrorCode::kMalformed,
              "not a location log");
  log.group_id = d.Str();
  log.sid = d.Str();
  uint64_t n = d.U64();
  ETP_ENFORCE(n <= part.size(), ErrorCode::kMalformed, "implausible count");
  for (uint64_t i = 0; i < n; ++i) {
    log.tuples.push_back(DecodeLocationTuple(d.Raw()));
  }
  d.ExpectEnd();
  return log;
}

Bytes SignedObservation::SignedPart() const {
  return Encoder()
      .Str("etp/observation")
      .Raw(EncodeObservation(observation))
      .Take();
}

Bytes SignedObservation::Encode() const {
  return Encoder().Raw(SignedPart()).Raw(server_sig.Encode()).Take();
}

SignedObservation SignedObservation::Decode(ByteView bytes) {
  Decoder outer(bytes);
  Bytes part = outer.Raw();
  SignedObservation out;
  out.server_sig = StdSignature::Decode(outer.Raw());
  outer.ExpectEnd();
  Decoder d(part);
  ETP_ENFORCE(d.Str() == "etp/observation", ErrorCode::kMalformed,
              "not an observation");
  Bytes inner = d.Raw();
  d.ExpectEnd();
  Decoder od(inner);
  out.observation = DecodeObservation(od);
  od.ExpectEnd();
  return out;
}

// --- TollServer ---

TollServer::TollServer(Group group, crypto::Rng rng, unsigned paillier_bits,
                       crypto::SecurityMode mode, toll::ChargingPolicy policy,
                       GroupElement authority_public)
    : group_(std::move(group)),
      rng_(std::move(rng)),
      seal_rng_(rng_.Fork("seal")),
      policy_(std::move(policy)),
      authority_public_(std::move(authority_public)) {
  policy_.Validate();
  crypto::Rng key_rng = rng_.Fork("signing-key");
  key_ = crypto::StdKeygen(group_, key_rng);
  crypto::Rng paillier_rng = rng_.Fork("paillier-key");
  paillier_ = crypto::PaillierKeygen(paillier_bits, paillier_rng, mode);
}

SealedEnvelope TollServer::Seal(MessageType type, const std::string& recipient,
                                Bytes payload) {
  return protocol::Seal(group_, key_, type, std::string(kName), recipient,
                        std::move(payload), seal_rng_);
}

Bytes TollServer::Enroll(const std::string& user_id) {
  ETP_ENFORCE(!user_id.empty(), ErrorCode::kInvalidArgument, "empty user id");
  ETP_ENFORCE(!pins_.contains(user_id), ErrorCode::kDuplicate,
              "user already enrolled: " + user_id);
  Bytes pin;
  do {
    pin = rng_.NextBytes(kSecretSize);
  } while (pin_values_.contains(pin));
  pin_values_.insert(pin);
  pins_[user_id] = pin;
  return pin;
}

KeyCert TollServer::RegisterKey(const RegisterKeyRequest& request) {
  auto it = pins_.find(request.user_id);
  ETP_ENFORCE(it != pins_.end(), ErrorCode::kNotFound,
              "user not enrolled: " + request.user_id);
  ETP_ENFORCE(group_.Contains(request.user_public), ErrorCode::kInvalidArgument,
              "public key is not a group element");
  ETP_ENFORCE(crypto::StdVerify(group_, request.user_public,
                                RegisterPinMessage(it->second, request.user_public),
                                request.pin_sig),
              ErrorCode::kVerificationFailed, "pin signature does not verify");
  auto reg = registered_.find(request.user_id);
  ETP_ENFORCE(reg == registered_.end() || reg->second == request.user_public,
              ErrorCode::kDuplicate, "user already registered another key");
  registered_[request.user_id] = request.user_public;
  KeyCert cert{request.user_id, request.user_public, {}};
  crypto::Rng sign_rng = rng_.Fork("key-cert/" + request.user_id);
  cert.server_sig = crypto::StdSign(
      group_, key_, KeyCertMessage(cert.user_id, cert.user_public), sign_rng);
  return cert;
}

void TollServer::AcceptGroup(const GroupAnnouncement& announcement) {
  const auto& gpk = announcement.gpk;
  ETP_ENFORCE(gpk.manager_public == authority_public_,
              ErrorCode::kVerificationFailed, "group not issued by authority");
  ETP_ENFORCE(gs::GsRosterValid(group_, gpk), ErrorCode::kVerificationFailed,
              "roster certificate does not verify");
  ETP_ENFORCE(announcement.members.size() == gpk.roster.size(),
              ErrorCode::kMalformed, "member list does not match roster");
  auto it = groups_.find(gpk.group_id);
  if (it != groups_.end()) {
    const auto& old = it->second;
    ETP_ENFORCE(old.gpk.escrow_public == gpk.escrow_public &&
                    old.gpk.roster.size() <= gpk.roster.size() &&
                    std::equal(old.gpk.roster.begin(), old.gpk.roster.end(),
                               gpk.roster.begin()) &&
                    std::equal(old.members.begin(), old.members.end(),
                               announcement.members.begin()),
                ErrorCode::kVerificationFailed,
                "announcement does not extend the known roster");
  }
  for (const auto& m : announcement.members) {
    auto g = user_group_.find(m);
    ETP_ENFORCE(g == user_group_.end() || g->second == gpk.group_id,
                ErrorCode::kDuplicate, "user announced in two groups: " + m);
  }
  for (const auto& m : announcement.members) user_group_[m] = gpk.group_id;
  groups_[gpk.group_id] = announcement;
}

std::optional<std::string> TollServer::GroupOfUser(const std::string& user_id) const {
  auto it = user_group_.find(user_id);
  if (it == user_group_.end()) return std::nullopt;
  return it->second;
}

std::optional<GroupElement> TollServer::UserPublic(const std::string& user_id) const {
  auto it = registered_.find(user_id);
  if (it == registered_.end()) return std::nullopt;
  return it->second;
}

void TollServer::OpenSession(const toll::TollSession& session) {
  ETP_ENFORCE(!session.sid.empty() && session.start_time < session.end_time,
              ErrorCode::kInvalidArgument, "bad session window");
  for (const auto& [sid, s] : sessions_) {
    ETP_ENFORCE(sid != session.sid, ErrorCode::kDuplicate, "session exists");
    ETP_ENFORCE(session.end_time <= s.start_time || s.end_time <= session.start_time,
                ErrorCode::kInvalidArgument, "sessions overlap");
  }
  sessions_[session.sid] = session;
}

const toll::TollSession& TollServer::session(const std::string& sid) const {
  auto it = sessions_.find(sid);
  ETP_ENFORCE(it != sessions_.end(), ErrorCode::kNotFound, "unknown session " + sid);
  return it->second;
}

TollServer::Bucket& TollServer::BucketFor(const std::string& group_id,
                                          const std::string& sid) {
  return buckets_[{group_id, sid}];
}

const TollServer::Bucket* TollServer::FindBucket(const std::string& group_id,
                                                 const std::string& sid) const {
  auto it = buckets_.find({group_id, sid});
  return it == buckets_.end() ? nullptr : &it->second;
}

IngestStatus TollServer::Ingest(const LocationRecord& record) {
  auto reject = [this](IngestStatus s) {
    ++rejected_;
    return s;
  };
  auto g = groups_.find(record.tuple.group_id);
  if (g == groups_.end() || record.signature.group_id != record.tuple.group_id) {
    return reject(IngestStatus::kUnknownGroup);
  }
  Digest h = toll::HashLocation(record.tuple.location, record.tuple.time);
  if (!record.tuple.location.Valid() ||
      !gs::GsVerify(group_, g->second.gpk, h.view(), record.signature)) {
    return reject(IngestStatus::kBadSignature);
  }
  const toll::TollSession* session = nullptr;
  for (const auto& [sid, s] : sessions_) {
    if (s.Contains(record.tuple.time)) session = &s;
  }
  if (session == nullptr) return reject(IngestStatus::kOutsideSession);
  Bucket& b = BucketFor(record.tuple.group_id, session->sid);
  if (b.fee_set.has_value()) return reject(IngestStatus::kOutsideSession);
  if (!b.hashes.insert(h).second) return reject(IngestStatus::kDuplicate);
  b.records.push_back(record);
  return IngestStatus::kAccepted;
}

void TollServer::InjectRecord(const LocationRecord& record) {
  for (const auto& [sid, s] : sessions_) {
    if (s.Contains(record.tuple.time)) {
      Bucket& b = BucketFor(record.tuple.group_id, sid);
      b.hashes.insert(toll::HashLocation(record.tuple.location, record.tuple.time));
      b.records.push_back(record);
      return;
    }
  }
  throw Error(ErrorCode::kOutOfRange, "forged record outside every session");
}

int64_t TollServer::FeeOf(const LocationTuple& tuple) const {
  return toll::ComputeFee(policy_, tuple.location, tuple.time);
}

PaillierCiphertext TollServer::EncFeeOf(const std::string& sid,
                                        const Digest& hash, int64_t fee) const {
  auto delta = misbehaviour_.fee_delta.find(hash);
  if (delta != misbehaviour_.fee_delta.end()) {
    fee = std::max<int64_t>(0, fee + delta->second);
  }
  return toll::EncryptFee(paillier_.public_key, sid, hash, fee);
}

const FeeSet& TollServer::PublishFees(const std::string& group_id,
                                      const std::string& sid) {
  ETP_ENFORCE(groups_.contains(group_id), ErrorCode::kNotFound,
              "unknown group " + group_id);
  const toll::TollSession& s = session(sid);
  Bucket& b = BucketFor(group_id, sid);
  if (b.fee_set.has_value()) return *b.fee_set;

  std::vector<LocationTuple> tuples;
  tuples.reserve(b.records.size());
  for (const auto& r : b.records) tuples.push_back(r.tuple);
  FeeSet fs;
  fs.group_id = group_id;
  fs.sid = sid;
  for (auto& t : toll::MakeFeeTuples(policy_, s, tuples, paillier_.public_key)) {
    if (misbehaviour_.drop_from_fee_set.contains(t.loc_hash)) continue;
    fs.tuples.push_back(std::move(t));
  }
  if (!misbehaviour_.fee_delta.empty()) {
    for (const auto& r : b.records) {
      Digest h = toll::HashLocation(r.tuple.location, r.tuple.time);
      for (auto& t : fs.tuples) {
        if (t.loc_hash == h) t.enc_fee = EncFeeOf(sid, h, FeeOf(r.tuple));
      }
    }
  }
  crypto::Rng sign_rng = rng_.Fork("fee-set/" + group_id + "/" + sid);
  fs.server_sig = crypto::StdSign(group_, key_,
                                  FeeSetMessage(fs.group_id, fs.sid, fs.tuples),
                                  sign_rng);
  b.fee_set = std::move(fs);
  return *b.fee_set;
}

const FeeSet* TollServer::PublishedFees(const std::string& group_id,
                                        const std::string& sid) const {
  const Bucket* b = FindBucket(group_id, sid);
  return b != nullptr && b->fee_set.has_value() ? &*b->fee_set : nullptr;
}

Receipt TollServer::Settle(const PaymentCommitment& commitment) {
  auto refuse = [this](ErrorCode code, const std::string& msg) {
    ++refused_;
    throw Error(code, msg);
  };
  auto pk = registered_.find(commitment.user_id);
  if (pk == registered_.end()) refuse(ErrorCode::kNotFound, "unregistered user");
  auto g = user_group_.find(commitment.user_id);
  if (g == user_group_.end()) refuse(ErrorCode::kNotFound, "user has no group");
  Bucket* b = nullptr;
  auto bit = buckets_.find({g->second, commitment.sid});
  if (bit != buckets_.end()) b = &bit->second;
  if (b == nullptr || !b->fee_set.has_value()) {
    refuse(ErrorCode::kNotFound, "no fee set published for this session");
  }
  if (!(commitment.fee_set_sig == b->fee_set->server_sig) ||
      !crypto::StdVerify(group_, pk->second,
                         BindingMessage(commitment.toll, b->fee_set->server_sig),
                         commitment.binding_sig)) {
    refuse(ErrorCode::kVerificationFailed,
           "commitment is not bound to this server's fee set");
  }
  if (b->settlements.contains(commitment.user_id)) {
    refuse(ErrorCode::kDuplicate, "user already settled");
  }
  if (!crypto::IsValidCiphertext(paillier_.public_key, commitment.toll)) {
    refuse(ErrorCode::kInvalidCiphertext, "toll is not a valid ciphertext");
  }
  BigInt cost = crypto::PaillierDecrypt(paillier_.secret_key, commitment.toll);
  if (2 * cost >= paillier_.public_key.n || !cost.fits_slong_p()) {
    refuse(ErrorCode::kOutOfRange, "toll outside the valid range");
  }
  Receipt receipt{commitment.sid, commitment.user_id, cost.get_si(), {}};
  crypto::Rng sign_rng = rng_.Fork("receipt/" + commitment.sid + "/" + commitment.user_id);
  receipt.server_sig = crypto::StdSign(
      group_, key_, ReceiptMessage(receipt.sid, receipt.user_id, receipt.cost_cents),
      sign_rng);
  b->settlements[commitment.user_id] = Settlement{commitment, receipt};
  return receipt;
}

BalanceReport TollServer::CheckBalance(const std::string& group_id,
                                       const std::string& sid) const {
  BalanceReport report;
  const Bucket* b = FindBucket(group_id, sid);
  if (b == nullptr) return report;
  for (const auto& r : b->records) report.expected_cents += FeeOf(r.tuple);
  for (const auto& [user, s] : b->settlements) {
    report.paid_cents += s.receipt.cost_cents;
  }
  for (const auto& [user, cents] : b->adjustments) report.paid_cents += cents;
  report.record_count = b->records.size();
  report.commitment_count = b->settlements.size();
  return report;
}

DisputeBundle TollServer::BuildDispute(const std::string& group_id,
                                       const std::string& sid) {
  const FeeSet& fs = PublishFees(group_id, sid);
  Bucket& b = BucketFor(group_id, sid);
  DisputeBundle bundle;
  bundle.group_id = group_id;
  bundle.sid = sid;
  bundle.fee_set_sig = fs.server_sig;
  for (const auto& r : b.records) {
    Digest h = toll::HashLocation(r.tuple.location, r.tuple.time);
    const FeeTuple* published = fs.Find(h);
    PaillierCiphertext enc =
        published != nullptr ? published->enc_fee : EncFeeOf(sid, h, FeeOf(r.tuple));
    bundle.set_s.push_back({h, enc, r.signature});
  }
  for (const auto& [user, s] : b.settlements) {
    if (misbehaviour_.omit_payments.contains(user)) continue;
    CommittedPaymentEntry entry{user, s.commitment.toll, s.commitment.binding_sig};
    if (misbehaviour_.tamper_commitments.contains(user)) {
      // Adds one cent to the committed plaintext.
      const auto& pk = paillier_.public_key;
      entry.toll.value = entry.toll.value * (pk.n + 1) % pk.n_squared;
    }
    bundle.set_t.push_back(std::move(entry));
  }
  crypto::Rng sign_rng = rng_.Fork("bundle/" + group_id + "/" + sid);
  bundle.server_sig = crypto::StdSign(group_, key_, bundle.SignedPart(), sign_rng);
  return bundle;
}

std::vector<Adjustment> TollServer::FinalizeDispute(const DisputeResult& result) {
  ETP_ENFORCE(crypto::StdVerify(group_, authority_public_, result.SignedPart(),
                                result.authority_sig),
              ErrorCode::kVerificationFailed,
              "dispute result not signed by the authority");
  std::vector<Adjustment> out;
  if (result.verdict != Verdict::kResolved) return out;
  Bucket& b = BucketFor(result.group_id, result.sid);
  for (const auto& accused : result.res) {
    Adjustment adj;
    adj.user_id = accused.user_id;
    adj.real_cents = ToCents(
        crypto::PaillierDecrypt(paillier_.secret_key, accused.real_toll));
    auto s = b.settlements.find(accused.user_id);
    bool hidden = misbehaviour_.omit_payments.contains(accused.user_id);
    adj.claimed_cents = s == b.settlements.end() || hidden
                            ? 0
                            : s->second.receipt.cost_cents;
    adj.unpaid_cents = adj.real_cents - adj.claimed_cents;
    b.adjustments[accused.user_id] = adj.unpaid_cents;
    out.push_back(std::move(adj));
  }
  return out;
}

LocationLog TollServer::ExportLocationLog(const std::string& group_id,
                                          const std::string& sid) {
  LocationLog log{group_id, sid, StoredTuples(group_id, sid), {}};
  crypto::Rng sign_rng = rng_.Fork("location-log/" + group_id + "/" + sid);
  log.server_sig = crypto::StdSign(group_, key_, log.SignedPart(), sign_rng);
  return log;
}

SignedObservation TollServer::AttestObservation(const Observation& observation) {
  SignedObservation out{observation, {}};
  crypto::Rng sign_rng(out.SignedPart());
  out.server_sig = crypto::StdSign(group_, key_, out.SignedPart(), sign_rng);
  return out;
}

std::vector<LocationTuple> TollServer::StoredTuples(const std::string& group_id,
                                                    const std::string& sid) const {
  std::vector<LocationTuple> out;
  if (const Bucket* b = FindBucket(group_id, sid)) {
    for (const auto& r : b->records) out.push_back(r.tuple);
  }
  return out;
}

const std::vector<LocationRecord>& TollServer::StoredRecords(
    const std::string& group_id, const std::string& sid) const {
  static const std::vector<LocationRecord> kEmpty;
  const Bucket* b = FindBucket(group_id, sid);
  return b == nullptr ? kEmpty : b->records;
}

std::optional<Receipt> TollServer::ReceiptFor(const std::string& sid,
                                              const std::string& user_id) const {
  auto g = user_group_.find(user_id);
  if (g == user_group_.end()) return std::nullopt;
  const Bucket* b = FindBucket(g->second, sid);
  if (b == nullptr) return std::nullopt;
  auto s = b->settlements.find(user_id);
  if (s == b->settlements.end()) return std::nullopt;
  return s->second.receipt;
}

std::vector<std::string> TollServer::GroupIds() const {
  std::vector<std::string> out;
  for (const auto& [id, g] : groups_) out.push_back(id);
  return out;
}

}  // namespace etp::protocol
