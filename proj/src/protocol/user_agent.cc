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

#include "protocol/user_agent.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <utility>

#include "common/error.h"
#include "crypto/encoding.h"
#include "toll/fee.h"

namespace etp::protocol {

using crypto::Decoder;
using crypto::Encoder;

Bytes Opening::Encode() const {
  Encoder e;
  e.Str("etp/opening").Str(user_id).Str(sid).U64(tuples.size());
  for (const auto& t : tuples) e.Raw(EncodeLocationTuple(t));
  e.Int(randomness);
  return e.Take();
}

Opening Opening::Decode(ByteView bytes) {
  Decoder d(bytes);
  ETP_ENFORCE(d.Str() == "etp/opening", ErrorCode::kMalformed, "not an opening");
  Opening o;
  o.user_id = d.Str();
  o.sid = d.Str();
  uint64_t n = d.U64();
  ETP_ENFORCE(n <= bytes.size(), ErrorCode::kMalformed, "implausible count");
  for (uint64_t i = 0; i < n; ++i) o.tuples.push_back(DecodeLocationTuple(d.Raw()));
  o.randomness = d.Int();
  d.ExpectEnd();
  return o;
}

UserAgent::UserAgent(std::string user_id, std::string region, Group group,
                     crypto::Rng rng)
    : user_id_(std::move(user_id)),
      region_(std::move(region)),
      group_(std::move(group)),
      rng_(std::move(rng)),
      seal_rng_(rng_.Fork("seal")) {
  crypto::Rng key_rng = rng_.Fork("signing-key");
  key_ = crypto::StdKeygen(group_, key_rng);
}

SealedEnvelope UserAgent::Seal(MessageType type, const std::string& recipient,
                               Bytes payload) {
  return protocol::Seal(group_, key_, type, user_id_, recipient,
                        std::move(payload), seal_rng_);
}

uint64_t UserAgent::member_index() const {
  ETP_ENFORCE(member_.has_value(), ErrorCode::kProtocolAbort, "not joined");
  return member_->member_index;
}

RegisterKeyRequest UserAgent::MakeRegisterRequest() const {
  ETP_ENFORCE(pin_.size() == kSecretSize, ErrorCode::kProtocolAbort,
              "no pin received");
  crypto::Rng sign_rng = rng_.Fork("register");
  return RegisterKeyRequest{
      user_id_, key_.public_key,
      crypto::StdSign(group_, key_, RegisterPinMessage(pin_, key_.public_key),
                      sign_rng)};
}

void UserAgent::AcceptKeyCert(const KeyCert& cert,
                              const GroupElement& server_public) {
  ETP_ENFORCE(cert.user_id == user_id_ && cert.user_public == key_.public_key &&
                  crypto::StdVerify(group_, server_public,
                                    KeyCertMessage(cert.user_id, cert.user_public),
                                    cert.server_sig),
              ErrorCode::kVerificationFailed, "key certificate invalid");
  key_cert_ = cert;
}

JoinRequest UserAgent::MakeJoinRequest() {
  ETP_ENFORCE(key_cert_.has_value(), ErrorCode::kProtocolAbort,
              "key not registered");
  ETP_ENFORCE(serial_.size() == kSecretSize, ErrorCode::kProtocolAbort,
              "no serial number");
  if (!member_key_.has_value()) {
    crypto::Rng member_rng = rng_.Fork("member-key");
    member_key_ = gs::GsMemberKeygen(group_, member_rng);
  }
  return JoinRequest{*key_cert_, serial_, member_key_->second, region_};
}

void UserAgent::AcceptJoin(const JoinResponse& response,
                           const GroupElement& authority_public) {
  ETP_ENFORCE(member_key_.has_value(), ErrorCode::kProtocolAbort,
              "no join in progress");
  const auto& gpk = response.gpk;
  bool ok = gpk.group_id == response.group_id &&
            gpk.manager_public == authority_public &&
            response.member_index < gpk.roster.size() &&
            gpk.roster[response.member_index].member_public == member_key_->second &&
            gpk.roster[response.member_index].cert == response.cert &&
            crypto::StdVerify(group_, authority_public,
                              gs::RosterCertMessage(response.group_id,
                                                    response.member_index,
                                                    member_key_->second),
                              response.cert);
  ETP_ENFORCE(ok, ErrorCode::kVerificationFailed, "join response invalid");
  group_id_ = response.group_id;
  member_ = gs::MemberSecretKey{member_key_->first, response.member_index,
                                response.group_id};
  gpk_ = gpk;
}

void UserAgent::UpdateGroupKey(const GroupPublicKey& gpk) {
  ETP_ENFORCE(gpk_.has_value() && gpk.group_id == gpk_->group_id &&
                  gpk.escrow_public == gpk_->escrow_public &&
                  gpk.roster.size() >= gpk_->roster.size() &&
                  std::equal(gpk_->roster.begin(), gpk_->roster.end(),
                             gpk.roster.begin()),
              ErrorCode::kVerificationFailed, "group key does not extend ours");
  gpk_ = gpk;
}

LocationRecord UserAgent::Record(const Location& location, int64_t time) {
  ETP_ENFORCE(member_.has_value(), ErrorCode::kProtocolAbort, "not joined");
  LocationTuple tuple{location, time, *group_id_};
  Digest h = toll::HashLocation(location, time);
  LocationRecord record{tuple, gs::GsSign(group_, *gpk_, *member_, h.view(), rng_)};
  travelled_.push_back(std::move(tuple));
  return record;
}

std::vector<LocationTuple> UserAgent::TravelledIn(
    const toll::TollSession& session) const {
  std::vector<LocationTuple> out;
  for (const auto& t : travelled_) {
    if (session.Contains(t.time)) out.push_back(t);
  }
  return out;
}

TollOutcome UserAgent::ComputeToll(const FeeSet& fee_set,
                                   const toll::TollSession& session,
                                   const toll::ChargingPolicy& policy,
                                   const GroupElement& server_public,
                                   const PaillierPublicKey& server_paillier) {
  ETP_ENFORCE(member_.has_value(), ErrorCode::kProtocolAbort, "not joined");
  TollOutcome out;
  auto abort = [&](TollAbortReason reason, std::string_view msg,
                   const LocationTuple& tuple) {
    out.abort = TollAbort{reason, std::string(msg), tuple, fee_set};
    return out;
  };

  if (fee_set.group_id != *group_id_ || fee_set.sid != session.sid ||
      !crypto::StdVerify(group_, server_public,
                         FeeSetMessage(fee_set.group_id, fee_set.sid, fee_set.tuples),
                         fee_set.server_sig)) {
    return abort(TollAbortReason::kBadFeeSet, kAbortBadFeeSet, {});
  }

  // Own tuples keyed by hash, matching the server's de-duplication.
  std::map<Digest, LocationTuple> own;
  for (const auto& t : TravelledIn(session)) {
    own.emplace(toll::HashLocation(t.location, t.time), t);
  }
  std::vector<std::pair<const FeeTuple*, int64_t>> fees;
  std::vector<LocationTuple> tuples;
  for (const auto& [h, t] : own) {
    int64_t fee = toll::ComputeFee(policy, t.location, t.time);
    out.honest_cents += fee;
    const FeeTuple* ft = fee_set.Find(h);
    if (ft == nullptr) {
      return abort(TollAbortReason::kIncompleteFeeSet, kAbortIncompleteFeeSet, t);
    }
    if (!(ft->enc_fee == toll::EncryptFee(server_paillier, session.sid, h, fee))) {
      return abort(TollAbortReason::kWrongFee, kAbortWrongFee, t);
    }
    fees.emplace_back(ft, fee);
    tuples.push_back(t);
  }
  if (misbehaviour_.refuse_commit) return out;

  // Drop a deterministic random subset when scripted to underpay.
  std::vector<size_t> order(fees.size());
  std::iota(order.begin(), order.end(), 0);
  size_t skip = std::min(
      fees.size(),
      static_cast<size_t>(std::llround(misbehaviour_.skip_fraction *
                                       static_cast<double>(fees.size()))));
  for (size_t i = 0; i < skip; ++i) {
    size_t j = i + rng_.UniformBelow(BigInt(fees.size() - i)).get_ui();
    std::swap(order[i], order[j]);
  }
  std::vector<bool> skipped(fees.size(), false);
  for (size_t i = 0; i < skip; ++i) skipped[order[i]] = true;

  std::optional<PaillierCiphertext> product;
  std::vector<LocationTuple>& included = included_[session.sid];
  included.clear();
  for (size_t i = 0; i < fees.size(); ++i) {
    if (skipped[i]) continue;
    const auto& [ft, fee] = fees[i];
    product = product.has_value()
                  ? crypto::PaillierMul(server_paillier, *product, ft->enc_fee)
                  : ft->enc_fee;
    out.claimed_cents += fee;
    included.push_back(tuples[i]);
  }
  PaillierCiphertext toll_c =
      product.value_or(toll::CanonicalEmptyCommitment(server_paillier, session.sid,
                                                      user_id_));
  PaymentCommitment c{user_id_, session.sid, toll_c, fee_set.server_sig, {}};
  c.binding_sig = crypto::StdSign(group_, key_,
                                  BindingMessage(c.toll, c.fee_set_sig), rng_);
  claimed_[session.sid] = out.claimed_cents;
  out.commitment = std::move(c);
  return out;
}

void UserAgent::AcceptReceipt(const Receipt& receipt,
                              const GroupElement& server_public) {
  auto claimed = claimed_.find(receipt.sid);
  ETP_ENFORCE(receipt.user_id == user_id_ && claimed != claimed_.end() &&
                  claimed->second == receipt.cost_cents &&
                  crypto::StdVerify(group_, server_public,
                                    ReceiptMessage(receipt.sid, receipt.user_id,
                                                   receipt.cost_cents),
                                    receipt.server_sig),
              ErrorCode::kVerificationFailed, "receipt invalid");
  receipts_[receipt.sid] = receipt;
}

std::optional<Receipt> UserAgent::receipt(const std::string& sid) const {
  auto it = receipts_.find(sid);
  if (it == receipts_.end()) return std::nullopt;
  return it->second;
}

Opening UserAgent::MakeOpening(const std::string& sid,
                               const PaillierPublicKey& server_paillier) const {
  Opening o{user_id_, sid, {}, 1};
  auto it = included_.find(sid);
  if (it != included_.end()) o.tuples = it->second;
  if (o.tuples.empty()) {
    o.randomness = toll::DeriveEmptyRandomness(server_paillier, sid, user_id_);
    return o;
  }
  for (const auto& t : o.tuples) {
    Digest h = toll::HashLocation(t.location, t.time);
    o.randomness = o.randomness * toll::DeriveFeeRandomness(server_paillier, sid, h) %
                   server_paillier.n;
  }
  return o;
}

}  // namespace etp::protocol
