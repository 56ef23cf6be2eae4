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

#include "protocol/authority.h"

#include <utility>

#include "common/error.h"
#include "crypto/encoding.h"
#include "toll/fee.h"

namespace etp::protocol {

Authority::Authority(Group group, crypto::Rng rng,
                     std::map<std::string, std::string> region_groups)
    : group_(std::move(group)),
      rng_(std::move(rng)),
      seal_rng_(rng_.Fork("seal")),
      region_groups_(std::move(region_groups)) {
  crypto::Rng key_rng = rng_.Fork("signing-key");
  key_ = crypto::StdKeygen(group_, key_rng);
}

void Authority::SetServer(const GroupElement& server_public,
                          const PaillierPublicKey& server_paillier) {
  server_public_ = server_public;
  server_paillier_ = server_paillier;
}

SealedEnvelope Authority::Seal(MessageType type, const std::string& recipient,
                               Bytes payload) {
  return protocol::Seal(group_, key_, type, std::string(kName), recipient,
                        std::move(payload), seal_rng_);
}

Bytes Authority::IssueSerial(const std::string& user_id) {
  auto it = serials_.find(user_id);
  if (it != serials_.end()) return it->second;
  crypto::Rng serial_rng = rng_.Fork("serial/" + user_id);
  Bytes sn = serial_rng.NextBytes(kSecretSize);
  serials_[user_id] = sn;
  return sn;
}

Authority::GroupState& Authority::EnsureGroup(const std::string& group_id) {
  auto it = groups_.find(group_id);
  if (it != groups_.end()) return it->second;
  crypto::Rng setup_rng = rng_.Fork("group/" + group_id);
  auto [gpk, manager] = gs::GsSetup(group_, group_id, key_, setup_rng);
  GroupState& state = groups_[group_id];
  state.gpk = std::move(gpk);
  state.manager = std::move(manager);
  return state;
}

const Authority::GroupState& Authority::FindGroup(const std::string& group_id) const {
  auto it = groups_.find(group_id);
  ETP_ENFORCE(it != groups_.end(), ErrorCode::kNotFound,
              "unknown group " + group_id);
  return it->second;
}

JoinResponse Authority::Join(const JoinRequest& request) {
  ETP_ENFORCE(server_public_.has_value(), ErrorCode::kConfig,
              "server key not configured");
  const KeyCert& kc = request.key_cert;
  ETP_ENFORCE(crypto::StdVerify(group_, *server_public_,
                                KeyCertMessage(kc.user_id, kc.user_public),
                                kc.server_sig),
              ErrorCode::kVerificationFailed, "server key certificate invalid");
  auto sn = serials_.find(kc.user_id);
  ETP_ENFORCE(sn != serials_.end() && sn->second == request.serial,
              ErrorCode::kNotFound, "unknown serial number");
  auto region = region_groups_.find(request.region);
  ETP_ENFORCE(region != region_groups_.end(), ErrorCode::kNotFound,
              "no group for region " + request.region);

  auto existing = members_.find(kc.user_id);
  if (existing != members_.end()) {
    const Member& m = existing->second;
    ETP_ENFORCE(m.member_public == request.member_public &&
                    m.user_public == kc.user_public,
                ErrorCode::kDuplicate, "user already joined with another key");
    return JoinResponse{m.group_id, m.member_index, m.cert,
                        FindGroup(m.group_id).gpk};
  }

  GroupState& state = EnsureGroup(region->second);
  gs::RosterEntry entry =
      gs::GsJoin(group_, state.manager, state.gpk, request.member_public);
  state.members.push_back(kc.user_id);
  members_[kc.user_id] = Member{region->second, entry.member_index,
                                kc.user_public, request.member_public, entry.cert};
  return JoinResponse{region->second, entry.member_index, entry.cert, state.gpk};
}

std::vector<std::string> Authority::GroupIds() const {
  std::vector<std::string> out;
  for (const auto& [id, s] : groups_) out.push_back(id);
  return out;
}

const GroupPublicKey& Authority::gpk(const std::string& group_id) const {
  return FindGroup(group_id).gpk;
}

GroupAnnouncement Authority::Announce(const std::string& group_id) const {
  const GroupState& s = FindGroup(group_id);
  return GroupAnnouncement{s.gpk, s.members};
}

std::optional<std::string> Authority::GroupOfUser(const std::string& user_id) const {
  auto it = members_.find(user_id);
  if (it == members_.end()) return std::nullopt;
  return it->second.group_id;
}

DisputeResult Authority::ResolveDispute(const DisputeBundle& bundle) const {
  ETP_ENFORCE(server_public_.has_value() && server_paillier_.has_value(),
              ErrorCode::kConfig, "server key not configured");
  const GroupState& state = FindGroup(bundle.group_id);
  const PaillierPublicKey& pk = *server_paillier_;

  DisputeResult result;
  result.group_id = bundle.group_id;
  result.sid = bundle.sid;

  auto sign = [&](DisputeResult& r) {
    crypto::Rng sign_rng(crypto::Encoder()
                             .Str("etp/disres-nonce")
                             .Raw(bundle.Encode())
                             .Take());
    r.authority_sig = crypto::StdSign(group_, key_, r.SignedPart(), sign_rng);
    return r;
  };

  // Pass 1: every commitment in T carries its user's binding signature.
  std::map<std::string, PaillierCiphertext> claimed;
  for (const auto& t : bundle.set_t) {
    auto m = members_.find(t.user_id);
    bool ok = m != members_.end() && m->second.group_id == bundle.group_id &&
              !claimed.contains(t.user_id) &&
              crypto::StdVerify(group_, m->second.user_public,
                                BindingMessage(t.toll, bundle.fee_set_sig),
                                t.binding_sig);
    if (!ok) {
      result.verdict = Verdict::kCheckOfTFailed;
      return sign(result);
    }
    claimed[t.user_id] = t.toll;
  }

  // Pass 2: every record in S carries a valid, openable group signature.
  std::vector<uint64_t> signers;
  signers.reserve(bundle.set_s.size());
  for (const auto& s : bundle.set_s) {
    bool ok = s.signature.group_id == bundle.group_id &&
              gs::GsVerify(group_, state.gpk, s.loc_hash.view(), s.signature);
    if (ok) {
      try {
        signers.push_back(gs::GsOpen(group_, state.manager, state.gpk, s.signature));
      } catch (const Error&) {
        ok = false;
      }
    }
    if (!ok) {
      result.verdict = Verdict::kFakedLocationSignatures;
      return sign(result);
    }
  }

  // Pass 3: one accumulator per opened identity.
  std::map<std::string, PaillierCiphertext> real;
  for (size_t i = 0; i < bundle.set_s.size(); ++i) {
    const std::string& user = state.members.at(signers[i]);
    const PaillierCiphertext& fee = bundle.set_s[i].enc_fee;
    auto [it, first] = real.try_emplace(user, fee);
    if (!first) it->second = crypto::PaillierMul(pk, it->second, fee);
  }
  // Committed users with no records owe the canonical empty commitment.
  for (const auto& [user, toll] : claimed) {
    if (!real.contains(user)) {
      real[user] = toll::CanonicalEmptyCommitment(pk, bundle.sid, user);
    }
  }
  for (const auto& [user, toll] : real) {
    auto c = claimed.find(user);
    if (c == claimed.end()) {
      result.res.push_back({user, toll, false});
    } else if (!(c->second == toll)) {
      result.res.push_back({user, toll, true});
    }
  }
  return sign(result);
}

std::string Authority::IdentifySigner(const LocationRecord& record) const {
  ETP_ENFORCE(allow_signer_queries_, ErrorCode::kProtocolAbort,
              "signer queries are disabled");
  const GroupState& state = FindGroup(record.signature.group_id);
  Digest h = toll::HashLocation(record.tuple.location, record.tuple.time);
  ETP_ENFORCE(gs::GsVerify(group_, state.gpk, h.view(), record.signature),
              ErrorCode::kVerificationFailed, "record signature invalid");
  return state.members.at(gs::GsOpen(group_, state.manager, state.gpk,
                                     record.signature));
}

}  // namespace etp::protocol
