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

#ifndef ETP_PROTOCOL_AUTHORITY_H_
#define ETP_PROTOCOL_AUTHORITY_H_

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "crypto/group.h"
#include "crypto/paillier.h"
#include "crypto/rng.h"
#include "crypto/schnorr.h"
#include "gs/group_signature.h"
#include "protocol/envelope.h"
#include "protocol/messages.h"

namespace etp::protocol {

class Authority {
 public:
  // region_groups maps a region name onto the group its users join.
  Authority(Group group, crypto::Rng rng,
            std::map<std::string, std::string> region_groups);

  static constexpr std::string_view kName = "authority";

  const GroupElement& public_key() const { return key_.public_key; }
  SealedEnvelope Seal(MessageType type, const std::string& recipient,
                      Bytes payload);
  void SetServer(const GroupElement& server_public,
                 const PaillierPublicKey& server_paillier);

  // Serial number shipped with the user's OBU. Idempotent per user.
  Bytes IssueSerial(const std::string& user_id);

  // Throws kVerificationFailed (bad key cert), kNotFound (unknown serial or
  // region) or kDuplicate (user re-joining with another member key). A
  // replayed request returns the same group, index and cert.
  JoinResponse Join(const JoinRequest& request);

  std::vector<std::string> GroupIds() const;
  const GroupPublicKey& gpk(const std::string& group_id) const;
  GroupAnnouncement Announce(const std::string& group_id) const;
  std::optional<std::string> GroupOfUser(const std::string& user_id) const;

  // DisRes. Throws kNotFound for an unknown group. The bundle's own server
  // signature matters only when it is later used as evidence. The result is
  // signed with a nonce stream derived from the bundle, so replays are
  // byte-identical.
  DisputeResult ResolveDispute(const DisputeBundle& bundle) const;

  // Optional follow-up to a flagged spot check: names the signer of a
  // record. Disabled unless enabled explicitly.
  void set_allow_signer_queries(bool allow) { allow_signer_queries_ = allow; }
  std::string IdentifySigner(const LocationRecord& record) const;

 private:
  struct GroupState {
    GroupPublicKey gpk;
    gs::GroupManagerKey manager;
    std::vector<std::string> members;  // by roster index
  };

  struct Member {
    std::string group_id;
    uint64_t member_index = 0;
    GroupElement user_public;
    GroupElement member_public;
    StdSignature cert;
  };

  GroupState& EnsureGroup(const std::string& group_id);
  const GroupState& FindGroup(const std::string& group_id) const;

  Group group_;
  crypto::Rng rng_;
  crypto::Rng seal_rng_;
  crypto::StdKeyPair key_;
  std::map<std::string, std::string> region_groups_;
  std::optional<GroupElement> server_public_;
  std::optional<PaillierPublicKey> server_paillier_;
  std::map<std::string, Bytes> serials_;
  std::map<std::string, GroupState> groups_;
  std::map<std::string, Member> members_;
  bool allow_signer_queries_ = false;
};

}  // namespace etp::protocol

#endif  // ETP_PROTOCOL_AUTHORITY_H_
