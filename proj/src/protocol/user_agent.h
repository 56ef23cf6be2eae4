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

#ifndef ETP_PROTOCOL_USER_AGENT_H_
#define ETP_PROTOCOL_USER_AGENT_H_

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "crypto/group.h"
#include "crypto/rng.h"
#include "crypto/schnorr.h"
#include "gs/group_signature.h"
#include "protocol/envelope.h"
#include "protocol/messages.h"
#include "toll/policy.h"

namespace etp::protocol {

inline constexpr std::string_view kAbortIncompleteFeeSet = "incomplete fee set";
inline constexpr std::string_view kAbortWrongFee = "wrong fee";
inline constexpr std::string_view kAbortBadFeeSet = "fee set signature invalid";

// Scripted deviations from the honest user.
struct UserMisbehaviour {
  double skip_fraction = 0.0;  // share of own fees left out of the product
  bool refuse_commit = false;
};

enum class TollAbortReason { kBadFeeSet, kIncompleteFeeSet, kWrongFee };

struct TollAbort {
  TollAbortReason reason = TollAbortReason::kWrongFee;
  std::string message;
  LocationTuple tuple;  // the own tuple that failed the check
  FeeSet evidence;      // the signed fee set as received
};

struct TollOutcome {
  std::optional<PaymentCommitment> commitment;
  std::optional<TollAbort> abort;
  int64_t honest_cents = 0;   // policy fees over own tuples
  int64_t claimed_cents = 0;  // plaintext behind the commitment
};

// Revealed by a user contesting the server: the own tuples of a session and
// the combined Paillier randomness of the committed product.
struct Opening {
  std::string user_id;
  std::string sid;
  std::vector<LocationTuple> tuples;
  BigInt randomness;

  Bytes Encode() const;
  static Opening Decode(ByteView bytes);
  bool operator==(const Opening&) const = default;
};

class UserAgent {
 public:
  UserAgent(std::string user_id, std::string region, Group group,
            crypto::Rng rng);

  const std::string& id() const { return user_id_; }
  const std::string& region() const { return region_; }
  const GroupElement& public_key() const { return key_.public_key; }
  SealedEnvelope Seal(MessageType type, const std::string& recipient,
                      Bytes payload);
  const std::optional<std::string>& group_id() const { return group_id_; }
  uint64_t member_index() const;

  // --- Phase 1 ---
  void SetPin(Bytes pin) { pin_ = std::move(pin); }
  void SetSerial(Bytes serial) { serial_ = std::move(serial); }
  RegisterKeyRequest MakeRegisterRequest() const;
  // Throws kVerificationFailed.
  void AcceptKeyCert(const KeyCert& cert, const GroupElement& server_public);
  JoinRequest MakeJoinRequest();
  // Throws kVerificationFailed if the cert or roster entry does not match.
  void AcceptJoin(const JoinResponse& response,
                  const GroupElement& authority_public);
  // Adopts a newer roster for the same group.
  void UpdateGroupKey(const GroupPublicKey& gpk);

  // --- Phase 2 ---
  LocationRecord Record(const Location& location, int64_t time);
  const std::vector<LocationTuple>& travelled() const { return travelled_; }
  std::vector<LocationTuple> TravelledIn(const toll::TollSession& session) const;

  // --- Phase 3 ---
  TollOutcome ComputeToll(const FeeSet& fee_set,
                          const toll::TollSession& session,
                          const toll::ChargingPolicy& policy,
                          const GroupElement& server_public,
                          const PaillierPublicKey& server_paillier);
  // Throws kVerificationFailed on a bad or mismatched receipt.
  void AcceptReceipt(const Receipt& receipt, const GroupElement& server_public);
  std::optional<Receipt> receipt(const std::string& sid) const;

  // Built from the last ComputeToll for the session.
  Opening MakeOpening(const std::string& sid,
                      const PaillierPublicKey& server_paillier) const;

  UserMisbehaviour& misbehaviour() { return misbehaviour_; }

 private:
  std::string user_id_;
  std::string region_;
  Group group_;
  crypto::Rng rng_;
  crypto::Rng seal_rng_;
  crypto::StdKeyPair key_;
  Bytes pin_;
  Bytes serial_;
  std::optional<KeyCert> key_cert_;
  std::optional<std::pair<crypto::Scalar, GroupElement>> member_key_;
  std::optional<std::string> group_id_;
  std::optional<gs::MemberSecretKey> member_;
  std::optional<GroupPublicKey> gpk_;
  std::vector<LocationTuple> travelled_;
  std::map<std::string, std::vector<LocationTuple>> included_;
  std::map<std::string, Receipt> receipts_;
  std::map<std::string, int64_t> claimed_;
  UserMisbehaviour misbehaviour_;
};

}  // namespace etp::protocol

#endif  // ETP_PROTOCOL_USER_AGENT_H_
