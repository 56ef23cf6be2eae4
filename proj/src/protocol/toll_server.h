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

#ifndef ETP_PROTOCOL_TOLL_SERVER_H_
#define ETP_PROTOCOL_TOLL_SERVER_H_

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "crypto/group.h"
#include "crypto/paillier.h"
#include "crypto/rng.h"
#include "crypto/schnorr.h"
#include "protocol/envelope.h"
#include "protocol/messages.h"
#include "protocol/spot_check.h"
#include "toll/policy.h"

namespace etp::protocol {

// Scripted deviations from the honest server.
struct ServerMisbehaviour {
  std::map<Digest, int64_t> fee_delta;       // added to the policy fee
  std::set<Digest> drop_from_fee_set;        // omitted from L'
  std::set<std::string> omit_payments;       // paid but left out of T
  std::set<std::string> tamper_commitments;  // toll altered inside T
};

enum class IngestStatus {
  kAccepted,
  kUnknownGroup,
  kBadSignature,
  kOutsideSession,
  kDuplicate,
};

const char* IngestStatusName(IngestStatus status);

struct BalanceReport {
  int64_t expected_cents = 0;  // policy fees over stored tuples
  int64_t paid_cents = 0;      // receipts plus finalized adjustments
  size_t record_count = 0;
  size_t commitment_count = 0;

  bool balanced() const { return expected_cents == paid_cents; }
  int64_t deficit_cents() const { return expected_cents - paid_cents; }
};

struct Adjustment {
  std::string user_id;
  int64_t claimed_cents = 0;
  int64_t real_cents = 0;
  int64_t unpaid_cents = 0;

  bool operator==(const Adjustment&) const = default;
};

// The server's signed copy of the location tuples it holds for a group.
struct LocationLog {
  std::string group_id;
  std::string sid;
  std::vector<LocationTuple> tuples;
  StdSignature server_sig;

  Bytes SignedPart() const;
  Bytes Encode() const;
  static LocationLog Decode(ByteView bytes);
};

// A roadside observation attested by the operator.
struct SignedObservation {
  Observation observation;
  StdSignature server_sig;

  Bytes SignedPart() const;
  Bytes Encode() const;
  static SignedObservation Decode(ByteView bytes);
};

class TollServer {
 public:
  TollServer(Group group, crypto::Rng rng, unsigned paillier_bits,
             crypto::SecurityMode mode, toll::ChargingPolicy policy,
             GroupElement authority_public);

  static constexpr std::string_view kName = "server";

  const GroupElement& public_key() const { return key_.public_key; }
  SealedEnvelope Seal(MessageType type, const std::string& recipient,
                      Bytes payload);
  const PaillierPublicKey& paillier_public() const {
    return paillier_.public_key;
  }
  // Server-side only; used for settlement and by audit oracles.
  const crypto::PaillierSecretKey& paillier_secret() const {
    return paillier_.secret_key;
  }
  const toll::ChargingPolicy& policy() const { return policy_; }

  // --- Phase 1 ---
  // Throws kDuplicate when the user is already enrolled.
  Bytes Enroll(const std::string& user_id);
  // Throws kNotFound, kVerificationFailed or kDuplicate.
  KeyCert RegisterKey(const RegisterKeyRequest& request);
  // Verifies every roster cert under the authority key. Later announcements
  // for a group must extend the roster.
  void AcceptGroup(const GroupAnnouncement& announcement);
  std::optional<std::string> GroupOfUser(const std::string& user_id) const;
  std::optional<GroupElement> UserPublic(const std::string& user_id) const;

  // --- Phase 2 ---
  void OpenSession(const toll::TollSession& session);
  IngestStatus Ingest(const LocationRecord& record);
  // Stores a record without verification (forgery hook).
  void InjectRecord(const LocationRecord& record);
  size_t rejected_count() const { return rejected_; }

  // --- Phase 3 ---
  const FeeSet& PublishFees(const std::string& group_id, const std::string& sid);
  const FeeSet* PublishedFees(const std::string& group_id,
                              const std::string& sid) const;
  // Throws kVerificationFailed (bad binding), kNotFound, kDuplicate.
  Receipt Settle(const PaymentCommitment& commitment);
  size_t refused_settlements() const { return refused_; }

  // --- Phase 4 ---
  BalanceReport CheckBalance(const std::string& group_id,
                             const std::string& sid) const;
  DisputeBundle BuildDispute(const std::string& group_id,
                             const std::string& sid);
  // Throws kVerificationFailed on a bad authority signature. Failure
  // verdicts produce no adjustments.
  std::vector<Adjustment> FinalizeDispute(const DisputeResult& result);

  // --- evidence and spot checks ---
  LocationLog ExportLocationLog(const std::string& group_id,
                                const std::string& sid);
  SignedObservation AttestObservation(const Observation& observation);
  std::vector<LocationTuple> StoredTuples(const std::string& group_id,
                                          const std::string& sid) const;
  const std::vector<LocationRecord>& StoredRecords(
      const std::string& group_id, const std::string& sid) const;
  std::optional<Receipt> ReceiptFor(const std::string& sid,
                                    const std::string& user_id) const;
  std::vector<std::string> GroupIds() const;
  const toll::TollSession& session(const std::string& sid) const;

  ServerMisbehaviour& misbehaviour() { return misbehaviour_; }

 private:
  using Key = std::pair<std::string, std::string>;  // (group_id, sid)

  struct Settlement {
    PaymentCommitment commitment;
    Receipt receipt;
  };

  struct Bucket {
    std::vector<LocationRecord> records;
    std::set<Digest> hashes;
    std::optional<FeeSet> fee_set;
    std::map<std::string, Settlement> settlements;
    std::map<std::string, int64_t> adjustments;
  };

  int64_t FeeOf(const LocationTuple& tuple) const;
  PaillierCiphertext EncFeeOf(const std::string& sid, const Digest& hash,
                              int64_t fee) const;
  Bucket& BucketFor(const std::string& group_id, const std::string& sid);
  const Bucket* FindBucket(const std::string& group_id,
                           const std::string& sid) const;

  Group group_;
  crypto::Rng rng_;
  crypto::Rng seal_rng_;
  crypto::StdKeyPair key_;
  crypto::PaillierKeyPair paillier_;
  toll::ChargingPolicy policy_;
  GroupElement authority_public_;

  std::map<std::string, Bytes> pins_;
  std::set<Bytes> pin_values_;
  std::map<std::string, GroupElement> registered_;
  std::map<std::string, GroupAnnouncement> groups_;
  std::map<std::string, std::string> user_group_;
  std::map<std::string, toll::TollSession> sessions_;
  std::map<Key, Bucket> buckets_;
  size_t rejected_ = 0;
  size_t refused_ = 0;
  ServerMisbehaviour misbehaviour_;
};

}  // namespace etp::protocol

#endif  // ETP_PROTOCOL_TOLL_SERVER_H_
