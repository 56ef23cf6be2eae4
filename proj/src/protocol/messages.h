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

#ifndef ETP_PROTOCOL_MESSAGES_H_
#define ETP_PROTOCOL_MESSAGES_H_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "common/bytes.h"
#include "crypto/group.h"
#include "crypto/hash.h"
#include "crypto/paillier.h"
#include "crypto/schnorr.h"
#include "gs/group_signature.h"
#include "toll/fee.h"
#include "toll/location.h"

// Protocol messages exchanged between users, the toll server and the
// authority. Every struct has a canonical Encode()/Decode() pair built on
// crypto::Encoder; the *Message() helpers return the exact bytes a principal
// signs.
namespace etp::protocol {

using crypto::BigInt;
using crypto::Digest;
using crypto::Group;
using crypto::GroupElement;
using crypto::PaillierCiphertext;
using crypto::PaillierPublicKey;
using crypto::StdSignature;
using gs::GroupPublicKey;
using gs::GroupSignature;
using toll::FeeTuple;
using toll::Location;
using toll::LocationTuple;

inline constexpr size_t kSecretSize = 16;  // pins and OBU serials

inline constexpr std::string_view kVerdictCheckOfTFailed = "check of T failed";
inline constexpr std::string_view kVerdictFakedLocationSignatures =
    "Faked location signatures";

enum class MessageType : uint8_t {
  kRegisterKey = 1,
  kKeyCert = 2,
  kJoinRequest = 3,
  kJoinResponse = 4,
  kGroupAnnouncement = 5,
  kLocationRecord = 6,
  kFeeSet = 7,
  kPaymentCommitment = 8,
  kReceipt = 9,
  kDisputeBundle = 10,
  kDisputeResult = 11,
};

const char* MessageTypeName(MessageType type);

// Phase 1: {pk(c), Sig_c(pin || pk(c))}.
struct RegisterKeyRequest {
  std::string user_id;
  GroupElement user_public;
  StdSignature pin_sig;

  Bytes Encode() const;
  static RegisterKeyRequest Decode(ByteView bytes);
  bool operator==(const RegisterKeyRequest&) const = default;
};
Bytes RegisterPinMessage(ByteView pin, const GroupElement& user_public);

// Sig_S(pk(c)) for a registered user.
struct KeyCert {
  std::string user_id;
  GroupElement user_public;
  StdSignature server_sig;

  Bytes Encode() const;
  static KeyCert Decode(ByteView bytes);
  bool operator==(const KeyCert&) const = default;
};
Bytes KeyCertMessage(const std::string& user_id, const GroupElement& user_public);

struct JoinRequest {
  KeyCert key_cert;
  Bytes serial;
  GroupElement member_public;
  std::string region;

  Bytes Encode() const;
  static JoinRequest Decode(ByteView bytes);
  bool operator==(const JoinRequest&) const = default;
};

struct JoinResponse {
  std::string group_id;
  uint64_t member_index = 0;
  StdSignature cert;
  GroupPublicKey gpk;

  Bytes Encode() const;
  static JoinResponse Decode(ByteView bytes);
  bool operator==(const JoinResponse&) const = default;
};

// Public group information: the group key and which users belong to it.
struct GroupAnnouncement {
  GroupPublicKey gpk;
  std::vector<std::string> members;

  Bytes Encode() const;
  static GroupAnnouncement Decode(ByteView bytes);
  bool operator==(const GroupAnnouncement&) const = default;
};

// Driving phase: (<l, t, G>, Gs_c(h(l, t))). Carries no sender identity.
struct LocationRecord {
  LocationTuple tuple;
  GroupSignature signature;

  Bytes Encode() const;
  static LocationRecord Decode(ByteView bytes);
  bool operator==(const LocationRecord&) const = default;
};

// (L', Sig_S(L', sid)) for one group.
struct FeeSet {
  std::string group_id;
  std::string sid;
  std::vector<FeeTuple> tuples;
  StdSignature server_sig;

  const FeeTuple* Find(const Digest& loc_hash) const;
  Bytes Encode() const;
  static FeeSet Decode(ByteView bytes);
  bool operator==(const FeeSet&) const = default;
};
Bytes FeeSetMessage(const std::string& group_id, const std::string& sid,
                    const std::vector<FeeTuple>& tuples);

// toll_c with Sig_c(toll_c, Sig_S(L', sid)).
struct PaymentCommitment {
  std::string user_id;
  std::string sid;
  PaillierCiphertext toll;
  StdSignature fee_set_sig;
  StdSignature binding_sig;

  Bytes Encode() const;
  static PaymentCommitment Decode(ByteView bytes);
  bool operator==(const PaymentCommitment&) const = default;
};
Bytes BindingMessage(const PaillierCiphertext& toll,
                     const StdSignature& fee_set_sig);

struct Receipt {
  std::string sid;
  std::string user_id;
  int64_t cost_cents = 0;
  StdSignature server_sig;

  Bytes Encode() const;
  static Receipt Decode(ByteView bytes);
  bool operator==(const Receipt&) const = default;
};
Bytes ReceiptMessage(const std::string& sid, const std::string& user_id,
                     int64_t cost_cents);

struct StoredRecordEntry {
  Digest loc_hash;
  PaillierCiphertext enc_fee;
  GroupSignature signature;

  bool operator==(const StoredRecordEntry&) const = default;
};

struct CommittedPaymentEntry {
  std::string user_id;
  PaillierCiphertext toll;
  StdSignature binding_sig;

  bool operator==(const CommittedPaymentEntry&) const = default;
};

// The server's S and T sets, signed so the bundle is attributable.
struct DisputeBundle {
  std::string group_id;
  std::string sid;
  std::vector<StoredRecordEntry> set_s;
  std::vector<CommittedPaymentEntry> set_t;
  StdSignature fee_set_sig;
  StdSignature server_sig;

  // Everything except server_sig.
  Bytes SignedPart() const;
  Bytes Encode() const;
  static DisputeBundle Decode(ByteView bytes);
  bool operator==(const DisputeBundle&) const = default;
};

enum class Verdict : uint8_t {
  kResolved = 0,
  kCheckOfTFailed = 1,
  kFakedLocationSignatures = 2,
};

// "resolved" or one of the two bit-exact failure strings.
std::string_view VerdictText(Verdict verdict);

struct AccusedUser {
  std::string user_id;
  PaillierCiphertext real_toll;
  // False when the user appears in openings but never committed.
  bool committed = true;

  bool operator==(const AccusedUser&) const = default;
};

struct DisputeResult {
  std::string group_id;
  std::string sid;
  Verdict verdict = Verdict::kResolved;
  std::vector<AccusedUser> res;
  StdSignature authority_sig;

  const AccusedUser* Find(const std::string& user_id) const;
  Bytes SignedPart() const;
  Bytes Encode() const;
  static DisputeResult Decode(ByteView bytes);
  bool operator==(const DisputeResult&) const = default;
};

Bytes EncodeGroupPublicKey(const GroupPublicKey& gpk);
GroupPublicKey DecodeGroupPublicKey(ByteView bytes);
Bytes EncodeLocationTuple(const LocationTuple& tuple);
LocationTuple DecodeLocationTuple(ByteView bytes);

}  // namespace etp::protocol

#endif  // ETP_PROTOCOL_MESSAGES_H_
