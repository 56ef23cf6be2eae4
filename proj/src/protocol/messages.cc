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

#include "protocol/messages.h"

#include <utility>

#include "common/error.h"
#include "crypto/encoding.h"

namespace etp::protocol {

using crypto::Decoder;
using crypto::Encoder;

namespace {

void PutSig(Encoder& e, const StdSignature& sig) { e.Raw(sig.Encode()); }
StdSignature GetSig(Decoder& d) { return StdSignature::Decode(d.Raw()); }

GroupElement GetElement(Decoder& d) { return GroupElement{d.Int()}; }

Digest GetDigest(Decoder& d) {
  Bytes raw = d.Raw();
  ETP_ENFORCE(raw.size() == 32, ErrorCode::kMalformed, "digest must be 32 bytes");
  Digest out;
  std::copy(raw.begin(), raw.end(), out.bytes.begin());
  return out;
}

// Counts are bounded by the remaining input so a corrupt length cannot drive
// a huge allocation.
uint64_t GetCount(Decoder& d, ByteView whole) {
  uint64_t n = d.U64();
  ETP_ENFORCE(n <= whole.size(), ErrorCode::kMalformed, "implausible count");
  return n;
}

void PutFeeTuples(Encoder& e, const std::vector<FeeTuple>& tuples) {
  e.U64(tuples.size());
  for (const auto& t : tuples) e.Raw(t.loc_hash.view()).Int(t.enc_fee.value);
}

std::vector<FeeTuple> GetFeeTuples(Decoder& d, ByteView whole) {
  std::vector<FeeTuple> out(GetCount(d, whole));
  for (auto& t : out) {
    t.loc_hash = GetDigest(d);
    t.enc_fee.value = d.Int();
  }
  return out;
}

int64_t GetCents(Decoder& d) {
  uint64_t v = d.U64();
  ETP_ENFORCE(v <= static_cast<uint64_t>(INT64_MAX), ErrorCode::kMalformed,
              "amount out of range");
  return static_cast<int64_t>(v);
}

void PutCents(Encoder& e, int64_t cents) {
  ETP_ENFORCE(cents >= 0, ErrorCode::kInvalidArgument, "negative amount");
  e.U64(static_cast<uint64_t>(cents));
}

}  // namespace

const char* MessageTypeName(MessageType type) {
  switch (type) {
    case MessageType::kRegisterKey: return "register_key";
    case MessageType::kKeyCert: return "key_cert";
    case MessageType::kJoinRequest: return "join_request";
    case MessageType::kJoinResponse: return "join_response";
    case MessageType::kGroupAnnouncement: return "group_announcement";
    case MessageType::kLocationRecord: return "location_record";
    case MessageType::kFeeSet: return "fee_set";
    case MessageType::kPaymentCommitment: return "payment_commitment";
    case MessageType::kReceipt: return "receipt";
    case MessageType::kDisputeBundle: return "dispute_bundle";
    case MessageType::kDisputeResult: return "dispute_result";
  }
  return "unknown";
}

Bytes EncodeGroupPublicKey(const GroupPublicKey& gpk) {
  Encoder e;
  e.Str(gpk.group_id).Int(gpk.escrow_public.value).Int(gpk.manager_public.value);
  e.U64(gpk.roster.size());
  for (const auto& entry : gpk.roster) {
    e.U64(entry.member_index).Int(entry.member_public.value);
    PutSig(e, entry.cert);
  }
  return e.Take();
}

GroupPublicKey DecodeGroupPublicKey(ByteView bytes) {
  Decoder d(bytes);
  GroupPublicKey gpk;
  gpk.group_id = d.Str();
  gpk.escrow_public = GetElement(d);
  gpk.manager_public = GetElement(d);
  gpk.roster.resize(GetCount(d, bytes));
  for (auto& entry : gpk.roster) {
    entry.member_index = d.U64();
    entry.member_public = GetElement(d);
    entry.cert = GetSig(d);
  }
  d.ExpectEnd();
  return gpk;
}

Bytes EncodeLocationTuple(const LocationTuple& tuple) {
  return Encoder()
      .Str(toll::CanonicalLocationText(tuple.location, tuple.time))
      .Str(tuple.group_id)
      .Take();
}

LocationTuple DecodeLocationTuple(ByteView bytes) {
  Decoder d(bytes);
  LocationTuple t;
  auto [loc, time] = toll::ParseCanonicalLocation(d.Str());
  t.location = loc;
  t.time = time;
  t.group_id = d.Str();
  d.ExpectEnd();
  return t;
}

// --- registration ---

Bytes RegisterPinMessage(ByteView pin, const GroupElement& user_public) {
  return Encoder().Str("etp/register").Raw(pin).Int(user_public.value).Take();
}

Bytes RegisterKeyRequest::Encode() const {
  Encoder e;
  e.Str(user_id).Int(user_public.value);
  PutSig(e, pin_sig);
  return e.Take();
}

RegisterKeyRequest RegisterKeyRequest::Decode(ByteView bytes) {
  Decoder d(bytes);
  RegisterKeyRequest m;
  m.user_id = d.Str();
  m.user_public = GetElement(d);
  m.pin_sig = GetSig(d);
  d.ExpectEnd();
  return m;
}

Bytes KeyCertMessage(const std::string& user_id, const GroupElement& user_public) {
  return Encoder().Str("etp/key-cert").Str(user_id).Int(user_public.value).Take();
}

Bytes KeyCert::Encode() const {
  Encoder e;
  e.Str(user_id).Int(user_public.value);
  PutSig(e, server_sig);
  return e.Take();
}

KeyCert KeyCert::Decode(ByteView bytes) {
  Decoder d(bytes);
  KeyCert m;
  m.user_id = d.Str();
  m.user_public = GetElement(d);
  m.server_sig = GetSig(d);
  d.ExpectEnd();
  return m;
}

// --- join ---

Bytes JoinRequest::Encode() const {
  return Encoder()
      .Raw(key_cert.Encode())
      .Raw(serial)
      .Int(member_public.value)
      .Str(region)
      .Take();
}

JoinRequest JoinRequest::Decode(ByteView bytes) {
  Decoder d(bytes);
  JoinRequest m;
  m.key_cert = KeyCert::Decode(d.Raw());
  m.serial = d.Raw();
  m.member_public = GetElement(d);
  m.region = d.Str();
  d.ExpectEnd();
  return m;
}

Bytes JoinResponse::Encode() const {
  Encoder e;
  e.Str(group_id).U64(member_index);
  PutSig(e, cert);
  e.Raw(EncodeGroupPublicKey(gpk));
  return e.Take();
}

JoinResponse JoinResponse::Decode(ByteView bytes) {
  Decoder d(bytes);
  JoinResponse m;
  m.group_id = d.Str();
  m.member_index = d.U64();
  m.cert = GetSig(d);
  m.gpk = DecodeGroupPublicKey(d.Raw());
  d.ExpectEnd();
  return m;
}

Bytes GroupAnnouncement::Encode() const {
  Encoder e;
  e.Raw(EncodeGroupPublicKey(gpk)).U64(members.size());
  for (const auto& m : members) e.Str(m);
  return e.Take();
}

GroupAnnouncement GroupAnnouncement::Decode(ByteView bytes) {
  Decoder d(bytes);
  GroupAnnouncement m;
  m.gpk = DecodeGroupPublicKey(d.Raw());
  m.members.resize(GetCount(d, bytes));
  for (auto& id : m.members) id = d.Str();
  d.ExpectEnd();
  return m;
}

// --- driving ---

Bytes LocationRecord::Encode() const {
  return Encoder().Raw(EncodeLocationTuple(tuple)).Raw(signature.Encode()).Take();
}

LocationRecord LocationRecord::Decode(ByteView bytes) {
  Decoder d(bytes);
  LocationRecord m;
  m.tuple = DecodeLocationTuple(d.Raw());
  m.signature = GroupSignature::Decode(d.Raw());
  d.ExpectEnd();
  return m;
}

// --- toll calculation ---

const FeeTuple* FeeSet::Find(const Digest& loc_hash) const {
  for (const auto& t : tuples) {
    if (t.loc_hash == loc_hash) return &t;
  }
  return nullptr;
}

Bytes FeeSetMessage(const std::string& group_id, const std::string& sid,
                    const std::vector<FeeTuple>& tuples) {
  Encoder e;
  e.Str("etp/fee-set").Str(group_id).Str(sid);
  PutFeeTuples(e, tuples);
  return e.Take();
}

Bytes FeeSet::Encode() const {
  Encoder e;
  e.Str(group_id).Str(sid);
  PutFeeTuples(e, tuples);
  PutSig(e, server_sig);
  return e.Take();
}

FeeSet FeeSet::Decode(ByteView bytes) {
  Decoder d(bytes);
  FeeSet m;
  m.group_id = d.Str();
  m.sid = d.Str();
  m.tuples = GetFeeTuples(d, bytes);
  m.server_sig = GetSig(d);
  d.ExpectEnd();
  return m;
}

Bytes BindingMessage(const PaillierCiphertext& toll,
                     const StdSignature& fee_set_sig) {
  return Encoder()
      .Str("etp/toll-commitment")
      .Int(toll.value)
      .Raw(fee_set_sig.Encode())
      .Take();
}

Bytes PaymentCommitment::Encode() const {
  Encoder e;
  e.Str(user_id).Str(sid).Int(toll.value);
  PutSig(e, fee_set_sig);
  PutSig(e, binding_sig);
  return e.Take();
}

PaymentCommitment PaymentCommitment::Decode(ByteView bytes) {
  Decoder d(bytes);
  PaymentCommitment m;
  m.user_id = d.Str();
  m.sid = d.Str();
  m.toll.value = d.Int();
  m.fee_set_sig = GetSig(d);
  m.binding_sig = GetSig(d);
  d.ExpectEnd();
  return m;
}

Bytes ReceiptMessage(const std::string& sid, const std::string& user_id,
                     int64_t cost_cents) {
  Encoder e;
  e.Str("etp/receipt").Str(sid).Str(user_id);
  PutCents(e, cost_cents);
  return e.Take();
}

Bytes Receipt::Encode() const {
  Encoder e;
  e.Str(sid).Str(user_id);
  PutCents(e, cost_cents);
  PutSig(e, server_sig);
  return e.Take();
}

Receipt Receipt::Decode(ByteView bytes) {
  Decoder d(bytes);
  Receipt m;
  m.sid = d.Str();
  m.user_id = d.Str();
  m.cost_cents = GetCents(d);
  m.server_sig = GetSig(d);
  d.ExpectEnd();
  return m;
}

// --- dispute ---

Bytes DisputeBundle::SignedPart() const {
  Encoder e;
  e.Str("etp/dispute-bundle").Str(group_id).Str(sid);
  e.U64(set_s.size());
  for (const auto& s : set_s) {
    e.Raw(s.loc_hash.view()).Int(s.enc_fee.value).Raw(s.signature.Encode());
  }
  e.U64(set_t.size());
  for (const auto& t : set_t) {
    e.Str(t.user_id).Int(t.toll.value);
    PutSig(e, t.binding_sig);
  }
  PutSig(e, fee_set_sig);
  return e.Take();
}

Bytes DisputeBundle::Encode() const {
  Encoder e;
  e.Raw(SignedPart());
  PutSig(e, server_sig);
  return e.Take();
}

DisputeBundle DisputeBundle::Decode(ByteView bytes) {
  Decoder outer(bytes);
  Bytes signed_part = outer.Raw();
  DisputeBundle m;
  m.server_sig = GetSig(outer);
  outer.ExpectEnd();

  Decoder d(signed_part);
  ETP_ENFORCE(d.Str() == "etp/dispute-bundle", ErrorCode::kMalformed,
              "not a dispute bundle");
  m.group_id = d.Str();
  m.sid = d.Str();
  m.set_s.resize(GetCount(d, signed_part));
  for (auto& s : m.set_s) {
    s.loc_hash = GetDigest(d);
    s.enc_fee.value = d.Int();
    s.signature = GroupSignature::Decode(d.Raw());
  }
  m.set_t.resize(GetCount(d, signed_part));
  for (auto& t : m.set_t) {
    t.user_id = d.Str();
    t.toll.value = d.Int();
    t.binding_sig = GetSig(d);
  }
  m.fee_set_sig = GetSig(d);
  d.ExpectEnd();
  return m;
}

std::string_view VerdictText(Verdict verdict) {
  switch (verdict) {
    case Verdict::kResolved: return "resolved";
    case Verdict::kCheckOfTFailed: return kVerdictCheckOfTFailed;
    case Verdict::kFakedLocationSignatures: return kVerdictFakedLocationSignatures;
  }
  return "unknown";
}

const AccusedUser* DisputeResult::Find(const std::string& user_id) const {
  for (const auto& a : res) {
    if (a.user_id == user_id) return &a;
  }
  return nullptr;
}

Bytes DisputeResult::SignedPart() const {
  Encoder e;
  e.Str("etp/dispute-result").Str(group_id).Str(sid).U64(static_cast<uint8_t>(verdict));
  e.U64(res.size());
  for (const auto& a : res) {
    e.Str(a.user_id).Int(a.real_toll.value).U64(a.committed ? 1 : 0);
  }
  return e.Take();
}

Bytes DisputeResult::Encode() const {
  Encoder e;
  e.Raw(SignedPart());
  PutSig(e, authority_sig);
  return e.Take();
}

DisputeResult DisputeResult::Decode(ByteView bytes) {
  Decoder outer(bytes);
  Bytes signed_part = outer.Raw();
  DisputeResult m;
  m.authority_sig = GetSig(outer);
  outer.ExpectEnd();

  Decoder d(signed_part);
  ETP_ENFORCE(d.Str() == "etp/dispute-result", ErrorCode::kMalformed,
              "not a dispute result");
  m.group_id = d.Str();
  m.sid = d.Str();
  uint64_t verdict = d.U64();
  ETP_ENFORCE(verdict <= 2, ErrorCode::kMalformed, "unknown verdict");
  m.verdict = static_cast<Verdict>(verdict);
  m.res.resize(GetCount(d, signed_part));
  for (auto& a : m.res) {
    a.user_id = d.Str();
    a.real_toll.value = d.Int();
    uint64_t committed = d.U64();
    ETP_ENFORCE(committed <= 1, ErrorCode::kMalformed, "bad flag");
    a.committed = committed == 1;
  }
  d.ExpectEnd();
  return m;
}

}  // namespace etp::protocol
