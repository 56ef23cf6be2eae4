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

#include "gs/group_signature.h"

#include <set>

#include "common/error.h"
#include "crypto/encoding.h"

namespace etp::gs {

using crypto::Decoder;
using crypto::Encoder;

namespace {

struct Commitments {
  GroupElement a1;
  GroupElement a2;
  GroupElement a3;
};

Bytes SignaturePrefix(const std::string& group_id, uint64_t roster_version,
                      const GroupElement& t1, const GroupElement& t2) {
  return Encoder()
      .Str(group_id)
      .U64(roster_version)
      .Int(t1.value)
      .Int(t2.value)
      .Take();
}

Scalar FiatShamir(const Group& group, const GroupPublicKey& gpk,
                  const GroupSignature& sig, ByteView message,
                  const std::vector<Commitments>& commitments) {
  Encoder e;
  e.Raw(SignaturePrefix(sig.group_id, sig.roster_version, sig.escrow_t1,
                        sig.escrow_t2));
  e.Str("etp/gs/fiat-shamir").Int(gpk.escrow_public.value).Raw(message);
  for (const Commitments& c : commitments) {
    e.Int(c.a1.value).Int(c.a2.value).Int(c.a3.value);
  }
  return group.HashToScalar(e.bytes());
}

// Commitments reconstructed from a clause transcript:
//   A1 = g^z_r T1^-c,  A2 = y^z_r (T2/h)^-c,  A3 = g^z_s h^-c
Commitments Reconstruct(const Group& group, const GroupPublicKey& gpk,
                        const GroupSignature& sig,
                        const GroupElement& member_public,
                        const ClauseTranscript& clause) {
  Scalar minus_c = group.NegScalar(clause.challenge);
  GroupElement t2_over_h = group.Div(sig.escrow_t2, member_public);
  return {
      group.MultiExp(group.generator(), clause.response_r, sig.escrow_t1,
                     minus_c),
      group.MultiExp(gpk.escrow_public, clause.response_r, t2_over_h, minus_c),
      group.MultiExp(group.generator(), clause.response_s, member_public,
                     minus_c),
  };
}

}  // namespace

std::span<const RosterEntry> GroupPublicKey::Snapshot(uint64_t version) const {
  ETP_ENFORCE(version <= roster.size(), ErrorCode::kUnknownRosterVersion,
              "roster version " + std::to_string(version) +
                  " unknown for group " + group_id);
  return std::span<const RosterEntry>(roster.data(), version);
}

Bytes GroupSignature::Encode() const {
  Encoder e;
  e.Str(group_id).U64(roster_version).Int(escrow_t1.value).Int(escrow_t2.value);
  for (const ClauseTranscript& c : clauses) {
    e.Int(c.challenge.value).Int(c.response_r.value).Int(c.response_s.value);
  }
  return e.Take();
}

GroupSignature GroupSignature::Decode(ByteView bytes) {
  Decoder d(bytes);
  GroupSignature sig;
  sig.group_id = d.Str();
  sig.roster_version = d.U64();
  sig.escrow_t1.value = d.Int();
  sig.escrow_t2.value = d.Int();
  while (!d.AtEnd()) {
    ClauseTranscript c;
    c.challenge.value = d.Int();
    c.response_r.value = d.Int();
    c.response_s.value = d.Int();
    sig.clauses.push_back(std::move(c));
  }
  return sig;
}

std::pair<GroupPublicKey, GroupManagerKey> GsSetup(
    const Group& group, const std::string& group_id,
    const StdKeyPair& manager_signing_key, Rng& rng) {
  ETP_ENFORCE(!group_id.empty(), ErrorCode::kInvalidArgument,
              "group id must be non-empty");
  GroupManagerKey manager;
  manager.group_id = group_id;
  manager.escrow_secret = group.RandomNonZeroScalar(rng);
  manager.cert_key = manager_signing_key;

  GroupPublicKey gpk;
  gpk.group_id = group_id;
  gpk.escrow_public = group.ExpG(manager.escrow_secret);
  gpk.manager_public = manager_signing_key.public_key;
  return {std::move(gpk), std::move(manager)};
}

std::pair<Scalar, GroupElement> GsMemberKeygen(const Group& group, Rng& rng) {
  Scalar s = group.RandomNonZeroScalar(rng);
  return {s, group.ExpG(s)};
}

Bytes RosterCertMessage(const std::string& group_id, uint64_t member_index,
                        const GroupElement& member_public) {
  return Encoder()
      .Str("etp/gs/roster-cert")
      .Str(group_id)
      .U64(member_index)
      .Int(member_public.value)
      .Take();
}

RosterEntry GsJoin(const Group& group, const GroupManagerKey& manager,
                   GroupPublicKey& gpk, const GroupElement& member_public) {
  ETP_ENFORCE(manager.group_id == gpk.group_id, ErrorCode::kInvalidArgument,
              "manager key belongs to another group");
  ETP_ENFORCE(group.Contains(member_public) && member_public != group.identity(),
              ErrorCode::kInvalidArgument, "member key is not a subgroup element");
  for (const RosterEntry& entry : gpk.roster) {
    ETP_ENFORCE(entry.member_public != member_public, ErrorCode::kDuplicate,
                "member key already enrolled in " + gpk.group_id);
  }
  RosterEntry entry;
  entry.member_index = gpk.roster.size();
  entry.member_public = member_public;
  Bytes msg = RosterCertMessage(gpk.group_id, entry.member_index, member_public);
  Rng cert_rng(msg);
  entry.cert = crypto::StdSign(group, manager.cert_key, msg, cert_rng);
  gpk.roster.push_back(entry);
  return entry;
}

bool GsRosterValid(const Group& group, const GroupPublicKey& gpk) {
  std::set<std::string> seen;
  for (size_t i = 0; i < gpk.roster.size(); ++i) {
    const RosterEntry& e = gpk.roster[i];
    if (e.member_index != i) return false;
    if (!seen.insert(e.member_public.value.get_str(16)).second) return false;
    if (!crypto::StdVerify(group, gpk.manager_public,
                           RosterCertMessage(gpk.group_id, i, e.member_public),
                           e.cert)) {
      return false;
    }
  }
  return true;
}

GroupSignature GsSign(const Group& group, const GroupPublicKey& gpk,
                      const MemberSecretKey& member, ByteView message,
                      Rng& rng) {
  ETP_ENFORCE(member.group_id == gpk.group_id, ErrorCode::kInvalidArgument,
              "member key belongs to another group");
  ETP_ENFORCE(member.member_index < gpk.roster.size(),
              ErrorCode::kInvalidArgument, "member index not in roster");
  const GroupElement& own_public = gpk.roster[member.member_index].member_public;
  ETP_ENFORCE(group.ExpG(member.secret) == own_public,
              ErrorCode::kInvalidArgument,
              "member secret does not match roster entry");

  const size_t n = gpk.roster.size();
  const size_t self = member.member_index;

  GroupSignature sig;
  sig.group_id = gpk.group_id;
  sig.roster_version = n;
  Scalar r = group.RandomNonZeroScalar(rng);
  sig.escrow_t1 = group.ExpG(r);
  sig.escrow_t2 =
      group.Mul(own_public, group.Exp(gpk.escrow_public, r));
  sig.clauses.resize(n);

  std::vector<Commitments> commitments(n);
  Scalar nonce_r = group.RandomScalar(rng);
  Scalar nonce_s = group.RandomScalar(rng);
  Scalar simulated_sum{0};
  for (size_t j = 0; j < n; ++j) {
    if (j == self) {
      commitments[j] = {group.ExpG(nonce_r),
                        group.Exp(gpk.escrow_public, nonce_r),
                        group.ExpG(nonce_s)};
      continue;
    }
    ClauseTranscript& clause = sig.clauses[j];
    clause.challenge = group.RandomScalar(rng);
    clause.response_r = group.RandomScalar(rng);
    clause.response_s = group.RandomScalar(rng);
    commitments[j] =
        Reconstruct(group, gpk, sig, gpk.roster[j].member_public, clause);
    simulated_sum = group.AddScalar(simulated_sum, clause.challenge);
  }

  Scalar challenge = FiatShamir(group, gpk, sig, message, commitments);
  ClauseTranscript& own = sig.clauses[self];
  own.challenge = group.SubScalar(challenge, simulated_sum);
  own.response_r =
      group.AddScalar(nonce_r, group.MulScalar(own.challenge, r));
  own.response_s =
      group.AddScalar(nonce_s, group.MulScalar(own.challenge, member.secret));
  return sig;
}

VerifyStatus GsCheck(const Group& group, const GroupPublicKey& gpk,
                     ByteView message, const GroupSignature& sig) {
  if (sig.group_id != gpk.group_id) return VerifyStatus::kInvalid;
  if (sig.roster_version > gpk.roster_version()) {
    return VerifyStatus::kUnknownRosterVersion;
  }
  if (sig.roster_version == 0 || sig.clauses.size() != sig.roster_version) {
    return VerifyStatus::kInvalid;
  }
  if (!group.Contains(sig.escrow_t1) || !group.Contains(sig.escrow_t2)) {
    return VerifyStatus::kInvalid;
  }
  auto roster = gpk.Snapshot(sig.roster_version);
  std::vector<Commitments> commitments;
  commitments.reserve(roster.size());
  Scalar sum{0};
  for (size_t j = 0; j < roster.size(); ++j) {
    const ClauseTranscript& clause = sig.clauses[j];
    if (!group.IsScalar(clause.challenge) || !group.IsScalar(clause.response_r) ||
        !group.IsScalar(clause.response_s)) {
      return VerifyStatus::kInvalid;
    }
    commitments.push_back(
        Reconstruct(group, gpk, sig, roster[j].member_public, clause));
    sum = group.AddScalar(sum, clause.challenge);
  }
  return FiatShamir(group, gpk, sig, message, commitments) == sum
             ? VerifyStatus::kValid
             : VerifyStatus::kInvalid;
}

uint64_t GsOpen(const Group& group, const GroupManagerKey& manager,
                const GroupPublicKey& gpk, const GroupSignature& sig) {
  ETP_ENFORCE(manager.group_id == gpk.group_id && sig.group_id == gpk.group_id,
              ErrorCode::kInvalidArgument, "group mismatch in open");
  auto roster = gpk.Snapshot(sig.roster_version);
  GroupElement shared = group.Exp(sig.escrow_t1, manager.escrow_secret);
  GroupElement escrowed = group.Div(sig.escrow_t2, shared);
  for (const RosterEntry& entry : roster) {
    if (entry.member_public == escrowed) return entry.member_index;
  }
  throw Error(ErrorCode::kUntraceable,
              "untraceable signature in group " + gpk.group_id);
}

}  // namespace etp::gs
