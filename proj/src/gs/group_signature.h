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

#ifndef ETP_GS_GROUP_SIGNATURE_H_
#define ETP_GS_GROUP_SIGNATURE_H_

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "common/bytes.h"
#include "crypto/group.h"
#include "crypto/rng.h"
#include "crypto/schnorr.h"

// Group signatures built from an ElGamal escrow of the signer's member key
// and a 1-of-n OR proof (Fiat-Shamir) over the roster. Each clause j proves
// knowledge of (r, s) with
//   T1 = g^r,  T2 / h_j = y^r,  h_j = g^s
// so a valid signature encrypts some roster key under the manager's escrow
// key and its signer knows that key's discrete log. Signatures grow linearly
// with the roster.
namespace etp::gs {

using crypto::Group;
using crypto::GroupElement;
using crypto::Rng;
using crypto::Scalar;
using crypto::StdKeyPair;
using crypto::StdSignature;

struct RosterEntry {
  uint64_t member_index = 0;
  GroupElement member_public;
  StdSignature cert;

  bool operator==(const RosterEntry&) const = default;
};

// The roster is append-only, so the snapshot at version v is its first v
// entries and older signatures stay verifiable after later joins.
struct GroupPublicKey {
  std::string group_id;
  GroupElement escrow_public;
  GroupElement manager_public;
  std::vector<RosterEntry> roster;

  uint64_t roster_version() const { return roster.size(); }
  // Throws Error(kUnknownRosterVersion) past the current version.
  std::span<const RosterEntry> Snapshot(uint64_t version) const;

  bool operator==(const GroupPublicKey&) const = default;
};

struct GroupManagerKey {
  std::string group_id;
  Scalar escrow_secret;
  StdKeyPair cert_key;
};

struct MemberSecretKey {
  Scalar secret;
  uint64_t member_index = 0;
  std::string group_id;
};

struct ClauseTranscript {
  Scalar challenge;
  Scalar response_r;
  Scalar response_s;

  bool operator==(const ClauseTranscript&) const = default;
};

struct GroupSignature {
  std::string group_id;
  uint64_t roster_version = 0;
  GroupElement escrow_t1;
  GroupElement escrow_t2;
  std::vector<ClauseTranscript> clauses;

  bool operator==(const GroupSignature&) const = default;

  // Field order: group_id, roster_version, T1, T2, then (c, z_r, z_s) per
  // roster index.
  Bytes Encode() const;
  // Throws Error(kMalformed).
  static GroupSignature Decode(ByteView bytes);
};

enum class VerifyStatus { kValid, kInvalid, kUnknownRosterVersion };

std::pair<GroupPublicKey, GroupManagerKey> GsSetup(
    const Group& group, const std::string& group_id,
    const StdKeyPair& manager_signing_key, Rng& rng);

// Member-side key generation; only the public half is sent to Join.
std::pair<Scalar, GroupElement> GsMemberKeygen(const Group& group, Rng& rng);

// Bytes certified by the manager for a roster entry.
Bytes RosterCertMessage(const std::string& group_id, uint64_t member_index,
                        const GroupElement& member_public);

// Appends the member to gpk and returns the new entry. Throws kDuplicate if
// the key is already enrolled and kInvalidArgument if it is not a subgroup
// element. The manager cert is deterministic in its inputs.
RosterEntry GsJoin(const Group& group, const GroupManagerKey& manager,
                   GroupPublicKey& gpk, const GroupElement& member_public);

// Every cert verifies and member keys are distinct.
bool GsRosterValid(const Group& group, const GroupPublicKey& gpk);

GroupSignature GsSign(const Group& group, const GroupPublicKey& gpk,
                      const MemberSecretKey& member, ByteView message,
                      Rng& rng);

VerifyStatus GsCheck(const Group& group, const GroupPublicKey& gpk,
                     ByteView message, const GroupSignature& sig);

inline bool GsVerify(const Group& group, const GroupPublicKey& gpk,
                     ByteView message, const GroupSignature& sig) {
  return GsCheck(group, gpk, message, sig) == VerifyStatus::kValid;
}

// Recovers the signer's roster index. Callers verify first. Throws
// Error(kUntraceable) when the escrowed key is not in the roster snapshot.
uint64_t GsOpen(const Group& group, const GroupManagerKey& manager,
                const GroupPublicKey& gpk, const GroupSignature& sig);

}  // namespace etp::gs

#endif  // ETP_GS_GROUP_SIGNATURE_H_
