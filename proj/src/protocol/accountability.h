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

#ifndef ETP_PROTOCOL_ACCOUNTABILITY_H_
#define ETP_PROTOCOL_ACCOUNTABILITY_H_

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "common/bytes.h"
#include "crypto/group.h"
#include "crypto/paillier.h"
#include "gs/group_signature.h"
#include "protocol/messages.h"
#include "protocol/spot_check.h"
#include "toll/policy.h"

// Third-party judgement over collected evidence. Every item is verified
// against public keys before it is used; unverifiable items are ignored.
namespace etp::protocol {

enum class EvidenceKind : uint8_t {
  kPaymentCommitment = 1,  // user-signed claimed toll
  kReceipt = 2,
  kFeeSet = 3,
  kDisputeResult = 4,
  kDisputeBundle = 5,
  kOpening = 6,
  kObservation = 7,
  kLocationLog = 8,
};

const char* EvidenceKindName(EvidenceKind kind);
// Throws Error(kMalformed).
EvidenceKind ParseEvidenceKind(std::string_view name);

struct EvidenceItem {
  EvidenceKind kind = EvidenceKind::kReceipt;
  std::string holder;
  Bytes payload;

  bool operator==(const EvidenceItem&) const = default;
};

enum class AttackKind : uint8_t {
  kUserUnderpay = 1,           // beta1
  kUserNoCommit = 2,           // beta2
  kServerWrongFee = 3,         // beta3
  kServerForgeLocation = 4,    // beta4
  kServerUnderreportPayment = 5,  // beta5
  kObuManipulation = 6,
};

const char* AttackKindName(AttackKind kind);
AttackKind ParseAttackKind(std::string_view name);

struct Attack {
  AttackKind kind = AttackKind::kUserUnderpay;
  std::string user_id;  // the user concerned; empty means any
  std::string sid;
};

struct Principal {
  enum class Role : uint8_t { kInconclusive, kUser, kServer, kAuthority };
  Role role = Role::kInconclusive;
  std::string id;

  static Principal Inconclusive() { return {}; }
  static Principal User(std::string id) { return {Role::kUser, std::move(id)}; }
  static Principal Server() { return {Role::kServer, "server"}; }

  // "user:<id>", "server", "authority" or "inconclusive".
  std::string ToString() const;
  static Principal Parse(std::string_view text);
  bool operator==(const Principal&) const = default;
};

struct PublicDirectory {
  Group group;
  GroupElement server_public;
  PaillierPublicKey server_paillier;
  GroupElement authority_public;
  toll::ChargingPolicy policy;
  SpotCheckParams spot_check;
  std::map<std::string, GroupElement> user_publics;
  std::map<std::string, std::string> user_groups;
  std::map<std::string, gs::GroupPublicKey> group_keys;
  std::map<std::string, std::string> plate_owners;
};

struct Finding {
  Principal accused;
  std::vector<size_t> evidence;  // indices of the items relied on
};

Finding FindWithEvidence(std::span<const EvidenceItem> evidence,
                         const Attack& attack, const PublicDirectory& directory);

Principal Find(std::span<const EvidenceItem> evidence, const Attack& attack,
               const PublicDirectory& directory);

}  // namespace etp::protocol

#endif  // ETP_PROTOCOL_ACCOUNTABILITY_H_
