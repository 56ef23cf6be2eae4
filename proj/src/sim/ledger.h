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

#ifndef ETP_SIM_LEDGER_H_
#define ETP_SIM_LEDGER_H_

#include <cstdint>
#include <string>
#include <vector>

#include "protocol/accountability.h"
#include "protocol/toll_server.h"
#include "sim/bus.h"
#include "sim/scenario.h"

namespace etp::sim {

struct UserOutcome {
  std::string user_id;
  std::string group_id;
  uint64_t records = 0;        // accepted by the server
  int64_t claimed_cents = 0;   // plaintext behind the user's commitment
  int64_t real_cents = 0;      // plaintext oracle over accepted records
  int64_t paid_cents = 0;      // receipt + adjustment - refund
  int64_t refunded_cents = 0;
  // "settled", "no commitment", "settlement refused" or "aborted: <reason>".
  std::string status;
  bool accused = false;

  bool operator==(const UserOutcome&) const = default;
};

struct GroupOutcome {
  std::string group_id;
  uint64_t members = 0;  // anonymity-set size
  uint64_t records = 0;
  int64_t expected_cents = 0;
  int64_t paid_cents = 0;
  bool disputed = false;
  bool aborted = false;
  bool balanced = false;
  std::string fee_set_digest;  // SHA-256 of the encoded signed fee set

  bool operator==(const GroupOutcome&) const = default;
};

struct ResolvedUser {
  std::string user_id;
  int64_t real_cents = 0;
  bool committed = true;

  bool operator==(const ResolvedUser&) const = default;
};

struct DisputeRecord {
  std::string group_id;
  int64_t deficit_cents = 0;
  std::string verdict;
  std::vector<ResolvedUser> res;
  std::vector<protocol::Adjustment> adjustments;
  uint64_t bundle_ref = 0;  // index into the evidence store
  uint64_t result_ref = 0;

  bool operator==(const DisputeRecord&) const = default;
};

struct AbortRecord {
  std::string user_id;
  std::string group_id;
  std::string reason;
  std::vector<uint64_t> evidence_refs;

  bool operator==(const AbortRecord&) const = default;
};

struct Accusation {
  uint64_t action_index = 0;
  std::string action;
  std::string attack;
  std::string user;
  std::string expected;
  std::string accused;
  std::vector<uint64_t> evidence_refs;
  bool correct = false;

  bool operator==(const Accusation&) const = default;
};

struct SpotCheckRecord {
  std::string user_id;
  std::string plate;
  int64_t time = 0;
  toll::Location location;
  bool consistent = false;
  uint64_t records_in_window = 0;
  bool has_witness = false;
  double dt_seconds = 0;
  double distance_m = 0;
  double bound_m = 0;  // gamma * dt
  uint64_t evidence_ref = 0;

  bool operator==(const SpotCheckRecord&) const = default;
};

struct SessionLedger {
  uint32_t schema = 1;
  Scenario scenario;
  std::vector<UserOutcome> users;
  std::vector<GroupOutcome> groups;
  std::vector<DisputeRecord> disputes;
  std::vector<AbortRecord> aborts;
  std::vector<protocol::EvidenceItem> evidence;
  std::vector<Accusation> accusations;
  std::vector<SpotCheckRecord> spot_checks;
  MessageCounts messages;
  uint64_t accepted_records = 0;
  uint64_t rejected_records = 0;
  int64_t total_paid_cents = 0;
  int64_t total_fee_cents = 0;
  bool conserved = false;

  const UserOutcome* FindUser(const std::string& id) const;
  const GroupOutcome* FindGroup(const std::string& id) const;
  bool operator==(const SessionLedger&) const = default;
};

}  // namespace etp::sim

#endif  // ETP_SIM_LEDGER_H_
