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

#ifndef ETP_SIM_HARNESS_H_
#define ETP_SIM_HARNESS_H_

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "protocol/authority.h"
#include "protocol/messages.h"
#include "protocol/toll_server.h"
#include "protocol/user_agent.h"
#include "sim/bus.h"
#include "sim/ledger.h"
#include "sim/scenario.h"
#include "sim/unlinkability.h"

namespace etp::sim {

// Principals after Phase 1. Construction is a pure function of the
// scenario, so replays rebuild identical keys and rosters.
class World {
 public:
  explicit World(const Scenario& scenario);

  // Enrolment, key registration, group joins and group announcements.
  void Setup(Bus& bus);

  protocol::PublicDirectory Directory() const;
  protocol::UserAgent& user(const std::string& id) { return *users_.at(id); }
  std::vector<std::string> MembersOf(const std::string& group_id) const;

  const Scenario& scenario() const { return scenario_; }
  const protocol::Group& group() const { return group_; }
  protocol::Authority& authority() { return authority_; }
  protocol::TollServer& server() { return server_; }

 private:
  Scenario scenario_;
  protocol::Group group_;
  protocol::Authority authority_;
  protocol::TollServer server_;
  std::map<std::string, std::unique_ptr<protocol::UserAgent>> users_;
};

// Two users exchange their index-th trace points.
struct TupleSwap {
  std::string user_a;
  std::string user_b;
  size_t index = 0;
};

struct RunOptions {
  std::optional<TupleSwap> swap;
};

struct RunResult {
  SessionLedger ledger;
  ServerView view;
  // group -> records as stored by the server, in storage order.
  std::map<std::string, std::vector<protocol::LocationRecord>> stored;
  // "<group>/<canonical location>" -> true signer, for record-level checks.
  std::map<std::string, std::string> signer_of;
  Identifiers identifiers;
  // Canonical texts of the swapped tuples, when a swap was applied.
  std::vector<std::string> swapped;
};

// Throws Error(kConfig) for an invalid scenario. Protocol aborts are
// recorded in the ledger.
RunResult RunScenario(const Scenario& scenario, const RunOptions& options = {});

// Rebuilds the authority from the scenario and runs DisRes on the bundle.
protocol::DisputeResult ReplayDispute(const Scenario& scenario,
                                      const protocol::DisputeBundle& bundle);

UnlinkabilityReport EvaluateUnlinkability(const RunResult& run,
                                          const RunResult* swapped_run = nullptr);

}  // namespace etp::sim

#endif  // ETP_SIM_HARNESS_H_
