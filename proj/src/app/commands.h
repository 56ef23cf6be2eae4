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

#ifndef ETP_APP_COMMANDS_H_
#define ETP_APP_COMMANDS_H_

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "protocol/messages.h"
#include "protocol/spot_check.h"
#include "sim/ledger.h"

namespace etp::app {

// A ledger plus the server's stored records, as produced by a run or
// loaded back from disk.
struct RunArtifacts {
  sim::SessionLedger ledger;
  std::map<std::string, std::vector<protocol::LocationRecord>> stored;
};

RunArtifacts Simulate(const sim::Scenario& scenario);

// Writes ledger.json, summary.csv, locdb/<group>.<sid>.jsonl and
// bundles/<group>.hex for every dispute.
void WriteRun(const std::filesystem::path& dir, const RunArtifacts& run);

// Accepts a ledger file or a directory written by WriteRun.
RunArtifacts LoadRun(const std::filesystem::path& path);

struct ReplayOutcome {
  std::string group_id;
  std::string verdict;
  std::vector<sim::ResolvedUser> listed;  // real_cents left at 0: encrypted
  std::optional<bool> identical;          // vs the recorded result, if any
};

// Replays DisRes on every recorded bundle, or on the given bundle bytes.
// Throws Error(kNotFound) when there is nothing to replay.
std::vector<ReplayOutcome> ReplayDisputes(const RunArtifacts& run,
                                          const std::optional<Bytes>& bundle);
std::string FormatReplay(const std::vector<ReplayOutcome>& outcomes);

struct SpotCheckLine {
  protocol::Observation observation;
  std::string user_id;  // empty for an unknown plate
  protocol::SpotCheckResult result;
};

// params default to the scenario's. Throws Error(kConfig) for invalid params.
std::vector<SpotCheckLine> RunSpotChecks(const RunArtifacts& run,
                                         const std::vector<protocol::Observation>& obs,
                                         const protocol::SpotCheckParams& params);
std::string FormatSpotChecks(const std::vector<SpotCheckLine>& lines,
                             const protocol::SpotCheckParams& params);

}  // namespace etp::app

#endif  // ETP_APP_COMMANDS_H_
