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

#ifndef ETP_IO_DOCUMENTS_H_
#define ETP_IO_DOCUMENTS_H_

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "protocol/messages.h"
#include "protocol/spot_check.h"
#include "sim/ledger.h"
#include "sim/scenario.h"

namespace etp::io {

inline constexpr int kSchemaVersion = 1;

// Scenario documents. Syntax errors report line and column; semantic errors
// report the field path. Both throw Error(kConfig). A "policy" given as a
// string is read as a path relative to base_dir.
sim::Scenario ParseScenario(std::string_view text,
                            const std::filesystem::path& base_dir = {});
sim::Scenario LoadScenarioFile(const std::filesystem::path& path);
std::string ScenarioToJson(const sim::Scenario& scenario);

toll::ChargingPolicy ParsePolicy(std::string_view text);

// Ledger documents: sorted keys, big integers and payloads in hex.
// Throws Error(kMalformed).
std::string LedgerToJson(const sim::SessionLedger& ledger);
sim::SessionLedger ParseLedger(std::string_view text);

// user_id,claimed_cents,real_cents,paid_cents,accused
std::string SummaryCsv(const sim::SessionLedger& ledger);

// lat,lon,t,plate with a header row. Throws Error(kMalformed) naming the line.
std::vector<protocol::Observation> ParseObservations(std::string_view text);
std::string ObservationsCsv(const std::vector<protocol::Observation>& rows);

// One JSON object per line per stored record of a (group, session).
std::string LocationDbLines(const std::vector<protocol::LocationRecord>& records);
std::vector<protocol::LocationRecord> ParseLocationDb(std::string_view text);
std::string LocationDbFileName(const std::string& group_id, const std::string& sid);

// Throws Error(kIo).
std::string ReadFile(const std::filesystem::path& path);
void WriteFile(const std::filesystem::path& path, std::string_view contents);

}  // namespace etp::io

#endif  // ETP_IO_DOCUMENTS_H_
