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

#include "app/commands.h"

#include <cstdio>

#include "common/error.h"
#include "io/documents.h"
#include "protocol/accountability.h"
#include "protocol/toll_server.h"
#include "sim/harness.h"

namespace etp::app {

namespace fs = std::filesystem;

namespace {

std::string Fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
  return buf;
}

const sim::DisputeRecord* RecordFor(const sim::SessionLedger& l, const std::string& group) {
  for (const auto& d : l.disputes) {
    if (d.group_id == group) return &d;
  }
  return nullptr;
}

ReplayOutcome Replay(const sim::SessionLedger& l, const protocol::DisputeBundle& bundle) {
  protocol::DisputeResult result = sim::ReplayDispute(l.scenario, bundle);
  ReplayOutcome out;
  out.group_id = result.group_id;
  out.verdict = std::string(protocol::VerdictText(result.verdict));
  for (const auto& a : result.res) out.listed.push_back({a.user_id, 0, a.committed});
  if (const auto* rec = RecordFor(l, bundle.group_id)) {
    out.identical = l.evidence.at(rec->result_ref).payload == result.Encode();
  }
  return out;
}

}  // namespace

RunArtifacts Simulate(const sim::Scenario& scenario) {
  sim::RunResult r = sim::RunScenario(scenario);
  return {std::move(r.ledger), std::move(r.stored)};
}

void WriteRun(const fs::path& dir, const RunArtifacts& run) {
  std::error_code ec;
  fs::create_directories(dir / "locdb", ec);
  if (!ec && !run.ledger.disputes.empty()) fs::create_directories(dir / "bundles", ec);
  if (ec) throw Error(ErrorCode::kIo, "cannot create " + dir.string() + ": " + ec.message());
  io::WriteFile(dir / "ledger.json", io::LedgerToJson(run.ledger));
  io::WriteFile(dir / "summary.csv", io::SummaryCsv(run.ledger));
  const std::string& sid = run.ledger.scenario.session.sid;
  for (const auto& [g, records] : run.stored) {
    io::WriteFile(dir / "locdb" / io::LocationDbFileName(g, sid), io::LocationDbLines(records));
  }
  for (const auto& d : run.ledger.disputes) {
    io::WriteFile(dir / "bundles" / (d.group_id + ".hex"),
                  ToHex(run.ledger.evidence.at(d.bundle_ref).payload) + "\n");
  }
}

RunArtifacts LoadRun(const fs::path& path) {
  fs::path dir = fs::is_directory(path) ? path : path.parent_path();
  fs::path file = fs::is_directory(path) ? path / "ledger.json" : path;
  RunArtifacts run;
  try {
    run.ledger = io::ParseLedger(io::ReadFile(file));
  } catch (const Error& e) {
    throw Error(e.code(), file.string() + ": " + e.what());
  }
  const std::string& sid = run.ledger.scenario.session.sid;
  for (const auto& g : run.ledger.groups) {
    fs::path db = dir / "locdb" / io::LocationDbFileName(g.group_id, sid);
    if (fs::exists(db)) run.stored[g.group_id] = io::ParseLocationDb(io::ReadFile(db));
  }
  return run;
}

std::vector<ReplayOutcome> ReplayDisputes(const RunArtifacts& run,
                                          const std::optional<Bytes>& bundle) {
  const sim::SessionLedger& l = run.ledger;
  std::vector<ReplayOutcome> out;
  if (bundle.has_value()) {
    out.push_back(Replay(l, protocol::DisputeBundle::Decode(*bundle)));
    return out;
  }
  ETP_ENFORCE(!l.disputes.empty(), ErrorCode::kNotFound,
              "ledger holds no dispute bundle: Phase 4 did not run");
  for (const auto& d : l.disputes) {
    out.push_back(
        Replay(l, protocol::DisputeBundle::Decode(l.evidence.at(d.bundle_ref).payload)));
  }
  return out;
}

std::string FormatReplay(const std::vector<ReplayOutcome>& outcomes) {
  std::string out;
  for (const auto& o : outcomes) {
    out += "dispute " + o.group_id + ": " + o.verdict + "\n";
    for (const auto& u : o.listed) {
      out += "  listed " + u.user_id + (u.committed ? " (committed)" : " (no commitment)") + "\n";
    }
    if (!o.identical.has_value()) {
      out += "  replay: no recorded result for this group\n";
    } else {
      out += *o.identical ? "  replay: identical to recorded result\n"
                          : "  replay: differs from recorded result\n";
    }
  }
  return out;
}

std::vector<SpotCheckLine> RunSpotChecks(const RunArtifacts& run,
                                         const std::vector<protocol::Observation>& obs,
                                         const protocol::SpotCheckParams& params) {
  params.Validate();
  const sim::SessionLedger& l = run.ledger;
  // Group logs as exported by the server during the run.
  std::map<std::string, std::vector<toll::LocationTuple>> logs;
  for (const auto& e : l.evidence) {
    if (e.kind != protocol::EvidenceKind::kLocationLog) continue;
    auto log = protocol::LocationLog::Decode(e.payload);
    logs[log.group_id] = log.tuples;
  }
  std::vector<SpotCheckLine> out;
  for (const auto& o : obs) {
    SpotCheckLine line{o, "", {}};
    for (const auto& u : l.scenario.users) {
      if (u.plate == o.plate) line.user_id = u.id;
    }
    if (!line.user_id.empty()) {
      const std::string& g =
          l.scenario.region_groups.at(l.scenario.User(line.user_id).region);
      line.result = protocol::SpotCheck(o, logs[g], params);
    }
    out.push_back(std::move(line));
  }
  return out;
}

std::string FormatSpotChecks(const std::vector<SpotCheckLine>& lines,
                             const protocol::SpotCheckParams& params) {
  std::string out;
  for (const auto& line : lines) {
    const auto& o = line.observation;
    out += o.plate + " at " + toll::CanonicalLocationText(o.location, o.time) + ": ";
    if (line.user_id.empty()) {
      out += "flagged (unknown plate)\n";
      continue;
    }
    const auto& r = line.result;
    out += r.consistent ? "consistent" : "flagged";
    if (r.witness.has_value()) {
      const auto& w = *r.witness;
      out += " (|dt| = " + Fixed(w.dt_seconds, 0) + " s < eps/2 = " +
             Fixed(params.epsilon_seconds / 2, 1) + " s; d = " + Fixed(w.distance_meters, 1) +
             " m <= gamma*|dt| = " + Fixed(params.gamma_mps * w.dt_seconds, 1) + " m)";
    } else {
      out += " (no record with |dt| < eps/2 = " + Fixed(params.epsilon_seconds / 2, 1) +
             " s and d <= gamma*|dt|; " + std::to_string(r.records_in_window) +
             " in window)";
    }
    out += "\n";
  }
  return out;
}

}  // namespace etp::app
