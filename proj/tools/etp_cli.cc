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

// etp: command-line front end over the C API.
//
//   etp simulate   --config scenario.json --out DIR [--seed N]
//   etp dispute    --ledger DIR|ledger.json [--bundle FILE]
//   etp spot-check --ledger DIR|ledger.json --observations FILE
//                  [--epsilon S] [--gamma MPS]
//   etp keygen     --mode test|production --out DIR [--force] [--seed N]
//
// Exit codes: 0 success, 1 runtime failure, 2 bad input or configuration,
// 3 protocol abort with evidence.

#include <cstdio>
#include <memory>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "etp/etp.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitBadInput = 2;
constexpr int kExitAbort = 3;

struct RunDeleter {
  void operator()(etp_run* r) const { etp_run_free(r); }
};
struct ScenarioDeleter {
  void operator()(etp_scenario* s) const { etp_scenario_free(s); }
};
struct StringDeleter {
  void operator()(char* s) const { etp_string_free(s); }
};
using RunPtr = std::unique_ptr<etp_run, RunDeleter>;
using ScenarioPtr = std::unique_ptr<etp_scenario, ScenarioDeleter>;
using StringPtr = std::unique_ptr<char, StringDeleter>;

int Report(etp_status status) {
  std::fprintf(stderr, "etp: %s: %s\n", etp_status_name(status), etp_last_error());
  switch (status) {
    case ETP_ERR_CONFIG:
    case ETP_ERR_MALFORMED:
    case ETP_ERR_INVALID_ARGUMENT:
    case ETP_ERR_NOT_FOUND:
      return kExitBadInput;
    default:
      return kExitFailure;
  }
}

RunPtr LoadRun(const std::string& path, int* exit_code) {
  etp_run* run = nullptr;
  etp_status st = etp_run_load(path.c_str(), &run);
  if (st != ETP_OK) {
    // An unreadable ledger is bad input, not a runtime failure.
    *exit_code = st == ETP_ERR_IO ? (Report(st), kExitBadInput) : Report(st);
  }
  return RunPtr(run);
}

int Simulate(const std::string& config, const std::string& out,
             std::optional<uint64_t> seed) {
  etp_scenario* raw = nullptr;
  etp_status st = etp_scenario_load(config.c_str(), &raw);
  ScenarioPtr scenario(raw);
  if (st == ETP_ERR_IO) return Report(st), kExitBadInput;
  if (st != ETP_OK) return Report(st);
  if (seed.has_value()) etp_scenario_set_seed(scenario.get(), *seed);

  etp_run* run_raw = nullptr;
  if ((st = etp_simulate(scenario.get(), &run_raw)) != ETP_OK) return Report(st);
  RunPtr run(run_raw);
  if ((st = etp_run_write(run.get(), out.c_str())) != ETP_OK) return Report(st);

  etp_run_stats s{};
  etp_run_get_stats(run.get(), &s);
  std::printf("users %zu, groups %zu, disputes %zu, aborts %zu\n", s.users, s.groups,
              s.disputes, s.aborts);
  std::printf("accusations %zu (%zu as scripted), spot checks %zu (%zu flagged)\n",
              s.accusations, s.correct_accusations, s.spot_checks, s.flagged_spot_checks);
  std::printf("paid %lld of %lld cents%s\n", static_cast<long long>(s.total_paid_cents),
              static_cast<long long>(s.total_fee_cents),
              s.conserved ? "" : " (not conserved)");
  std::printf("ledger written to %s\n", out.c_str());
  return s.aborts > 0 ? kExitAbort : kExitOk;
}

int Dispute(const std::string& ledger, const std::optional<std::string>& bundle) {
  int code = kExitOk;
  RunPtr run = LoadRun(ledger, &code);
  if (!run) return code;
  char* report = nullptr;
  int identical = 0;
  etp_status st = etp_dispute_replay(run.get(), bundle ? bundle->c_str() : nullptr,
                                     &report, &identical);
  StringPtr owned(report);
  if (st == ETP_ERR_IO) return Report(st), kExitBadInput;
  if (st != ETP_OK) return Report(st);
  std::fputs(report, stdout);
  return kExitOk;
}

int SpotCheck(const std::string& ledger, const std::string& observations,
              std::optional<double> epsilon, std::optional<double> gamma) {
  if ((epsilon && !(*epsilon > 0)) || (gamma && !(*gamma > 0))) {
    std::fprintf(stderr, "etp: --epsilon and --gamma must be positive\n");
    return kExitBadInput;
  }
  int code = kExitOk;
  RunPtr run = LoadRun(ledger, &code);
  if (!run) return code;
  char* report = nullptr;
  size_t flagged = 0;
  etp_status st = etp_spot_check(run.get(), observations.c_str(), epsilon.value_or(-1),
                                 gamma.value_or(-1), &report, &flagged);
  StringPtr owned(report);
  if (st == ETP_ERR_IO) return Report(st), kExitBadInput;
  if (st != ETP_OK) return Report(st);
  std::fputs(report, stdout);
  std::printf("%zu flagged\n", flagged);
  return kExitOk;
}

int Keygen(const std::string& mode, const std::string& out, bool force, uint64_t seed) {
  char* report = nullptr;
  etp_status st = etp_keygen(mode.c_str(), out.c_str(), force ? 1 : 0, seed, &report);
  StringPtr owned(report);
  if (st == ETP_ERR_EXISTS) return Report(st), kExitFailure;
  if (st != ETP_OK) return Report(st);
  std::fputs(report, stdout);
  char* check = nullptr;
  st = etp_keys_check(out.c_str(), &check);
  StringPtr check_owned(check);
  if (st != ETP_OK) return Report(st);
  std::fputs(check, stdout);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Electronic toll pricing engine and simulator"};
  app.require_subcommand(1);
  app.set_version_flag("--version", etp_version());

  std::string config, out, ledger, observations, mode;
  std::optional<uint64_t> seed;
  std::optional<std::string> bundle;
  std::optional<double> epsilon, gamma;
  bool force = false;
  uint64_t key_seed = 0;

  auto* sim = app.add_subcommand("simulate", "Run a scenario and write its ledger");
  sim->add_option("--config", config, "Scenario JSON")->required();
  sim->add_option("--out", out, "Output directory")->required();
  sim->add_option("--seed", seed, "Override the scenario seed");

  auto* dis = app.add_subcommand("dispute", "Replay dispute resolution from a ledger");
  dis->add_option("--ledger", ledger, "Ledger file or output directory")->required();
  dis->add_option("--bundle", bundle, "Hex-encoded dispute bundle to replay instead");

  auto* spot = app.add_subcommand("spot-check", "Check observations against location logs");
  spot->add_option("--ledger", ledger, "Ledger file or output directory")->required();
  spot->add_option("--observations", observations, "CSV lat,lon,t,plate")->required();
  spot->add_option("--epsilon", epsilon, "Transmission interval in seconds");
  spot->add_option("--gamma", gamma, "Speed bound in metres per second");

  auto* key = app.add_subcommand("keygen", "Generate server and authority keys");
  key->add_option("--mode", mode, "test or production")
      ->required()
      ->check(CLI::IsMember({"test", "production"}));
  key->add_option("--out", out, "Output directory")->required();
  key->add_flag("--force", force, "Overwrite existing key files");
  key->add_option("--seed", key_seed, "Deterministic seed (test use)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitBadInput;
  }

  if (sim->parsed()) return Simulate(config, out, seed);
  if (dis->parsed()) return Dispute(ledger, bundle);
  if (spot->parsed()) return SpotCheck(ledger, observations, epsilon, gamma);
  return Keygen(mode, out, force, key_seed);
}
