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

#include "etp/etp.h"

#include <openssl/rand.h>

#include <cctype>
#include <cstdlib>
#include <cstring>
#include <exception>
#include <new>
#include <optional>
#include <string>

#include "app/commands.h"
#include "common/error.h"
#include "io/documents.h"
#include "io/keys.h"
#include "sim/scenario.h"

struct etp_scenario {
  etp::sim::Scenario value;
};

struct etp_run {
  etp::app::RunArtifacts value;
};

namespace {

thread_local std::string g_last_error;

etp_status StatusOf(etp::ErrorCode code) {
  using etp::ErrorCode;
  switch (code) {
    case ErrorCode::kInvalidArgument:
    case ErrorCode::kOutOfRange:
      return ETP_ERR_INVALID_ARGUMENT;
    case ErrorCode::kConfig: return ETP_ERR_CONFIG;
    case ErrorCode::kMalformed:
    case ErrorCode::kInvalidCiphertext:
      return ETP_ERR_MALFORMED;
    case ErrorCode::kIo: return ETP_ERR_IO;
    case ErrorCode::kDuplicate: return ETP_ERR_EXISTS;
    case ErrorCode::kNotFound: return ETP_ERR_NOT_FOUND;
    case ErrorCode::kVerificationFailed:
    case ErrorCode::kUnknownRosterVersion:
    case ErrorCode::kUntraceable:
      return ETP_ERR_VERIFICATION;
    case ErrorCode::kProtocolAbort: return ETP_ERR_PROTOCOL;
  }
  return ETP_ERR_INTERNAL;
}

etp_status Fail(etp_status status, std::string message) {
  g_last_error = std::move(message);
  return status;
}

// Runs f, mapping exceptions onto status codes.
template <typename F>
etp_status Guard(F&& f) {
  g_last_error.clear();
  try {
    f();
    return ETP_OK;
  } catch (const etp::Error& e) {
    return Fail(StatusOf(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return Fail(ETP_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return Fail(ETP_ERR_INTERNAL, e.what());
  }
}

char* Dup(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, s.data(), s.size() + 1);
  return out;
}

#define ETP_REQUIRE_ARG(cond)                                         \
  do {                                                                \
    if (!(cond)) return Fail(ETP_ERR_INVALID_ARGUMENT, "null " #cond); \
  } while (0)

}  // namespace

extern "C" {

const char* etp_version(void) { return "1.0.0"; }

const char* etp_status_name(etp_status status) {
  switch (status) {
    case ETP_OK: return "ok";
    case ETP_ERR_INVALID_ARGUMENT: return "invalid argument";
    case ETP_ERR_CONFIG: return "config error";
    case ETP_ERR_MALFORMED: return "malformed input";
    case ETP_ERR_IO: return "io error";
    case ETP_ERR_EXISTS: return "already exists";
    case ETP_ERR_NOT_FOUND: return "not found";
    case ETP_ERR_VERIFICATION: return "verification failed";
    case ETP_ERR_PROTOCOL: return "protocol abort";
    case ETP_ERR_INTERNAL: return "internal error";
  }
  return "unknown";
}

const char* etp_last_error(void) { return g_last_error.c_str(); }

void etp_string_free(char* s) { std::free(s); }

etp_status etp_scenario_load(const char* path, etp_scenario** out) {
  ETP_REQUIRE_ARG(path);
  ETP_REQUIRE_ARG(out);
  *out = nullptr;
  return Guard([&] { *out = new etp_scenario{etp::io::LoadScenarioFile(path)}; });
}

etp_status etp_scenario_parse(const char* json, etp_scenario** out) {
  ETP_REQUIRE_ARG(json);
  ETP_REQUIRE_ARG(out);
  *out = nullptr;
  return Guard([&] { *out = new etp_scenario{etp::io::ParseScenario(json)}; });
}

etp_status etp_scenario_set_seed(etp_scenario* scenario, uint64_t seed) {
  ETP_REQUIRE_ARG(scenario);
  scenario->value.seed = seed;
  return ETP_OK;
}

etp_status etp_scenario_to_json(const etp_scenario* scenario, char** out) {
  ETP_REQUIRE_ARG(scenario);
  ETP_REQUIRE_ARG(out);
  return Guard([&] { *out = Dup(etp::io::ScenarioToJson(scenario->value)); });
}

void etp_scenario_free(etp_scenario* scenario) { delete scenario; }

etp_status etp_simulate(const etp_scenario* scenario, etp_run** out) {
  ETP_REQUIRE_ARG(scenario);
  ETP_REQUIRE_ARG(out);
  *out = nullptr;
  return Guard([&] { *out = new etp_run{etp::app::Simulate(scenario->value)}; });
}

etp_status etp_run_load(const char* path, etp_run** out) {
  ETP_REQUIRE_ARG(path);
  ETP_REQUIRE_ARG(out);
  *out = nullptr;
  return Guard([&] { *out = new etp_run{etp::app::LoadRun(path)}; });
}

etp_status etp_run_write(const etp_run* run, const char* out_dir) {
  ETP_REQUIRE_ARG(run);
  ETP_REQUIRE_ARG(out_dir);
  return Guard([&] { etp::app::WriteRun(out_dir, run->value); });
}

etp_status etp_run_ledger_json(const etp_run* run, char** out) {
  ETP_REQUIRE_ARG(run);
  ETP_REQUIRE_ARG(out);
  return Guard([&] { *out = Dup(etp::io::LedgerToJson(run->value.ledger)); });
}

etp_status etp_run_summary_csv(const etp_run* run, char** out) {
  ETP_REQUIRE_ARG(run);
  ETP_REQUIRE_ARG(out);
  return Guard([&] { *out = Dup(etp::io::SummaryCsv(run->value.ledger)); });
}

etp_status etp_run_get_stats(const etp_run* run, etp_run_stats* out) {
  ETP_REQUIRE_ARG(run);
  ETP_REQUIRE_ARG(out);
  const auto& l = run->value.ledger;
  etp_run_stats s{};
  s.users = l.users.size();
  s.groups = l.groups.size();
  s.disputes = l.disputes.size();
  s.aborts = l.aborts.size();
  s.accusations = l.accusations.size();
  for (const auto& a : l.accusations) s.correct_accusations += a.correct ? 1 : 0;
  s.spot_checks = l.spot_checks.size();
  for (const auto& c : l.spot_checks) s.flagged_spot_checks += c.consistent ? 0 : 1;
  s.total_paid_cents = l.total_paid_cents;
  s.total_fee_cents = l.total_fee_cents;
  s.conserved = l.conserved ? 1 : 0;
  *out = s;
  return ETP_OK;
}

void etp_run_free(etp_run* run) { delete run; }

etp_status etp_dispute_replay(const etp_run* run, const char* bundle_path, char** report,
                              int* identical) {
  ETP_REQUIRE_ARG(run);
  ETP_REQUIRE_ARG(report);
  return Guard([&] {
    std::optional<etp::Bytes> bundle;
    if (bundle_path != nullptr) {
      std::string text = etp::io::ReadFile(bundle_path);
      while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) {
        text.pop_back();
      }
      bundle = etp::FromHex(text);
    }
    auto outcomes = etp::app::ReplayDisputes(run->value, bundle);
    bool all = true;
    for (const auto& o : outcomes) all &= o.identical.value_or(false);
    if (identical != nullptr) *identical = all ? 1 : 0;
    *report = Dup(etp::app::FormatReplay(outcomes));
  });
}

etp_status etp_spot_check(const etp_run* run, const char* observations_path,
                          double epsilon_seconds, double gamma_mps, char** report,
                          size_t* flagged) {
  ETP_REQUIRE_ARG(run);
  ETP_REQUIRE_ARG(observations_path);
  ETP_REQUIRE_ARG(report);
  return Guard([&] {
    etp::protocol::SpotCheckParams params = run->value.ledger.scenario.spot_check;
    if (epsilon_seconds >= 0) params.epsilon_seconds = epsilon_seconds;
    if (gamma_mps >= 0) params.gamma_mps = gamma_mps;
    auto obs = etp::io::ParseObservations(etp::io::ReadFile(observations_path));
    auto lines = etp::app::RunSpotChecks(run->value, obs, params);
    size_t n = 0;
    for (const auto& l : lines) n += l.result.consistent ? 0 : 1;
    if (flagged != nullptr) *flagged = n;
    *report = Dup(etp::app::FormatSpotChecks(lines, params));
  });
}

etp_status etp_keygen(const char* mode, const char* out_dir, int force, uint64_t seed,
                      char** report) {
  ETP_REQUIRE_ARG(mode);
  ETP_REQUIRE_ARG(out_dir);
  etp::crypto::SecurityMode m;
  if (std::strcmp(mode, "test") == 0) {
    m = etp::crypto::SecurityMode::kInsecureTest;
  } else if (std::strcmp(mode, "production") == 0) {
    m = etp::crypto::SecurityMode::kProduction;
  } else {
    return Fail(ETP_ERR_CONFIG, std::string("unknown mode '") + mode + "'");
  }
  return Guard([&] {
    uint64_t s = seed;
    if (s == 0) {
      unsigned char buf[8];
      ETP_ENFORCE(RAND_bytes(buf, sizeof(buf)) == 1, etp::ErrorCode::kIo,
                  "no system entropy");
      std::memcpy(&s, buf, sizeof(s));
    }
    etp::crypto::Rng rng(s);
    auto keys = etp::io::GenerateKeys(m, rng);
    etp::io::WriteKeys(out_dir, keys, force != 0);
    if (report != nullptr) {
      std::string r = m == etp::crypto::SecurityMode::kInsecureTest
                          ? "INSECURE-TEST keys written to "
                          : "production keys written to ";
      r += std::string(out_dir) + "\n";
      for (auto name : etp::io::kKeyFiles) r += "  " + std::string(name) + "\n";
      *report = Dup(r);
    }
  });
}

etp_status etp_keys_check(const char* dir, char** report) {
  ETP_REQUIRE_ARG(dir);
  return Guard([&] {
    auto keys = etp::io::LoadKeys(dir);
    if (report != nullptr) {
      auto bits = [](const etp::crypto::BigInt& v) {
        return std::to_string(mpz_sizeinbase(v.get_mpz_t(), 2));
      };
      *report = Dup(
          std::string(keys.mode == etp::crypto::SecurityMode::kProduction ? "production"
                                                                          : "INSECURE-TEST") +
          " keys ok: group " + bits(keys.group.modulus_p) + "/" + bits(keys.group.order_q) +
          " bits, paillier " + bits(keys.paillier.public_key.n) + " bits\n");
    }
  });
}

}  // extern "C"
