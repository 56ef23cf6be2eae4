/*
 * Copyright 2026 The ETP Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/* C interface to the toll pricing engine and its simulator.
 *
 * Objects are opaque handles released with the matching *_free function.
 * Every call returns an etp_status; on failure etp_last_error() describes
 * the problem for the calling thread. Strings returned through char**
 * parameters are owned by the caller and released with etp_string_free().
 */
#ifndef ETP_ETP_H_
#define ETP_ETP_H_

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define ETP_API __declspec(dllexport)
#else
#define ETP_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum etp_status {
  ETP_OK = 0,
  ETP_ERR_INVALID_ARGUMENT = 1,
  ETP_ERR_CONFIG = 2,
  ETP_ERR_MALFORMED = 3,
  ETP_ERR_IO = 4,
  ETP_ERR_EXISTS = 5,
  ETP_ERR_NOT_FOUND = 6,
  ETP_ERR_VERIFICATION = 7,
  ETP_ERR_PROTOCOL = 8,
  ETP_ERR_INTERNAL = 9
} etp_status;

typedef struct etp_scenario etp_scenario;
typedef struct etp_run etp_run;

typedef struct etp_run_stats {
  size_t users;
  size_t groups;
  size_t disputes;
  size_t aborts;
  size_t accusations;
  size_t correct_accusations;
  size_t spot_checks;
  size_t flagged_spot_checks;
  int64_t total_paid_cents;
  int64_t total_fee_cents;
  int conserved;
} etp_run_stats;

ETP_API const char* etp_version(void);
ETP_API const char* etp_status_name(etp_status status);
/* Message for the last failed call on this thread; "" if none. */
ETP_API const char* etp_last_error(void);
ETP_API void etp_string_free(char* s);

/* Scenario documents (JSON, "schema": 1). */
ETP_API etp_status etp_scenario_load(const char* path, etp_scenario** out);
ETP_API etp_status etp_scenario_parse(const char* json, etp_scenario** out);
ETP_API etp_status etp_scenario_set_seed(etp_scenario* scenario, uint64_t seed);
ETP_API etp_status etp_scenario_to_json(const etp_scenario* scenario, char** out);
ETP_API void etp_scenario_free(etp_scenario* scenario);

/* Runs all phases. Protocol aborts are recorded, not returned as errors. */
ETP_API etp_status etp_simulate(const etp_scenario* scenario, etp_run** out);
/* Loads a ledger file or an output directory written by etp_run_write. */
ETP_API etp_status etp_run_load(const char* path, etp_run** out);
ETP_API etp_status etp_run_write(const etp_run* run, const char* out_dir);
ETP_API etp_status etp_run_ledger_json(const etp_run* run, char** out);
ETP_API etp_status etp_run_summary_csv(const etp_run* run, char** out);
ETP_API etp_status etp_run_get_stats(const etp_run* run, etp_run_stats* out);
ETP_API void etp_run_free(etp_run* run);

/* Replays dispute resolution. bundle_path may be NULL to replay the bundles
 * recorded in the ledger; it names a file holding a hex-encoded bundle
 * otherwise. *identical is 1 when every replay matches the recorded
 * result byte for byte. ETP_ERR_NOT_FOUND when there is nothing to replay.
 */
ETP_API etp_status etp_dispute_replay(const etp_run* run, const char* bundle_path,
                                      char** report, int* identical);

/* Checks observations (CSV lat,lon,t,plate) against the stored location
 * logs. A negative epsilon or gamma selects the scenario's value. */
ETP_API etp_status etp_spot_check(const etp_run* run, const char* observations_path,
                                  double epsilon_seconds, double gamma_mps,
                                  char** report, size_t* flagged);

/* mode is "test" or "production". A zero seed draws from the OS. */
ETP_API etp_status etp_keygen(const char* mode, const char* out_dir, int force,
                              uint64_t seed, char** report);
ETP_API etp_status etp_keys_check(const char* dir, char** report);

#ifdef __cplusplus
}
#endif

#endif  /* ETP_ETP_H_ */
