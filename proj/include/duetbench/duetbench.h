/*
 * Copyright (c) The duetbench authors.
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


/*
 * C interface to duetbench.
 *
 * Objects are opaque handles created and destroyed through this API. Every
 * fallible call returns a duet_status; on failure duet_last_error() returns a
 * message describing the most recent error on the calling thread.
 */

#ifndef DUETBENCH_DUETBENCH_H_
#define DUETBENCH_DUETBENCH_H_

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#if defined(DUETBENCH_BUILDING_LIBRARY)
#define DUET_API __declspec(dllexport)
#else
#define DUET_API __declspec(dllimport)
#endif
#else
#define DUET_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum duet_status {
  DUET_OK = 0,
  DUET_ERR_INVALID_WORKLOAD = 1,
  DUET_ERR_INVALID_REGRESSION = 2,
  DUET_ERR_INSUFFICIENT_CORES = 3,
  DUET_ERR_AFFINITY_UNSUPPORTED = 4,
  DUET_ERR_AFFINITY = 5,
  DUET_ERR_BARRIER_TIMEOUT = 6,
  DUET_ERR_EXECUTION = 7,
  DUET_ERR_INVALID_CONFIG = 8,
  DUET_ERR_PAIRING = 9,
  DUET_ERR_DIVISION_DOMAIN = 10,
  DUET_ERR_EMPTY_SAMPLES = 11,
  DUET_ERR_INSUFFICIENT_SAMPLES = 12,
  DUET_ERR_RANGE = 13,
  DUET_ERR_INVALID_ARGUMENT = 14,
  DUET_ERR_IO = 15,
  DUET_ERR_PARSE = 16,
  DUET_ERR_NULL_ARGUMENT = 100,
  DUET_ERR_BUFFER_TOO_SMALL = 101,
  DUET_ERR_INTERNAL = 102
} duet_status;

/* Numeric values double as process exit codes. */
typedef enum duet_verdict {
  DUET_VERDICT_PASS = 0,
  DUET_VERDICT_REGRESSION = 1,
  DUET_VERDICT_INCONCLUSIVE = 3
} duet_verdict;

typedef enum duet_format { DUET_FORMAT_JSON = 0, DUET_FORMAT_CSV = 1 } duet_format;

typedef struct duet_config duet_config;
typedef struct duet_report duet_report;

typedef struct duet_interval {
  double lower_pct;
  double upper_pct;
  double level;
  double width_pp;
} duet_interval;

typedef struct duet_strategy_summary {
  const char* strategy; /* static string: "independent", "rmit" or "duet" */
  double median_change_pct;
  duet_interval ci;
  duet_verdict verdict;
  size_t measurements_total;
  size_t measurements_after_filter;
  size_t pairs_total;
  size_t pairs_after_filter;
  size_t sweep_points;
} duet_strategy_summary;

DUET_API const char* duet_version(void);
DUET_API const char* duet_status_name(duet_status status);
DUET_API const char* duet_last_error(void);

/* Exit code for a status: 2 for any error. */
DUET_API int duet_status_exit_code(duet_status status);

/* ---- configuration ---------------------------------------------------- */

DUET_API duet_status duet_config_create(duet_config** out);
DUET_API void duet_config_destroy(duet_config* config);

/* Keys match the config file keys, e.g. "repetitions", "strategies". */
DUET_API duet_status duet_config_set(duet_config* config, const char* key,
                                     const char* value);
DUET_API duet_status duet_config_load_file(duet_config* config,
                                           const char* path);
DUET_API duet_status duet_config_validate(const duet_config* config);

/* Number of accepted keys and the i-th key (static storage). */
DUET_API size_t duet_config_key_count(void);
DUET_API const char* duet_config_key(size_t index);

/*
 * Copies NUL-terminated JSON into buf. *needed receives the required size
 * including the terminator; with buf == NULL only *needed is set.
 */
DUET_API duet_status duet_config_to_json(const duet_config* config, char* buf,
                                         size_t capacity, size_t* needed);

/* ---- experiments -------------------------------------------------------- */

DUET_API duet_status duet_run_experiment(const duet_config* config,
                                         duet_report** out);

/* Re-analyzes a raw.csv written by duet_report_emit. */
DUET_API duet_status duet_analyze_raw_csv(const duet_config* config,
                                          const char* raw_csv_path,
                                          duet_report** out);

DUET_API void duet_report_destroy(duet_report* report);
DUET_API duet_verdict duet_report_verdict(const duet_report* report);
DUET_API size_t duet_report_strategy_count(const duet_report* report);
DUET_API duet_status duet_report_strategy(const duet_report* report,
                                          size_t index,
                                          duet_strategy_summary* out);
DUET_API duet_status duet_report_sweep_point(const duet_report* report,
                                             size_t strategy_index,
                                             size_t point_index, uint64_t* n,
                                             double* width_pp);

/*
 * Writes summary.json or summary.csv, raw.csv and sweep.csv into dir, or
 * into the configured output_dir when dir is NULL.
 */
DUET_API duet_status duet_report_emit(const duet_report* report,
                                      const char* dir, duet_format format);

/* Same buffer protocol as duet_config_to_json. */
DUET_API duet_status duet_report_summary_json(const duet_report* report,
                                              int include_timestamps,
                                              char* buf, size_t capacity,
                                              size_t* needed);

/* ---- primitives --------------------------------------------------------- */

DUET_API duet_status duet_relative_change(double t_a, double t_b, double* out);

DUET_API duet_status duet_percentile_interval(const double* samples, size_t n,
                                              double level, duet_interval* out);

/* Bootstrap CI of the median of `changes`, seeded; min sample size 50. */
DUET_API duet_status duet_bootstrap_ci(const double* changes, size_t n,
                                       double level, size_t resamples,
                                       uint64_t seed, duet_interval* out);

/* kind: "cpu_mutation" or "mem_sieve". */
DUET_API duet_status duet_workload_run(const char* kind, uint64_t scale,
                                       double regression_pct,
                                       uint64_t* checksum,
                                       uint64_t* units_done);

DUET_API unsigned duet_available_cores(void);

#ifdef __cplusplus
}
#endif

#endif /* DUETBENCH_DUETBENCH_H_ */
