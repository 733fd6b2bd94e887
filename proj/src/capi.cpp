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


#include "duetbench/duetbench.h"

#include <cstring>
#include <memory>
#include <span>
#include <vector>
#include <exception>
#include <new>
#include <string>

#include "duetbench/analysis.hpp"
#include "duetbench/error.hpp"
#include "duetbench/executor.hpp"
#include "duetbench/harness.hpp"
#include "duetbench/workloads.hpp"

struct duet_config {
  duetbench::ExperimentConfig cfg;
};

struct duet_report {
  duetbench::Report report;
};

namespace {

thread_local std::string g_last_error;

duet_status fail(duet_status status, std::string message) {
  g_last_error = std::move(message);
  return status;
}

// Runs `body`, translating exceptions into status codes.
template <typename Body>
duet_status guarded(Body&& body) noexcept {
  try {
    body();
    g_last_error.clear();
    return DUET_OK;
  } catch (const duetbench::Error& e) {
    return fail(static_cast<duet_status>(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return fail(DUET_ERR_EXECUTION, "out of memory");
  } catch (const std::exception& e) {
    return fail(DUET_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(DUET_ERR_INTERNAL, "unknown error");
  }
}

duet_status copy_out(const std::string& text, char* buf, size_t capacity,
                     size_t* needed) {
  if (needed != nullptr) *needed = text.size() + 1;
  if (buf == nullptr) {
    return needed != nullptr ? DUET_OK
                             : fail(DUET_ERR_NULL_ARGUMENT, "buf and needed are NULL");
  }
  if (capacity < text.size() + 1) {
    return fail(DUET_ERR_BUFFER_TOO_SMALL,
                "buffer needs " + std::to_string(text.size() + 1) + " bytes");
  }
  std::memcpy(buf, text.c_str(), text.size() + 1);
  return DUET_OK;
}

duet_interval to_c(const duetbench::ConfidenceInterval& ci) {
  return duet_interval{ci.lower_pct, ci.upper_pct, ci.level, ci.width_pp};
}

duet_verdict to_c(duetbench::Verdict v) {
  switch (v) {
    case duetbench::Verdict::Pass: return DUET_VERDICT_PASS;
    case duetbench::Verdict::Regression: return DUET_VERDICT_REGRESSION;
    case duetbench::Verdict::Inconclusive: return DUET_VERDICT_INCONCLUSIVE;
  }
  return DUET_VERDICT_INCONCLUSIVE;
}

#define DUET_REQUIRE(ptr)                                               \
  do {                                                                  \
    if ((ptr) == nullptr) {                                             \
      return fail(DUET_ERR_NULL_ARGUMENT, #ptr " must not be NULL");    \
    }                                                                   \
  } while (0)

}  // namespace

extern "C" {

const char* duet_version(void) { return "1.0.0"; }

const char* duet_status_name(duet_status status) {
  switch (status) {
    case DUET_OK: return "ok";
    case DUET_ERR_NULL_ARGUMENT: return "null-argument";
    case DUET_ERR_BUFFER_TOO_SMALL: return "buffer-too-small";
    case DUET_ERR_INTERNAL: return "internal-error";
    default: break;
  }
  const auto code = static_cast<duetbench::ErrorCode>(status);
  return duetbench::to_string(code).data();
}

const char* duet_last_error(void) { return g_last_error.c_str(); }

int duet_status_exit_code(duet_status status) {
  return status == DUET_OK ? 0 : duetbench::kErrorExitCode;
}

duet_status duet_config_create(duet_config** out) {
  DUET_REQUIRE(out);
  return guarded([&] { *out = new duet_config{}; });
}

void duet_config_destroy(duet_config* config) { delete config; }

duet_status duet_config_set(duet_config* config, const char* key,
                            const char* value) {
  DUET_REQUIRE(config);
  DUET_REQUIRE(key);
  DUET_REQUIRE(value);
  return guarded([&] { duetbench::apply_setting(config->cfg, key, value); });
}

duet_status duet_config_load_file(duet_config* config, const char* path) {
  DUET_REQUIRE(config);
  DUET_REQUIRE(path);
  return guarded([&] { duetbench::load_config_file(config->cfg, path); });
}

duet_status duet_config_validate(const duet_config* config) {
  DUET_REQUIRE(config);
  return guarded([&] { duetbench::validate(config->cfg); });
}

size_t duet_config_key_count(void) { return duetbench::config_keys().size(); }

const char* duet_config_key(size_t index) {
  static const std::vector<std::string> keys = duetbench::config_keys();
  return index < keys.size() ? keys[index].c_str() : nullptr;
}

duet_status duet_config_to_json(const duet_config* config, char* buf,
                                size_t capacity, size_t* needed) {
  DUET_REQUIRE(config);
  std::string text;
  const duet_status st =
      guarded([&] { text = duetbench::config_to_json(config->cfg); });
  return st != DUET_OK ? st : copy_out(text, buf, capacity, needed);
}

duet_status duet_run_experiment(const duet_config* config, duet_report** out) {
  DUET_REQUIRE(config);
  DUET_REQUIRE(out);
  *out = nullptr;
  return guarded([&] {
    auto report = std::make_unique<duet_report>();
    report->report = duetbench::run_experiment(config->cfg);
    *out = report.release();
  });
}

duet_status duet_analyze_raw_csv(const duet_config* config,
                                 const char* raw_csv_path, duet_report** out) {
  DUET_REQUIRE(config);
  DUET_REQUIRE(raw_csv_path);
  DUET_REQUIRE(out);
  *out = nullptr;
  return guarded([&] {
    auto report = std::make_unique<duet_report>();
    report->report = duetbench::analyze_measurements(
        config->cfg, duetbench::read_raw_csv(raw_csv_path));
    *out = report.release();
  });
}

void duet_report_destroy(duet_report* report) { delete report; }

duet_verdict duet_report_verdict(const duet_report* report) {
  return report != nullptr ? to_c(report->report.verdict)
                           : DUET_VERDICT_INCONCLUSIVE;
}

size_t duet_report_strategy_count(const duet_report* report) {
  return report != nullptr ? report->report.strategies.size() : 0;
}

duet_status duet_report_strategy(const duet_report* report, size_t index,
                                 duet_strategy_summary* out) {
  DUET_REQUIRE(report);
  DUET_REQUIRE(out);
  const auto& rows = report->report.strategies;
  if (index >= rows.size()) {
    return fail(DUET_ERR_RANGE, "strategy index out of range");
  }
  const duetbench::StrategyResult& r = rows[index];
  out->strategy = duetbench::to_string(r.strategy).data();
  out->median_change_pct = r.median_change_pct;
  out->ci = to_c(r.ci);
  out->verdict = to_c(r.verdict);
  out->measurements_total = r.measurements_total;
  out->measurements_after_filter = r.measurements_after_filter;
  out->pairs_total = r.pairs_total;
  out->pairs_after_filter = r.pairs_after_filter;
  out->sweep_points = r.sweep.size();
  return DUET_OK;
}

duet_status duet_report_sweep_point(const duet_report* report,
                                    size_t strategy_index, size_t point_index,
                                    uint64_t* n, double* width_pp) {
  DUET_REQUIRE(report);
  DUET_REQUIRE(n);
  DUET_REQUIRE(width_pp);
  const auto& rows = report->report.strategies;
  if (strategy_index >= rows.size() ||
      point_index >= rows[strategy_index].sweep.size()) {
    return fail(DUET_ERR_RANGE, "sweep point index out of range");
  }
  const duetbench::SweepPoint& p = rows[strategy_index].sweep[point_index];
  *n = p.n;
  *width_pp = p.width_pp;
  return DUET_OK;
}

duet_status duet_report_emit(const duet_report* report, const char* dir,
                             duet_format format) {
  DUET_REQUIRE(report);
  return guarded([&] {
    duetbench::emit_report(report->report,
                           format == DUET_FORMAT_CSV ? duetbench::ReportFormat::Csv
                                                     : duetbench::ReportFormat::Json,
                           dir != nullptr ? std::filesystem::path(dir)
                                          : report->report.config.output_dir);
  });
}

duet_status duet_report_summary_json(const duet_report* report,
                                     int include_timestamps, char* buf,
                                     size_t capacity, size_t* needed) {
  DUET_REQUIRE(report);
  std::string text;
  const duet_status st = guarded([&] {
    text = duetbench::summary_json(report->report, include_timestamps != 0);
  });
  return st != DUET_OK ? st : copy_out(text, buf, capacity, needed);
}

duet_status duet_relative_change(double t_a, double t_b, double* out) {
  DUET_REQUIRE(out);
  return guarded([&] { *out = duetbench::relative_change(t_a, t_b); });
}

duet_status duet_percentile_interval(const double* samples, size_t n,
                                     double level, duet_interval* out) {
  DUET_REQUIRE(out);
  if (samples == nullptr && n > 0) {
    return fail(DUET_ERR_NULL_ARGUMENT, "samples must not be NULL");
  }
  return guarded([&] {
    *out = to_c(duetbench::percentile_interval(
        std::span<const double>(samples, n), level));
  });
}

duet_status duet_bootstrap_ci(const double* changes, size_t n, double level,
                              size_t resamples, uint64_t seed,
                              duet_interval* out) {
  DUET_REQUIRE(out);
  if (changes == nullptr && n > 0) {
    return fail(DUET_ERR_NULL_ARGUMENT, "changes must not be NULL");
  }
  return guarded([&] {
    duetbench::Rng rng = duetbench::make_stream(seed);
    *out = to_c(duetbench::bootstrap_ci(std::span<const double>(changes, n),
                                        level, resamples, rng));
  });
}

duet_status duet_workload_run(const char* kind, uint64_t scale,
                              double regression_pct, uint64_t* checksum,
                              uint64_t* units_done) {
  DUET_REQUIRE(kind);
  DUET_REQUIRE(checksum);
  DUET_REQUIRE(units_done);
  return guarded([&] {
    const auto spec = duetbench::make_workload(
        duetbench::parse_workload_kind(kind), scale, "A", regression_pct);
    const duetbench::WorkResult result = duetbench::run_workload(spec);
    *checksum = result.checksum;
    *units_done = result.units_done;
  });
}

unsigned duet_available_cores(void) { return duetbench::available_cores(); }

}  // extern "C"
