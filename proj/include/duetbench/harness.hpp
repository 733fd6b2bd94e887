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


#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "duetbench/analysis.hpp"
#include "duetbench/measurement.hpp"
#include "duetbench/simenv.hpp"
#include "duetbench/strategies.hpp"
#include "duetbench/workloads.hpp"

namespace duetbench {

// Defaults follow the reference experiment: 1,500 repetitions, a 99% CI,
// and a 50..1,500 step-5 sample-size sweep.
struct ExperimentConfig {
  std::vector<Strategy> strategies{Strategy::Duet};
  Backend backend = Backend::Simulated;
  std::uint64_t repetitions = 1500;
  unsigned instances = 4;
  std::uint64_t seed = 42;

  WorkloadKind workload = WorkloadKind::CpuMutation;
  std::uint64_t scale = 100'000;
  double regression_pct = 0.0;

  double ci_level = 0.99;
  std::size_t resamples = kDefaultResamples;
  double threshold_pct = 1.0;
  std::size_t min_sample_size = kDefaultMinSampleSize;
  IndependentPairing pairing = IndependentPairing::Index;

  bool sweep = false;
  std::uint64_t sweep_from = 50;
  std::uint64_t sweep_to = 1500;
  std::uint64_t sweep_step = 5;
  std::size_t sweep_resamples = kMinResamples;

  std::filesystem::path output_dir = ".";

  VariabilityModel model;

  bool pin = true;
  bool allow_unpinned = false;
  std::optional<ClockMode> clock_override;
  bool parallel_instances = true;
};

// Throws Error{InvalidConfig}.
void validate(const ExperimentConfig& cfg);

/**
 * Sets one field from its textual form. Keys are the flag names of the CLI
 * and the keys of the config file, e.g. "repetitions", "strategies"
 * (comma-separated), "cold_penalty_ms", "clock" (cpu|wall|default).
 *
 * Throws Error{InvalidConfig} for unknown keys or unparsable values.
 */
void apply_setting(ExperimentConfig& cfg, std::string_view key,
                   std::string_view value);

std::vector<std::string> config_keys();

// JSON object with the keys accepted by apply_setting.
void load_config_file(ExperimentConfig& cfg, const std::filesystem::path& path);
void load_config_json(ExperimentConfig& cfg, std::string_view json_text);
std::string config_to_json(const ExperimentConfig& cfg);

// Instance i's share of the repetitions: ceil(total / instances) each, the
// last ones truncated so the shares sum to total.
std::vector<std::uint64_t> repetitions_per_instance(std::uint64_t total,
                                                    unsigned instances);

struct StrategyResult {
  Strategy strategy = Strategy::Duet;
  std::size_t measurements_total = 0;
  std::size_t measurements_after_filter = 0;
  std::size_t pairs_total = 0;
  std::size_t pairs_after_filter = 0;
  double median_change_pct = 0.0;
  ConfidenceInterval ci;
  Verdict verdict = Verdict::Inconclusive;
  std::vector<SweepPoint> sweep;
  std::uint64_t sweep_to_effective = 0;
  Measurements raw;  // merged, before cold filtering
};

struct Report {
  ExperimentConfig config;
  std::vector<StrategyResult> strategies;
  // The first configured strategy gates the pipeline.
  Verdict verdict = Verdict::Inconclusive;
  std::string started_at;
  std::string finished_at;
};

// Runs every configured strategy across the instance fan-out, then analyzes
// the merged measurements with analyze_measurements.
Report run_experiment(const ExperimentConfig& cfg);

// Same as run_experiment; kept separate for the tabulating callers.
Report compare_strategies(const ExperimentConfig& cfg);

struct ComparisonRow {
  Strategy strategy = Strategy::Duet;
  double width_pp = 0.0;
  double median_change_pct = 0.0;
};
std::vector<ComparisonRow> comparison_table(const Report& report);

// The deterministic analysis half of an experiment: cold filter, pairing,
// bootstrap and optional sweep, seeded from cfg.seed and the strategy. Raw
// measurements may hold several strategies.
Report analyze_measurements(const ExperimentConfig& cfg,
                            const Measurements& raw);

enum class ReportFormat { Json, Csv };
ReportFormat parse_report_format(std::string_view text);

std::string summary_json(const Report& report, bool include_timestamps = true);
std::string summary_csv(const Report& report);
std::string raw_csv(const Report& report);
std::string sweep_csv(const Report& report);

Measurements parse_raw_csv(std::string_view text);
Measurements read_raw_csv(const std::filesystem::path& path);

struct EmittedFiles {
  std::filesystem::path summary;
  std::filesystem::path raw;
  std::optional<std::filesystem::path> sweep;
};

// Writes summary.{json,csv}, raw.csv and, when any strategy swept,
// sweep.csv into `dir`. Throws Error{InvalidArgument} for a report without
// strategies and Error{IoError} on write failures.
EmittedFiles emit_report(const Report& report, ReportFormat format,
                         const std::filesystem::path& dir);

// Process exit code for a verdict: 0 pass, 1 regression, 3 inconclusive.
// Errors map to 2.
int exit_code_for(Verdict verdict) noexcept;
inline constexpr int kErrorExitCode = 2;

}  // namespace duetbench
