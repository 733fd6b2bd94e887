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


#include <algorithm>
#include <chrono>
#include <ctime>
#include <future>
#include <string>
#include <utility>

#include "duetbench/error.hpp"
#include "duetbench/executor.hpp"
#include "duetbench/harness.hpp"

namespace duetbench {

namespace {

enum AnalysisStream : std::uint64_t { kBootstrapStream = 101, kSweepStream = 102 };

std::string utc_timestamp() {
  const std::time_t now =
      std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

CorePlan plan_for_instance(int instance_id, unsigned cores) {
  if (cores < 2) return CorePlan{0, 1};
  const unsigned a = (2u * static_cast<unsigned>(instance_id)) % cores;
  unsigned b = (a + 1) % cores;
  return CorePlan{a, b};
}

Measurements run_fan_out(const ExperimentConfig& cfg, Strategy strategy,
                         const WorkloadSpec& spec_a, const WorkloadSpec& spec_b) {
  const std::vector<std::uint64_t> shares =
      repetitions_per_instance(cfg.repetitions, cfg.instances);
  const unsigned cores = cfg.backend == Backend::Live ? available_cores() : 2;

  std::vector<StrategyConfig> jobs;
  std::uint64_t offset = 0;
  for (unsigned i = 0; i < shares.size(); ++i) {
    if (shares[i] == 0) continue;
    StrategyConfig sc;
    sc.strategy = strategy;
    sc.repetitions = shares[i];
    sc.seed = cfg.seed;
    sc.backend = cfg.backend;
    sc.instance_id = static_cast<int>(i);
    sc.first_repetition = offset;
    sc.model = cfg.model;
    sc.executor.pin = cfg.pin;
    sc.executor.allow_unpinned = cfg.allow_unpinned;
    sc.core_plan = plan_for_instance(sc.instance_id, cores);
    sc.clock_override = cfg.clock_override;
    jobs.push_back(sc);
    offset += shares[i];
  }

  std::vector<MeasurementSet> parts;
  // Live instances share this host's cores, so they run one after another.
  if (cfg.backend == Backend::Simulated && cfg.parallel_instances &&
      jobs.size() > 1) {
    std::vector<std::future<MeasurementSet>> futures;
    for (const StrategyConfig& sc : jobs) {
      futures.push_back(std::async(std::launch::async, [&, sc] {
        return run_strategy(sc, spec_a, spec_b);
      }));
    }
    for (auto& f : futures) parts.push_back(f.get());
  } else {
    for (const StrategyConfig& sc : jobs) {
      parts.push_back(run_strategy(sc, spec_a, spec_b));
    }
  }

  Measurements merged;
  merged.reserve(2 * cfg.repetitions);
  for (MeasurementSet& part : parts) {
    std::move(part.measurements.begin(), part.measurements.end(),
              std::back_inserter(merged));
  }
  return merged;
}

std::uint64_t effective_sweep_end(const ExperimentConfig& cfg,
                                  std::size_t available) {
  std::uint64_t to = std::min<std::uint64_t>(cfg.sweep_to, available);
  if (to < cfg.sweep_from) return to;
  return cfg.sweep_from + (to - cfg.sweep_from) / cfg.sweep_step * cfg.sweep_step;
}

StrategyResult analyze_strategy(const ExperimentConfig& cfg, Strategy strategy,
                                Measurements raw) {
  StrategyResult result;
  result.strategy = strategy;

  MeasurementSet set;
  set.config.strategy = strategy;
  set.config.seed = cfg.seed;
  set.config.backend = cfg.backend;
  set.measurements = std::move(raw);

  const PairingOptions pairing{cfg.pairing, cfg.seed};
  result.measurements_total = set.measurements.size();
  result.pairs_total = pair_measurements(set, pairing).size();

  const MeasurementSet warm = filter_cold_starts(set);
  result.measurements_after_filter = warm.measurements.size();
  const std::vector<PairedSample> pairs = pair_measurements(warm, pairing);
  result.pairs_after_filter = pairs.size();

  std::vector<double> changes;
  changes.reserve(pairs.size());
  for (const PairedSample& p : pairs) changes.push_back(p.change_pct);
  if (changes.empty()) {
    throw Error(ErrorCode::InsufficientSamples,
                std::string(to_string(strategy)) +
                    ": no complete pairs left after removing cold starts");
  }
  result.median_change_pct = median(changes);

  Rng boot = make_stream(cfg.seed, {kBootstrapStream,
                                    static_cast<std::uint64_t>(strategy)});
  result.ci = bootstrap_ci(std::span<const double>(changes), cfg.ci_level,
                           cfg.resamples, boot, cfg.min_sample_size);
  result.verdict = verdict(result.ci, cfg.threshold_pct);

  if (cfg.sweep) {
    result.sweep_to_effective = effective_sweep_end(cfg, pairs.size());
    Rng sweep_rng = make_stream(cfg.seed, {kSweepStream,
                                           static_cast<std::uint64_t>(strategy)});
    result.sweep = sweep_sample_size(pairs, cfg.sweep_from,
                                     result.sweep_to_effective, cfg.sweep_step,
                                     cfg.ci_level, cfg.sweep_resamples,
                                     sweep_rng, cfg.min_sample_size);
  }
  result.raw = std::move(set.measurements);
  return result;
}

}  // namespace

Report analyze_measurements(const ExperimentConfig& cfg,
                            const Measurements& raw) {
  validate(cfg);
  std::vector<Strategy> present;
  for (const Measurement& m : raw) {
    if (std::find(present.begin(), present.end(), m.strategy) == present.end()) {
      present.push_back(m.strategy);
    }
  }
  if (present.empty()) {
    throw Error(ErrorCode::EmptySamples, "no measurements to analyze");
  }

  Report report;
  report.config = cfg;
  report.config.strategies = present;
  for (Strategy s : present) {
    Measurements subset;
    for (const Measurement& m : raw) {
      if (m.strategy == s) subset.push_back(m);
    }
    report.strategies.push_back(analyze_strategy(cfg, s, std::move(subset)));
  }
  report.verdict = report.strategies.front().verdict;
  return report;
}

Report run_experiment(const ExperimentConfig& cfg) {
  validate(cfg);
  const std::string started = utc_timestamp();
  const WorkloadSpec spec_a = make_workload(cfg.workload, cfg.scale, "A", 0.0);
  const WorkloadSpec spec_b =
      make_workload(cfg.workload, cfg.scale, "B", cfg.regression_pct);

  Measurements raw;
  for (Strategy s : cfg.strategies) {
    Measurements part = run_fan_out(cfg, s, spec_a, spec_b);
    std::move(part.begin(), part.end(), std::back_inserter(raw));
  }
  Report report = analyze_measurements(cfg, raw);
  report.started_at = started;
  report.finished_at = utc_timestamp();
  return report;
}

Report compare_strategies(const ExperimentConfig& cfg) {
  return run_experiment(cfg);
}

std::vector<ComparisonRow> comparison_table(const Report& report) {
  std::vector<ComparisonRow> rows;
  for (const StrategyResult& r : report.strategies) {
    rows.push_back({r.strategy, r.ci.width_pp, r.median_change_pct});
  }
  return rows;
}

int exit_code_for(Verdict verdict) noexcept {
  switch (verdict) {
    case Verdict::Pass: return 0;
    case Verdict::Regression: return 1;
    case Verdict::Inconclusive: return 3;
  }
  return kErrorExitCode;
}

}  // namespace duetbench
