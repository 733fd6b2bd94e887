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


#include "duetbench/strategies.hpp"

#include <algorithm>
#include <map>
#include <string>
#include <utility>

#include "duetbench/analysis.hpp"
#include "duetbench/error.hpp"

namespace duetbench {

namespace {

// Stream tags keep the noise, order and pairing streams of one run apart.
enum StreamTag : std::uint64_t { kNoiseStream = 1, kOrderStream = 2, kPairStream = 3 };

void check_config(const StrategyConfig& cfg, Strategy expected,
                  const WorkloadSpec& spec_a, const WorkloadSpec& spec_b) {
  if (cfg.strategy != expected) {
    throw Error(ErrorCode::InvalidArgument,
                "strategy config is for '" + std::string(to_string(cfg.strategy)) +
                    "', expected '" + std::string(to_string(expected)) + "'");
  }
  if (cfg.repetitions < 1) {
    throw Error(ErrorCode::InvalidArgument, "repetitions must be >= 1");
  }
  if (spec_a.version_label() == spec_b.version_label()) {
    throw Error(ErrorCode::InvalidArgument,
                "the two versions need distinct labels, both are '" +
                    spec_a.version_label() + "'");
  }
  if (cfg.backend == Backend::Simulated) cfg.model.validate();
}

MeasurementSet empty_set(const StrategyConfig& cfg, const WorkloadSpec& spec_a,
                         const WorkloadSpec& spec_b) {
  MeasurementSet set;
  set.config = cfg;
  set.label_a = spec_a.version_label();
  set.label_b = spec_b.version_label();
  set.measurements.reserve(2 * cfg.repetitions);
  return set;
}

ClockMode clock_for(const StrategyConfig& cfg) {
  return cfg.clock_override.value_or(default_clock_for(cfg.strategy));
}

void tag(Measurement& m, const StrategyConfig& cfg, std::uint64_t repetition) {
  m.strategy = cfg.strategy;
  m.clock_mode = clock_for(cfg);
  m.instance_id = cfg.instance_id;
  m.repetition = cfg.first_repetition + repetition;
}

// Live runs must reproduce the same work output on every invocation.
void record_result(std::optional<WorkResult>& slot, const WorkResult& result,
                   const std::string& label) {
  if (!slot) {
    slot = result;
  } else if (*slot != result) {
    throw Error(ErrorCode::ExecutionError,
                "version " + label + " produced a different work result");
  }
}

Rng noise_stream(const StrategyConfig& cfg) {
  return make_stream(cfg.seed, {kNoiseStream,
                                static_cast<std::uint64_t>(cfg.strategy),
                                static_cast<std::uint64_t>(cfg.instance_id)});
}

Measurement live_solo(Executor& executor, MeasurementSet& set,
                      const StrategyConfig& cfg, const WorkloadSpec& spec,
                      bool is_a) {
  SoloOutcome out = executor.solo_invoke(spec, std::nullopt, clock_for(cfg));
  record_result(is_a ? set.result_a : set.result_b, out.trace.result,
                spec.version_label());
  return std::move(out.measurement);
}

}  // namespace

std::string_view to_string(Backend backend) noexcept {
  return backend == Backend::Live ? "live" : "simulated";
}

Backend parse_backend(std::string_view text) {
  if (text == "live") return Backend::Live;
  if (text == "simulated" || text == "sim") return Backend::Simulated;
  throw Error(ErrorCode::ParseError,
              "unknown backend '" + std::string(text) + "'");
}

std::string_view to_string(IndependentPairing pairing) noexcept {
  return pairing == IndependentPairing::Index ? "index" : "random";
}

IndependentPairing parse_pairing(std::string_view text) {
  if (text == "index") return IndependentPairing::Index;
  if (text == "random") return IndependentPairing::Random;
  throw Error(ErrorCode::ParseError,
              "unknown pairing '" + std::string(text) + "'");
}

Rng rmit_order_stream(std::uint64_t seed, int instance_id) {
  return make_stream(seed, {kOrderStream,
                            static_cast<std::uint64_t>(Strategy::Rmit),
                            static_cast<std::uint64_t>(instance_id)});
}

MeasurementSet run_independent(const StrategyConfig& cfg,
                               const WorkloadSpec& spec_a,
                               const WorkloadSpec& spec_b) {
  check_config(cfg, Strategy::Independent, spec_a, spec_b);
  MeasurementSet set = empty_set(cfg, spec_a, spec_b);
  const WorkloadSpec* versions[2] = {&spec_a, &spec_b};

  if (cfg.backend == Backend::Live) {
    Executor executor(cfg.executor);
    for (int v = 0; v < 2; ++v) {
      for (std::uint64_t i = 0; i < cfg.repetitions; ++i) {
        Measurement m = live_solo(executor, set, cfg, *versions[v], v == 0);
        tag(m, cfg, i);
        set.measurements.push_back(std::move(m));
      }
    }
    return set;
  }

  Rng rng = noise_stream(cfg);
  std::vector<InstanceState> pool;
  for (unsigned p = 0; p < cfg.model.independent_pool_size; ++p) {
    pool.push_back(sample_instance(cfg.model, rng, cfg.instance_id));
  }
  std::uniform_int_distribution<std::size_t> route(0, pool.size() - 1);
  double t = 0.0;
  for (int v = 0; v < 2; ++v) {
    for (std::uint64_t i = 0; i < cfg.repetitions; ++i) {
      InstanceState& inst = pool[route(rng)];
      Measurement m = simulate_invocation(cfg.model, inst, *versions[v], t,
                                          std::nullopt, rng);
      tag(m, cfg, i);
      set.measurements.push_back(std::move(m));
      t = advance_time(t, cfg.model.time_step_s);
    }
  }
  return set;
}

MeasurementSet run_rmit(const StrategyConfig& cfg, const WorkloadSpec& spec_a,
                        const WorkloadSpec& spec_b) {
  check_config(cfg, Strategy::Rmit, spec_a, spec_b);
  MeasurementSet set = empty_set(cfg, spec_a, spec_b);
  Rng order = rmit_order_stream(cfg.seed, cfg.instance_id);
  std::bernoulli_distribution coin(0.5);

  std::optional<Executor> executor;
  Rng rng = noise_stream(cfg);
  InstanceState inst;
  if (cfg.backend == Backend::Live) {
    executor.emplace(cfg.executor);
  } else {
    inst = sample_instance(cfg.model, rng, cfg.instance_id);
  }

  double t = 0.0;
  for (std::uint64_t i = 0; i < cfg.repetitions; ++i) {
    const bool a_first = coin(order);
    const WorkloadSpec* sequence[2] = {a_first ? &spec_a : &spec_b,
                                       a_first ? &spec_b : &spec_a};
    for (int pos = 0; pos < 2; ++pos) {
      const WorkloadSpec& spec = *sequence[pos];
      Measurement m;
      if (executor) {
        m = live_solo(*executor, set, cfg, spec, &spec == &spec_a);
      } else {
        // The second invocation of a trial runs half a step later.
        const double when = t + pos * cfg.model.time_step_s / 2.0;
        m = simulate_invocation(cfg.model, inst, spec, when, std::nullopt, rng);
      }
      tag(m, cfg, i);
      m.order_position = pos;
      set.measurements.push_back(std::move(m));
    }
    t = advance_time(t, cfg.model.time_step_s);
  }
  return set;
}

MeasurementSet run_duet(const StrategyConfig& cfg, const WorkloadSpec& spec_a,
                        const WorkloadSpec& spec_b) {
  check_config(cfg, Strategy::Duet, spec_a, spec_b);
  MeasurementSet set = empty_set(cfg, spec_a, spec_b);

  if (cfg.backend == Backend::Live) {
    ExecutorOptions options = cfg.executor;
    if (cfg.clock_override) options.duet_clock = cfg.clock_override;
    Executor executor(options);
    if (executor.available_cores() < 2) {
      throw Error(ErrorCode::InsufficientCores,
                  "live duet needs at least 2 logical cores, host exposes " +
                      std::to_string(executor.available_cores()));
    }
    for (std::uint64_t i = 0; i < cfg.repetitions; ++i) {
      DuetOutcome out = executor.duet_invoke(spec_a, spec_b, cfg.core_plan);
      record_result(set.result_a, out.trace_a.result, spec_a.version_label());
      record_result(set.result_b, out.trace_b.result, spec_b.version_label());
      tag(out.a, cfg, i);
      tag(out.b, cfg, i);
      set.measurements.push_back(std::move(out.a));
      set.measurements.push_back(std::move(out.b));
    }
    return set;
  }

  Rng rng = noise_stream(cfg);
  InstanceState inst = sample_instance(cfg.model, rng, cfg.instance_id);
  double t = 0.0;
  for (std::uint64_t i = 0; i < cfg.repetitions; ++i) {
    auto [a, b] = simulate_duet(cfg.model, inst, spec_a, spec_b, t, rng);
    tag(a, cfg, i);
    tag(b, cfg, i);
    set.measurements.push_back(std::move(a));
    set.measurements.push_back(std::move(b));
    t = advance_time(t, cfg.model.time_step_s);
  }
  return set;
}

MeasurementSet run_strategy(const StrategyConfig& cfg,
                            const WorkloadSpec& spec_a,
                            const WorkloadSpec& spec_b) {
  switch (cfg.strategy) {
    case Strategy::Independent:
      return run_independent(cfg, spec_a, spec_b);
    case Strategy::Rmit:
      return run_rmit(cfg, spec_a, spec_b);
    case Strategy::Duet:
      return run_duet(cfg, spec_a, spec_b);
  }
  throw Error(ErrorCode::InvalidArgument, "unknown strategy");
}

std::vector<PairedSample> pair_measurements(const MeasurementSet& set,
                                            const PairingOptions& options) {
  using Key = std::pair<int, std::uint64_t>;
  struct Slot {
    const Measurement* a = nullptr;
    const Measurement* b = nullptr;
  };
  std::map<Key, Slot> slots;
  for (const Measurement& m : set.measurements) {
    Slot& slot = slots[{m.instance_id, m.repetition}];
    const Measurement** target = m.version_label == set.label_a   ? &slot.a
                                 : m.version_label == set.label_b ? &slot.b
                                                                  : nullptr;
    if (target == nullptr) {
      throw Error(ErrorCode::PairingError,
                  "measurement has unknown version label '" + m.version_label +
                      "'");
    }
    if (*target != nullptr) {
      throw Error(ErrorCode::PairingError,
                  "duplicate version " + m.version_label + " at instance " +
                      std::to_string(m.instance_id) + ", repetition " +
                      std::to_string(m.repetition));
    }
    *target = &m;
  }

  std::vector<std::pair<Key, Slot>> ordered(slots.begin(), slots.end());
  for (const auto& [key, slot] : ordered) {
    if (slot.a == nullptr || slot.b == nullptr) {
      throw Error(ErrorCode::PairingError,
                  "repetition " + std::to_string(key.second) + " on instance " +
                      std::to_string(key.first) + " lacks version " +
                      (slot.a == nullptr ? set.label_a : set.label_b));
    }
  }

  const bool shuffle = options.independent == IndependentPairing::Random &&
                       set.config.strategy == Strategy::Independent;
  if (shuffle) {
    // Shuffle B partners within each instance, keeping instance blocks apart.
    Rng rng = make_stream(options.seed, {kPairStream});
    for (std::size_t begin = 0; begin < ordered.size();) {
      std::size_t end = begin;
      while (end < ordered.size() &&
             ordered[end].first.first == ordered[begin].first.first) {
        ++end;
      }
      std::vector<const Measurement*> partners;
      for (std::size_t i = begin; i < end; ++i) {
        partners.push_back(ordered[i].second.b);
      }
      std::shuffle(partners.begin(), partners.end(), rng);
      for (std::size_t i = begin; i < end; ++i) {
        ordered[i].second.b = partners[i - begin];
      }
      begin = end;
    }
  }

  std::vector<PairedSample> pairs;
  pairs.reserve(ordered.size());
  for (const auto& [key, slot] : ordered) {
    pairs.push_back({key.first, key.second,
                     relative_change(static_cast<double>(slot.a->duration_ns),
                                     static_cast<double>(slot.b->duration_ns))});
  }
  return pairs;
}

}  // namespace duetbench
