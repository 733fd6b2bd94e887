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
#include <optional>
#include <string_view>

#include "duetbench/executor.hpp"
#include "duetbench/measurement.hpp"
#include "duetbench/simenv.hpp"
#include "duetbench/workloads.hpp"

namespace duetbench {

enum class Backend { Live, Simulated };
enum class IndependentPairing { Index, Random };

std::string_view to_string(Backend backend) noexcept;
Backend parse_backend(std::string_view text);
std::string_view to_string(IndependentPairing pairing) noexcept;
IndependentPairing parse_pairing(std::string_view text);

// One strategy run on one (possibly simulated) instance.
struct StrategyConfig {
  Strategy strategy = Strategy::Duet;
  std::uint64_t repetitions = 1500;
  std::uint64_t seed = 0;
  Backend backend = Backend::Simulated;

  // Fan-out context: measurements get this instance id and repetition
  // indices starting at first_repetition.
  int instance_id = 0;
  std::uint64_t first_repetition = 0;

  VariabilityModel model;      // simulated backend
  ExecutorOptions executor;    // live backend
  CorePlan core_plan;          // live duet
  std::optional<ClockMode> clock_override;
};

struct MeasurementSet {
  Measurements measurements;
  StrategyConfig config;
  std::string label_a = "A";
  std::string label_b = "B";
  // Live backend only: the (identical) result of every A and every B run.
  std::optional<WorkResult> result_a;
  std::optional<WorkResult> result_b;
};

// All A invocations, then all B invocations, each alone. Simulated
// invocations are routed across a pool of platform instances.
MeasurementSet run_independent(const StrategyConfig& cfg,
                               const WorkloadSpec& spec_a,
                               const WorkloadSpec& spec_b);

// One trial per repetition; a seeded fair coin picks AB or BA. Both
// invocations of a trial run back to back on the same instance.
MeasurementSet run_rmit(const StrategyConfig& cfg, const WorkloadSpec& spec_a,
                        const WorkloadSpec& spec_b);

// One synchronized parallel (A, B) invocation per repetition.
MeasurementSet run_duet(const StrategyConfig& cfg, const WorkloadSpec& spec_a,
                        const WorkloadSpec& spec_b);

// Dispatches on cfg.strategy.
MeasurementSet run_strategy(const StrategyConfig& cfg,
                            const WorkloadSpec& spec_a,
                            const WorkloadSpec& spec_b);

// The order stream RMIT draws its coin flips from. Exposed so tests can
// check the flip sequence independently of any backend.
Rng rmit_order_stream(std::uint64_t seed, int instance_id);

struct PairingOptions {
  IndependentPairing independent = IndependentPairing::Index;
  std::uint64_t seed = 0;  // for IndependentPairing::Random
};

/**
 * Pairs A and B measurements sharing (instance_id, repetition) and returns
 * their relative changes, sorted by (instance_id, repetition).
 *
 * For independent sets, repetition i of a version is its i-th invocation on
 * that instance, so the default is index-order pairing. With
 * IndependentPairing::Random, B partners are shuffled within each instance.
 *
 * Throws Error{PairingError} when a key lacks a partner or is duplicated.
 */
std::vector<PairedSample> pair_measurements(const MeasurementSet& set,
                                            const PairingOptions& options = {});

}  // namespace duetbench
