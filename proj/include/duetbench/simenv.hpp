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
#include <utility>

#include "duetbench/measurement.hpp"
#include "duetbench/rng.hpp"
#include "duetbench/workloads.hpp"

namespace duetbench {

/**
 * Multiplicative noise model of a FaaS platform.
 *
 *   duration = effective_scale * base_cost * quality * drift(t) * noise
 *              (+ cold_penalty on an instance's first invocation)
 *
 * quality is drawn once per instance (lognormal, median 1, truncated to
 * [0.5, 2.0]); drift is a slow per-instance sinusoid in virtual time; noise is
 * a lognormal per-draw factor. Duet hands both versions the same noise draw
 * and adds only a small residual jitter per worker.
 */
struct VariabilityModel {
  double instance_quality_cv = 0.15;
  double temporal_sigma = 0.05;  // log-space std-dev of the per-draw factor
  double cold_penalty_ms = 150.0;
  double base_cost_ns_per_unit = 10.0;
  double drift_period_s = 300.0;
  double drift_amplitude = 0.02;
  double duet_residual_cv = 0.002;
  double time_step_s = 0.1;  // virtual time per repetition
  // Instances the platform routes independent invocations across.
  unsigned independent_pool_size = 16;

  // Throws Error{InvalidConfig} on negative rates or non-positive periods.
  void validate() const;

  // All variability off: every duration is effective_scale * base_cost.
  static VariabilityModel noise_free();
};

inline constexpr double kMinQuality = 0.5;
inline constexpr double kMaxQuality = 2.0;

struct InstanceState {
  int instance_id = 0;
  double quality = 1.0;
  std::uint64_t invocations_served = 0;
  double drift_phase = 0.0;  // radians
};

struct NoiseDraw {
  double multiplier = 1.0;
};

// Lognormal with median 1 and the given coefficient of variation; exactly 1
// for cv == 0 (no draw is consumed).
double lognormal_from_cv(double cv, Rng& rng);

InstanceState sample_instance(const VariabilityModel& model, Rng& rng,
                              int instance_id = 0);

NoiseDraw draw_noise(const VariabilityModel& model, Rng& rng);

double drift(const VariabilityModel& model, const InstanceState& inst,
             double t_seconds);

/**
 * One simulated invocation at virtual time `t_seconds`. Uses `shared_draw`
 * when given, otherwise draws fresh noise from `rng`. Marks the measurement
 * cold and adds the penalty iff the instance had served nothing yet.
 *
 * The returned measurement carries the spec's version label and default
 * strategy/clock tags; callers re-tag it.
 */
Measurement simulate_invocation(const VariabilityModel& model,
                                InstanceState& inst, const WorkloadSpec& spec,
                                double t_seconds,
                                std::optional<NoiseDraw> shared_draw, Rng& rng);

// Both versions co-run on `inst`: one shared draw, times an independent
// residual jitter per worker. Both halves are cold on a fresh instance.
std::pair<Measurement, Measurement> simulate_duet(
    const VariabilityModel& model, InstanceState& inst,
    const WorkloadSpec& spec_a, const WorkloadSpec& spec_b, double t_seconds,
    Rng& rng);

// Throws Error{InvalidArgument} for dt < 0.
double advance_time(double t_seconds, double dt_seconds);

}  // namespace duetbench
