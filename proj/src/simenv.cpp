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


#include "duetbench/simenv.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "duetbench/error.hpp"

namespace duetbench {

namespace {

Measurement make_simulated(const VariabilityModel& model,
                           const InstanceState& inst, const WorkloadSpec& spec,
                           double t_seconds, double noise, bool cold) {
  const double work = static_cast<double>(spec.effective_scale()) *
                      model.base_cost_ns_per_unit;
  double ns = work * inst.quality * drift(model, inst, t_seconds) * noise;
  if (cold) ns += model.cold_penalty_ms * 1e6;

  Measurement m;
  m.duration_ns = std::max<std::uint64_t>(
      1, static_cast<std::uint64_t>(std::llround(ns)));
  m.version_label = spec.version_label();
  m.instance_id = inst.instance_id;
  m.cold = cold;
  return m;
}

void require_non_negative(double value, const char* name) {
  if (!(value >= 0.0) || !std::isfinite(value)) {
    throw Error(ErrorCode::InvalidConfig,
                std::string(name) + " must be a finite value >= 0");
  }
}

}  // namespace

void VariabilityModel::validate() const {
  require_non_negative(instance_quality_cv, "instance_quality_cv");
  require_non_negative(temporal_sigma, "temporal_sigma");
  require_non_negative(cold_penalty_ms, "cold_penalty_ms");
  require_non_negative(drift_amplitude, "drift_amplitude");
  require_non_negative(duet_residual_cv, "duet_residual_cv");
  require_non_negative(time_step_s, "time_step_s");
  if (!(base_cost_ns_per_unit > 0.0) || !std::isfinite(base_cost_ns_per_unit)) {
    throw Error(ErrorCode::InvalidConfig, "base_cost_ns_per_unit must be > 0");
  }
  if (!(drift_period_s > 0.0) || !std::isfinite(drift_period_s)) {
    throw Error(ErrorCode::InvalidConfig, "drift_period_s must be > 0");
  }
  if (drift_amplitude >= 1.0) {
    throw Error(ErrorCode::InvalidConfig, "drift_amplitude must be < 1");
  }
  if (independent_pool_size < 1) {
    throw Error(ErrorCode::InvalidConfig, "independent_pool_size must be >= 1");
  }
}

VariabilityModel VariabilityModel::noise_free() {
  VariabilityModel m;
  m.instance_quality_cv = 0.0;
  m.temporal_sigma = 0.0;
  m.cold_penalty_ms = 0.0;
  m.drift_amplitude = 0.0;
  m.duet_residual_cv = 0.0;
  return m;
}

double lognormal_from_cv(double cv, Rng& rng) {
  if (cv <= 0.0) return 1.0;
  const double sigma = std::sqrt(std::log1p(cv * cv));
  return std::exp(std::normal_distribution<double>(0.0, sigma)(rng));
}

InstanceState sample_instance(const VariabilityModel& model, Rng& rng,
                              int instance_id) {
  InstanceState inst;
  inst.instance_id = instance_id;
  inst.quality = std::clamp(lognormal_from_cv(model.instance_quality_cv, rng),
                            kMinQuality, kMaxQuality);
  inst.invocations_served = 0;
  inst.drift_phase =
      model.drift_amplitude > 0.0
          ? std::uniform_real_distribution<double>(0.0, 2 * std::numbers::pi)(
                rng)
          : 0.0;
  return inst;
}

NoiseDraw draw_noise(const VariabilityModel& model, Rng& rng) {
  if (model.temporal_sigma <= 0.0) return NoiseDraw{1.0};
  return NoiseDraw{std::exp(
      std::normal_distribution<double>(0.0, model.temporal_sigma)(rng))};
}

double drift(const VariabilityModel& model, const InstanceState& inst,
             double t_seconds) {
  if (model.drift_amplitude == 0.0) return 1.0;
  const double cycle = std::fmod(t_seconds, model.drift_period_s) /
                       model.drift_period_s;
  return 1.0 + model.drift_amplitude *
                   std::sin(2 * std::numbers::pi * cycle + inst.drift_phase);
}

Measurement simulate_invocation(const VariabilityModel& model,
                                InstanceState& inst, const WorkloadSpec& spec,
                                double t_seconds,
                                std::optional<NoiseDraw> shared_draw,
                                Rng& rng) {
  const NoiseDraw noise = shared_draw ? *shared_draw : draw_noise(model, rng);
  const bool cold = inst.invocations_served == 0;
  Measurement m =
      make_simulated(model, inst, spec, t_seconds, noise.multiplier, cold);
  ++inst.invocations_served;
  return m;
}

std::pair<Measurement, Measurement> simulate_duet(
    const VariabilityModel& model, InstanceState& inst,
    const WorkloadSpec& spec_a, const WorkloadSpec& spec_b, double t_seconds,
    Rng& rng) {
  const NoiseDraw shared = draw_noise(model, rng);
  const double jitter_a = lognormal_from_cv(model.duet_residual_cv, rng);
  const double jitter_b = lognormal_from_cv(model.duet_residual_cv, rng);
  const bool cold = inst.invocations_served == 0;
  Measurement a = make_simulated(model, inst, spec_a, t_seconds,
                                 shared.multiplier * jitter_a, cold);
  Measurement b = make_simulated(model, inst, spec_b, t_seconds,
                                 shared.multiplier * jitter_b, cold);
  inst.invocations_served += 2;
  return {std::move(a), std::move(b)};
}

double advance_time(double t_seconds, double dt_seconds) {
  if (!(dt_seconds >= 0.0)) {
    throw Error(ErrorCode::InvalidArgument,
                "virtual time step must be >= 0");
  }
  return t_seconds + dt_seconds;
}

}  // namespace duetbench
