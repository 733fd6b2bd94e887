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

#include "duetbench/workloads.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <random>
#include <vector>

#include "duetbench/error.hpp"

namespace duetbench {

namespace {

constexpr std::size_t kWeights = 64;
constexpr std::uint64_t kMutationSeed = 0x6d75746174696f6eULL;

// Hill-climbing mutation over a small single-layer network: perturb one
// weight, keep the change if the network output moved closer to the target.
WorkResult run_cpu_mutation(std::uint64_t iterations) {
  std::array<double, kWeights> weights{};
  std::array<double, kWeights> inputs{};
  for (std::size_t j = 0; j < kWeights; ++j) {
    weights[j] = 0.0;
    inputs[j] = static_cast<double>(j + 1) / kWeights;
  }
  constexpr double kTarget = 3.0;

  auto forward = [&] {
    double acc = 0.0;
    for (std::size_t j = 0; j < kWeights; ++j) acc += weights[j] * inputs[j];
    return std::tanh(acc);
  };

  std::mt19937_64 rng(kMutationSeed);
  double best_error = std::abs(kTarget - forward());
  std::uint64_t accepted = 0;
  for (std::uint64_t i = 0; i < iterations; ++i) {
    const std::uint64_t r = rng();
    const std::size_t idx = r & (kWeights - 1);
    const double delta =
        (static_cast<double>((r >> 16) & 0xffff) / 65536.0 - 0.5) * 0.02;
    const double previous = weights[idx];
    weights[idx] += delta;
    const double error = std::abs(kTarget - forward());
    if (error <= best_error) {
      best_error = error;
      ++accepted;
    } else {
      weights[idx] = previous;
    }
  }

  std::array<std::uint64_t, kWeights + 2> digest_input{};
  for (std::size_t j = 0; j < kWeights; ++j) {
    digest_input[j] = std::bit_cast<std::uint64_t>(weights[j]) ^ (j << 56);
  }
  digest_input[kWeights] = std::bit_cast<std::uint64_t>(best_error);
  digest_input[kWeights + 1] = accepted;
  return WorkResult{digest_values(digest_input), iterations};
}

WorkResult run_mem_sieve(std::uint64_t bound) {
  std::vector<std::uint8_t> composite(bound + 1, 0);
  for (std::uint64_t p = 2; p * p <= bound; ++p) {
    if (composite[p]) continue;
    for (std::uint64_t m = p * p; m <= bound; m += p) composite[m] = 1;
  }
  std::uint64_t checksum = 0;
  std::uint64_t count = 0;
  for (std::uint64_t n = 2; n <= bound; ++n) {
    if (!composite[n]) {
      checksum += mix64(n);
      ++count;
    }
  }
  return WorkResult{checksum, count};
}

}  // namespace

std::string_view to_string(WorkloadKind kind) noexcept {
  switch (kind) {
    case WorkloadKind::CpuMutation:
      return "cpu_mutation";
    case WorkloadKind::MemSieve:
      return "mem_sieve";
  }
  return "unknown";
}

WorkloadKind parse_workload_kind(std::string_view text) {
  if (text == "cpu_mutation" || text == "cpu" || text == "CpuMutation") {
    return WorkloadKind::CpuMutation;
  }
  if (text == "mem_sieve" || text == "mem" || text == "MemSieve") {
    return WorkloadKind::MemSieve;
  }
  throw Error(ErrorCode::InvalidWorkload,
              "unknown workload kind '" + std::string(text) + "'");
}

std::uint64_t mix64(std::uint64_t value) noexcept {
  // splitmix64 finalizer
  value += 0x9e3779b97f4a7c15ULL;
  value = (value ^ (value >> 30)) * 0xbf58476d1ce4e5b9ULL;
  value = (value ^ (value >> 27)) * 0x94d049bb133111ebULL;
  return value ^ (value >> 31);
}

std::uint64_t digest_values(std::span<const std::uint64_t> values) noexcept {
  std::uint64_t sum = 0;
  for (std::uint64_t v : values) sum += mix64(v);
  return sum;
}

WorkloadSpec make_workload(WorkloadKind kind, std::uint64_t scale,
                           std::string version_label, double regression_pct) {
  if (scale < 2) {
    throw Error(ErrorCode::InvalidWorkload,
                "workload scale must be >= 2, got " + std::to_string(scale));
  }
  if (!std::isfinite(regression_pct) || regression_pct < 0.0) {
    throw Error(ErrorCode::InvalidRegression,
                "regression_pct must be a finite value >= 0");
  }

  // Snap to the nearest integer when the product is within rounding error of
  // one, so 1e6 * 5% lands on 50000 instead of 49999.
  const long double extra =
      static_cast<long double>(scale) * regression_pct / 100.0L;
  const long double nearest = std::round(extra);
  const long double floored =
      std::abs(extra - nearest) <= 1e-9L * std::max(1.0L, nearest)
          ? nearest
          : std::floor(extra);

  WorkloadSpec spec;
  spec.kind_ = kind;
  spec.scale_ = scale;
  spec.version_label_ = std::move(version_label);
  spec.regression_pct_ = regression_pct;
  spec.effective_scale_ = scale + static_cast<std::uint64_t>(floored);
  return spec;
}

WorkResult run_workload(const WorkloadSpec& spec) {
  try {
    switch (spec.kind()) {
      case WorkloadKind::CpuMutation:
        return run_cpu_mutation(spec.effective_scale());
      case WorkloadKind::MemSieve:
        return run_mem_sieve(spec.effective_scale());
    }
  } catch (const std::bad_alloc&) {
    throw Error(ErrorCode::ExecutionError,
                "out of memory running workload of scale " +
                    std::to_string(spec.effective_scale()));
  }
  throw Error(ErrorCode::InvalidWorkload, "unknown workload kind");
}

}  // namespace duetbench
