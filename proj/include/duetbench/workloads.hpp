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
#include <span>
#include <string>
#include <string_view>

namespace duetbench {

enum class WorkloadKind { CpuMutation, MemSieve };

std::string_view to_string(WorkloadKind kind) noexcept;
WorkloadKind parse_workload_kind(std::string_view text);

/**
 * A deterministic unit of work plus the version it stands for.
 *
 * Version B of an A/B comparison is the same workload with `regression_pct`
 * percent more work: more mutation iterations for CpuMutation, a higher
 * sieve bound for MemSieve. The code path never changes.
 */
class WorkloadSpec {
 public:
  WorkloadKind kind() const noexcept { return kind_; }
  std::uint64_t scale() const noexcept { return scale_; }
  const std::string& version_label() const noexcept { return version_label_; }
  double regression_pct() const noexcept { return regression_pct_; }

  // floor(scale * (1 + regression_pct / 100))
  std::uint64_t effective_scale() const noexcept { return effective_scale_; }

  friend bool operator==(const WorkloadSpec&, const WorkloadSpec&) = default;

 private:
  friend WorkloadSpec make_workload(WorkloadKind, std::uint64_t, std::string,
                                    double);

  WorkloadKind kind_ = WorkloadKind::CpuMutation;
  std::uint64_t scale_ = 0;
  std::string version_label_;
  double regression_pct_ = 0.0;
  std::uint64_t effective_scale_ = 0;
};

struct WorkResult {
  std::uint64_t checksum = 0;
  std::uint64_t units_done = 0;

  friend bool operator==(const WorkResult&, const WorkResult&) = default;
};

// Throws Error{InvalidWorkload} for scale < 2 and Error{InvalidRegression}
// for a negative or non-finite regression_pct.
WorkloadSpec make_workload(WorkloadKind kind, std::uint64_t scale,
                           std::string version_label, double regression_pct);

// Pure; touches only invocation-local memory, so two threads may run it
// concurrently.
WorkResult run_workload(const WorkloadSpec& spec);

// Order-independent digest: wrapping sum of a 64-bit mix of each value.
std::uint64_t digest_values(std::span<const std::uint64_t> values) noexcept;
std::uint64_t mix64(std::uint64_t value) noexcept;

}  // namespace duetbench
