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

#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <exception>
#include <mutex>
#include <optional>
#include <vector>

#include "duetbench/measurement.hpp"
#include "duetbench/workloads.hpp"

namespace duetbench {

// Setting this environment variable to a non-empty value other than "0"
// turns off CPU pinning for every executor (CI runners without affinity
// rights).
inline constexpr const char* kNoPinEnvVar = "DUETBENCH_NO_PIN";

bool pinning_disabled_by_env();

// Number of logical cores this process may be pinned to.
unsigned available_cores();

// Core indices are positions in the process's allowed CPU set, so index 0 is
// the first CPU the process may run on, not necessarily CPU 0.
struct CorePlan {
  unsigned core_a = 0;
  unsigned core_b = 1;
};

struct ExecutorOptions {
  bool pin = true;
  // Run unpinned instead of failing when the platform refuses affinity.
  bool allow_unpinned = false;
  // Caps the core count the executor reports; mainly for exercising the
  // insufficient-cores path on large hosts.
  std::optional<unsigned> core_limit;
  std::chrono::milliseconds barrier_timeout{5000};
  // Forces the clock used by duet_invoke (default: CpuTime).
  std::optional<ClockMode> duet_clock;
};

std::int64_t steady_now_ns();

/**
 * Two-phase ready/go rendezvous between one coordinator and `workers`
 * threads. Workers arrive (optionally carrying a setup failure) and block;
 * the coordinator releases them all at once after every worker arrived.
 */
class StartGate {
 public:
  explicit StartGate(int workers) : workers_(workers) {}

  // Worker side. Returns true once released, false if the gate was aborted.
  bool arrive_and_wait(std::exception_ptr failure = nullptr);

  // Coordinator side. Waits up to `timeout` for all workers, then records
  // the release time and opens the gate. On timeout or a worker failure the
  // gate is aborted and Error{BarrierTimeout} or the failure is thrown.
  std::int64_t release(std::chrono::milliseconds timeout);

  void abort();

 private:
  std::mutex mu_;
  std::condition_variable cv_;
  const int workers_;
  int arrived_ = 0;
  bool open_ = false;
  bool aborted_ = false;
  std::exception_ptr failure_;
};

struct WorkerTrace {
  std::int64_t ready_ns = 0;  // steady clock, when the worker signalled ready
  std::int64_t start_ns = 0;  // steady clock, right before work began
  std::int64_t end_ns = 0;
  std::uint64_t cpu_ns = 0;
  std::uint64_t wall_ns = 0;
  bool pinned = false;
  std::vector<unsigned> affinity;  // OS CPU ids the worker was allowed on
  WorkResult result;
};

struct DuetOutcome {
  Measurement a;
  Measurement b;
  std::int64_t release_ns = 0;  // steady clock, when the coordinator said go
  WorkerTrace trace_a;
  WorkerTrace trace_b;
};

struct SoloOutcome {
  Measurement measurement;
  WorkerTrace trace;
};

/**
 * Runs live workload invocations on this host.
 *
 * duet_invoke starts two worker threads, pins each to its own core, and
 * releases them together through a ready/go rendezvous owned by the calling
 * (coordinator) thread. Every call re-synchronizes; workers never outlive the
 * call. Both workers share the process address space.
 *
 * Not thread-safe: one caller at a time per executor. Executors running
 * concurrently must use disjoint core plans.
 */
class Executor {
 public:
  explicit Executor(ExecutorOptions options = {});

  unsigned available_cores() const noexcept { return core_count_; }
  bool pinning_enabled() const noexcept { return pin_; }
  const ExecutorOptions& options() const noexcept { return options_; }

  // Returned measurements are ordered (a, b) and tagged Strategy::Duet.
  DuetOutcome duet_invoke(const WorkloadSpec& spec_a,
                          const WorkloadSpec& spec_b, CorePlan plan);

  // Runs on the calling thread when `core` is empty, otherwise on a worker
  // pinned to that core. The measurement is tagged Strategy::Independent;
  // callers re-tag it.
  SoloOutcome solo_invoke(const WorkloadSpec& spec,
                          std::optional<unsigned> core, ClockMode clock);

 private:
  unsigned os_cpu_for(unsigned core_index) const;

  ExecutorOptions options_;
  std::vector<unsigned> allowed_cpus_;
  unsigned core_count_ = 1;
  bool pin_ = true;
};

}  // namespace duetbench
