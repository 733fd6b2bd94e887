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


#include "duetbench/executor.hpp"

#include <pthread.h>
#include <sched.h>
#include <time.h>

#include <algorithm>
#include <cstdlib>
#include <cstring>
#include <exception>
#include <string>
#include <thread>

#include "duetbench/error.hpp"

namespace duetbench {

namespace {

std::uint64_t thread_cpu_ns() {
  timespec ts{};
  if (clock_gettime(CLOCK_THREAD_CPUTIME_ID, &ts) != 0) {
    throw Error(ErrorCode::ExecutionError, "CLOCK_THREAD_CPUTIME_ID failed");
  }
  return static_cast<std::uint64_t>(ts.tv_sec) * 1'000'000'000ULL +
         static_cast<std::uint64_t>(ts.tv_nsec);
}

std::vector<unsigned> current_affinity() {
  std::vector<unsigned> cpus;
#ifdef __linux__
  cpu_set_t set;
  CPU_ZERO(&set);
  if (sched_getaffinity(0, sizeof(set), &set) == 0) {
    for (unsigned cpu = 0; cpu < CPU_SETSIZE; ++cpu) {
      if (CPU_ISSET(cpu, &set)) cpus.push_back(cpu);
    }
  }
#endif
  if (cpus.empty()) {
    const unsigned n = std::max(1u, std::thread::hardware_concurrency());
    for (unsigned cpu = 0; cpu < n; ++cpu) cpus.push_back(cpu);
  }
  return cpus;
}

// Pins the calling thread. Throws AffinityUnsupported where the platform has
// no affinity call and AffinityError when the OS rejects the request.
void pin_current_thread(unsigned os_cpu) {
#ifdef __linux__
  cpu_set_t set;
  CPU_ZERO(&set);
  CPU_SET(os_cpu, &set);
  const int rc = pthread_setaffinity_np(pthread_self(), sizeof(set), &set);
  if (rc != 0) {
    throw Error(ErrorCode::AffinityError,
                "pthread_setaffinity_np(cpu " + std::to_string(os_cpu) +
                    ") failed: " + std::strerror(rc));
  }
#else
  (void)os_cpu;
  throw Error(ErrorCode::AffinityUnsupported,
              "thread affinity is not supported on this platform");
#endif
}

// Timed run of one workload on the calling thread. Wall brackets CPU so
// cpu_ns <= wall_ns up to clock granularity.
void timed_run(const WorkloadSpec& spec, WorkerTrace& trace) {
  trace.start_ns = steady_now_ns();
  const std::uint64_t cpu0 = thread_cpu_ns();
  trace.result = run_workload(spec);
  const std::uint64_t cpu1 = thread_cpu_ns();
  trace.end_ns = steady_now_ns();
  trace.cpu_ns = cpu1 - cpu0;
  trace.wall_ns = static_cast<std::uint64_t>(trace.end_ns - trace.start_ns);
}

Measurement to_measurement(const WorkloadSpec& spec, const WorkerTrace& trace,
                           ClockMode clock, Strategy strategy) {
  Measurement m;
  const std::uint64_t raw =
      clock == ClockMode::CpuTime ? trace.cpu_ns : trace.wall_ns;
  m.duration_ns = std::max<std::uint64_t>(raw, 1);
  m.clock_mode = clock;
  m.version_label = spec.version_label();
  m.strategy = strategy;
  m.cold = false;
  return m;
}

}  // namespace

std::int64_t steady_now_ns() {
  return std::chrono::duration_cast<std::chrono::nanoseconds>(
             std::chrono::steady_clock::now().time_since_epoch())
      .count();
}

bool StartGate::arrive_and_wait(std::exception_ptr failure) {
  std::unique_lock lock(mu_);
  if (failure && !failure_) failure_ = failure;
  ++arrived_;
  cv_.notify_all();
  if (failure) return false;
  cv_.wait(lock, [&] { return open_ || aborted_; });
  return open_ && !aborted_;
}

std::int64_t StartGate::release(std::chrono::milliseconds timeout) {
  std::unique_lock lock(mu_);
  const bool all_arrived =
      cv_.wait_for(lock, timeout, [&] { return arrived_ == workers_; });
  if (!all_arrived || failure_) {
    aborted_ = true;
    cv_.notify_all();
    if (failure_) std::rethrow_exception(failure_);
    throw Error(ErrorCode::BarrierTimeout,
                std::to_string(workers_ - arrived_) + " of " +
                    std::to_string(workers_) +
                    " workers missed the start barrier within " +
                    std::to_string(timeout.count()) + " ms");
  }
  const std::int64_t released = steady_now_ns();
  open_ = true;
  cv_.notify_all();
  return released;
}

void StartGate::abort() {
  std::lock_guard lock(mu_);
  aborted_ = true;
  cv_.notify_all();
}

bool pinning_disabled_by_env() {
  const char* value = std::getenv(kNoPinEnvVar);
  return value != nullptr && *value != '\0' && std::string_view(value) != "0";
}

unsigned available_cores() {
  return static_cast<unsigned>(current_affinity().size());
}

Executor::Executor(ExecutorOptions options)
    : options_(options), allowed_cpus_(current_affinity()) {
  core_count_ = static_cast<unsigned>(allowed_cpus_.size());
  if (options_.core_limit) {
    core_count_ = std::max(1u, std::min(core_count_, *options_.core_limit));
  }
  pin_ = options_.pin && !pinning_disabled_by_env();
}

unsigned Executor::os_cpu_for(unsigned core_index) const {
  if (core_index >= core_count_) {
    throw Error(ErrorCode::AffinityError,
                "core index " + std::to_string(core_index) +
                    " out of range (available cores: " +
                    std::to_string(core_count_) + ")");
  }
  return allowed_cpus_[core_index];
}

DuetOutcome Executor::duet_invoke(const WorkloadSpec& spec_a,
                                  const WorkloadSpec& spec_b, CorePlan plan) {
  if (core_count_ < 2) {
    throw Error(ErrorCode::InsufficientCores,
                "duet execution needs at least 2 logical cores, host exposes " +
                    std::to_string(core_count_));
  }
  if (plan.core_a == plan.core_b) {
    throw Error(ErrorCode::InvalidArgument,
                "duet core plan must assign distinct cores, got " +
                    std::to_string(plan.core_a) + " twice");
  }
  const unsigned cpu[2] = {os_cpu_for(plan.core_a), os_cpu_for(plan.core_b)};
  const WorkloadSpec* specs[2] = {&spec_a, &spec_b};

  StartGate gate(2);
  DuetOutcome out;
  WorkerTrace* traces[2] = {&out.trace_a, &out.trace_b};
  std::exception_ptr run_failure[2];

  auto worker = [&](int id) {
    WorkerTrace& trace = *traces[id];
    try {
      if (pin_) {
        try {
          pin_current_thread(cpu[id]);
          trace.pinned = true;
        } catch (const Error&) {
          if (!options_.allow_unpinned) throw;
        }
      }
      trace.affinity = current_affinity();
    } catch (...) {
      gate.arrive_and_wait(std::current_exception());
      return;
    }
    trace.ready_ns = steady_now_ns();
    if (!gate.arrive_and_wait()) return;
    try {
      timed_run(*specs[id], trace);
    } catch (...) {
      run_failure[id] = std::current_exception();
    }
  };

  std::thread threads[2] = {std::thread(worker, 0), std::thread(worker, 1)};
  auto join_all = [&] {
    for (auto& t : threads) t.join();
  };
  try {
    out.release_ns = gate.release(options_.barrier_timeout);
  } catch (...) {
    join_all();
    throw;
  }
  join_all();
  for (auto& f : run_failure) {
    if (f) std::rethrow_exception(f);
  }

  const ClockMode clock = options_.duet_clock.value_or(ClockMode::CpuTime);
  out.a = to_measurement(spec_a, out.trace_a, clock, Strategy::Duet);
  out.b = to_measurement(spec_b, out.trace_b, clock, Strategy::Duet);
  return out;
}

SoloOutcome Executor::solo_invoke(const WorkloadSpec& spec,
                                  std::optional<unsigned> core,
                                  ClockMode clock) {
  SoloOutcome out;
  if (!core) {
    out.trace.affinity = current_affinity();
    timed_run(spec, out.trace);
  } else {
    const unsigned cpu = os_cpu_for(*core);
    std::exception_ptr failure;
    std::thread worker([&] {
      try {
        if (pin_) {
          try {
            pin_current_thread(cpu);
            out.trace.pinned = true;
          } catch (const Error&) {
            if (!options_.allow_unpinned) throw;
          }
        }
        out.trace.affinity = current_affinity();
        timed_run(spec, out.trace);
      } catch (...) {
        failure = std::current_exception();
      }
    });
    worker.join();
    if (failure) std::rethrow_exception(failure);
  }
  out.measurement =
      to_measurement(spec, out.trace, clock, Strategy::Independent);
  return out;
}

}  // namespace duetbench
