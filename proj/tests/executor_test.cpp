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

#include <gtest/gtest.h>

#include <cstdlib>
#include <thread>

#include "duetbench/error.hpp"

namespace duetbench {
namespace {

const WorkloadSpec kTiny = make_workload(WorkloadKind::MemSieve, 2, "A", 0);

bool host_has_two_cores() { return available_cores() >= 2; }

TEST(AvailableCores, AtLeastOne) {
  EXPECT_GE(available_cores(), 1u);
  EXPECT_EQ(Executor().available_cores(), available_cores());
}

TEST(AvailableCores, CoreLimitCaps) {
  ExecutorOptions opts;
  opts.core_limit = 1;
  EXPECT_EQ(Executor(opts).available_cores(), 1u);
}

TEST(SoloInvoke, SmallestWorkloadWallClock) {
  Executor ex;
  const SoloOutcome out = ex.solo_invoke(kTiny, std::nullopt, ClockMode::WallClock);
  EXPECT_GT(out.measurement.duration_ns, 0u);
  EXPECT_EQ(out.measurement.clock_mode, ClockMode::WallClock);
  EXPECT_EQ(out.trace.result.units_done, 1u);
  EXPECT_FALSE(out.measurement.cold);
  EXPECT_EQ(out.measurement.version_label, "A");
}

TEST(SoloInvoke, PinnedCpuTime) {
  Executor ex;
  const auto spec = make_workload(WorkloadKind::CpuMutation, 50'000, "A", 0);
  const SoloOutcome out = ex.solo_invoke(spec, 0u, ClockMode::CpuTime);
  EXPECT_EQ(out.measurement.clock_mode, ClockMode::CpuTime);
  EXPECT_GT(out.measurement.duration_ns, 0u);
  if (ex.pinning_enabled() && out.trace.pinned) {
    ASSERT_EQ(out.trace.affinity.size(), 1u);
  }
}

TEST(SoloInvoke, InvalidCoreIsAffinityError) {
  Executor ex;
  try {
    ex.solo_invoke(kTiny, ex.available_cores(), ClockMode::WallClock);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::AffinityError);
  }
}

TEST(SoloInvoke, RepeatDurationsSameOrderOfMagnitude) {
  Executor ex;
  const auto spec = make_workload(WorkloadKind::CpuMutation, 200'000, "A", 0);
  // Warm up once, then compare two runs.
  ex.solo_invoke(spec, std::nullopt, ClockMode::CpuTime);
  const double d1 = ex.solo_invoke(spec, std::nullopt, ClockMode::CpuTime)
                        .measurement.duration_ns;
  const double d2 = ex.solo_invoke(spec, std::nullopt, ClockMode::CpuTime)
                        .measurement.duration_ns;
  EXPECT_LT(std::max(d1, d2) / std::min(d1, d2), 10.0);
}

TEST(SoloInvoke, CpuTimeNeverExceedsWallClock) {
  Executor ex;
  const auto spec = make_workload(WorkloadKind::CpuMutation, 100'000, "A", 0);
  for (int i = 0; i < 20; ++i) {
    const SoloOutcome out = ex.solo_invoke(spec, std::nullopt, ClockMode::CpuTime);
    EXPECT_LE(static_cast<double>(out.trace.cpu_ns),
              static_cast<double>(out.trace.wall_ns) * 1.05);
  }
}

TEST(PinningEnv, DisablesPinning) {
  ::setenv(kNoPinEnvVar, "1", 1);
  EXPECT_TRUE(pinning_disabled_by_env());
  EXPECT_FALSE(Executor().pinning_enabled());
  const SoloOutcome out = Executor().solo_invoke(kTiny, 0u, ClockMode::WallClock);
  EXPECT_FALSE(out.trace.pinned);
  ::setenv(kNoPinEnvVar, "0", 1);
  EXPECT_FALSE(pinning_disabled_by_env());
  ::unsetenv(kNoPinEnvVar);
  EXPECT_TRUE(Executor().pinning_enabled());
}

TEST(DuetInvoke, FewerThanTwoCoresIsRejected) {
  ExecutorOptions opts;
  opts.core_limit = 1;
  Executor ex(opts);
  try {
    ex.duet_invoke(kTiny, make_workload(WorkloadKind::MemSieve, 2, "B", 0), {0, 1});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::InsufficientCores);
  }
}

TEST(DuetInvoke, SameCoreTwiceIsRejected) {
  Executor ex;
  try {
    ex.duet_invoke(kTiny, make_workload(WorkloadKind::MemSieve, 2, "B", 0), {0, 0});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), host_has_two_cores() ? ErrorCode::InvalidArgument
                                             : ErrorCode::InsufficientCores);
  }
}

TEST(DuetInvoke, AaIdentityBarrierAndIsolation) {
  if (!host_has_two_cores()) GTEST_SKIP() << "host exposes a single core";
  Executor ex;
  const auto a = make_workload(WorkloadKind::CpuMutation, 100'000, "A", 0);
  const auto b = make_workload(WorkloadKind::CpuMutation, 100'000, "B", 0);
  for (int i = 0; i < 20; ++i) {
    const DuetOutcome out = ex.duet_invoke(a, b, {0, 1});
    EXPECT_EQ(out.trace_a.result, out.trace_b.result);
    EXPECT_EQ(out.a.version_label, "A");
    EXPECT_EQ(out.b.version_label, "B");
    EXPECT_EQ(out.a.clock_mode, ClockMode::CpuTime);
    EXPECT_EQ(out.a.strategy, Strategy::Duet);
    EXPECT_GE(out.trace_a.start_ns, out.release_ns);
    EXPECT_GE(out.trace_b.start_ns, out.release_ns);
    EXPECT_LE(out.trace_a.ready_ns, out.release_ns);
    EXPECT_LE(out.trace_b.ready_ns, out.release_ns);
    if (out.trace_a.pinned && out.trace_b.pinned) {
      ASSERT_EQ(out.trace_a.affinity.size(), 1u);
      ASSERT_EQ(out.trace_b.affinity.size(), 1u);
      EXPECT_NE(out.trace_a.affinity[0], out.trace_b.affinity[0]);
    }
    EXPECT_LE(static_cast<double>(out.trace_a.cpu_ns),
              static_cast<double>(out.trace_a.wall_ns) * 1.05);
  }
}

TEST(DuetInvoke, RegressedVersionUsuallySlower) {
  if (!host_has_two_cores()) GTEST_SKIP() << "host exposes a single core";
  Executor ex;
  const auto a = make_workload(WorkloadKind::CpuMutation, 200'000, "A", 0);
  const auto b = make_workload(WorkloadKind::CpuMutation, 200'000, "B", 5);
  int b_slower = 0;
  for (int i = 0; i < 100; ++i) {
    const DuetOutcome out = ex.duet_invoke(a, b, {0, 1});
    if (out.b.duration_ns > out.a.duration_ns) ++b_slower;
  }
  EXPECT_GT(b_slower, 50);
}

// The gate itself is exercised with plain threads so it is covered on
// single-core hosts too.
TEST(StartGate, NoWorkerStartsBeforeRelease) {
  for (int round = 0; round < 50; ++round) {
    StartGate gate(2);
    std::int64_t started[2] = {0, 0};
    auto worker = [&](int id) {
      if (gate.arrive_and_wait()) started[id] = steady_now_ns();
    };
    std::thread t0(worker, 0), t1(worker, 1);
    const std::int64_t released = gate.release(std::chrono::milliseconds(5000));
    t0.join();
    t1.join();
    EXPECT_GE(started[0], released);
    EXPECT_GE(started[1], released);
  }
}

TEST(StartGate, TimesOutWhenAWorkerNeverArrives) {
  StartGate gate(2);
  bool released = true;
  std::thread t([&] { released = gate.arrive_and_wait(); });
  try {
    gate.release(std::chrono::milliseconds(50));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::BarrierTimeout);
  }
  t.join();
  EXPECT_FALSE(released);
}

TEST(StartGate, PropagatesWorkerSetupFailure) {
  StartGate gate(2);
  std::thread t0([&] {
    gate.arrive_and_wait(std::make_exception_ptr(
        Error(ErrorCode::AffinityError, "cannot pin")));
  });
  bool other_released = true;
  std::thread t1([&] { other_released = gate.arrive_and_wait(); });
  try {
    gate.release(std::chrono::milliseconds(5000));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::AffinityError);
  }
  t0.join();
  t1.join();
  EXPECT_FALSE(other_released);
}

}  // namespace
}  // namespace duetbench
