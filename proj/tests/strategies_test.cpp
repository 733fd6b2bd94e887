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

#include <gtest/gtest.h>

#include <cmath>
#include <set>
#include <vector>

#include "duetbench/error.hpp"

namespace duetbench {
namespace {

WorkloadSpec spec_a(std::uint64_t scale = 1'000'000) {
  return make_workload(WorkloadKind::CpuMutation, scale, "A", 0);
}
WorkloadSpec spec_b(double pct = 0, std::uint64_t scale = 1'000'000) {
  return make_workload(WorkloadKind::CpuMutation, scale, "B", pct);
}

StrategyConfig sim_config(Strategy s, std::uint64_t reps, std::uint64_t seed = 7) {
  StrategyConfig cfg;
  cfg.strategy = s;
  cfg.repetitions = reps;
  cfg.seed = seed;
  return cfg;
}

template <class F>
ErrorCode code_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode{};
}

// Upper tail P(X >= k) for X ~ Binomial(n, 1/2), computed in log space.
double binomial_two_sided(int n, int k) {
  const int dev = std::abs(2 * k - n);
  double tail = 0;
  for (int j = (n + dev + 1) / 2; j <= n; ++j) {
    tail += std::exp(std::lgamma(n + 1.0) - std::lgamma(j + 1.0) -
                     std::lgamma(n - j + 1.0) - n * std::log(2.0));
  }
  return std::min(1.0, 2 * tail);
}

TEST(Independent, RunsAllAThenAllB) {
  const auto set = run_independent(sim_config(Strategy::Independent, 3), spec_a(), spec_b());
  ASSERT_EQ(set.measurements.size(), 6u);
  const char* expected[] = {"A", "A", "A", "B", "B", "B"};
  for (int i = 0; i < 6; ++i) {
    EXPECT_EQ(set.measurements[i].version_label, expected[i]);
    EXPECT_EQ(set.measurements[i].repetition, static_cast<std::uint64_t>(i % 3));
    EXPECT_EQ(set.measurements[i].strategy, Strategy::Independent);
    EXPECT_FALSE(set.measurements[i].order_position.has_value());
  }
}

TEST(Strategies, ZeroRepetitionsRejected) {
  for (Strategy s : {Strategy::Independent, Strategy::Rmit, Strategy::Duet}) {
    EXPECT_EQ(code_of([&] { run_strategy(sim_config(s, 0), spec_a(), spec_b()); }),
              ErrorCode::InvalidArgument);
  }
}

TEST(Strategies, SameLabelRejected) {
  const auto twin = make_workload(WorkloadKind::CpuMutation, 1000, "A", 0);
  EXPECT_EQ(code_of([&] { run_duet(sim_config(Strategy::Duet, 5), spec_a(), twin); }),
            ErrorCode::InvalidArgument);
}

TEST(Strategies, SimulatedRunsAreSeedDeterministic) {
  for (Strategy s : {Strategy::Independent, Strategy::Rmit, Strategy::Duet}) {
    const auto x = run_strategy(sim_config(s, 200, 11), spec_a(), spec_b(5));
    const auto y = run_strategy(sim_config(s, 200, 11), spec_a(), spec_b(5));
    const auto z = run_strategy(sim_config(s, 200, 12), spec_a(), spec_b(5));
    EXPECT_EQ(x.measurements, y.measurements);
    EXPECT_NE(x.measurements, z.measurements);
  }
}

TEST(Rmit, OrderBalanceOverThousandTrials) {
  const auto set = run_rmit(sim_config(Strategy::Rmit, 1000, 3), spec_a(), spec_b());
  int ab = 0;
  for (const auto& m : set.measurements) {
    if (m.version_label == "A" && m.order_position == 0) ++ab;
  }
  EXPECT_GE(ab, 430);
  EXPECT_LE(ab, 570);
  // 430 sits well past three standard deviations; an honest coin lands
  // outside [430, 570] with probability below 1e-3.
  EXPECT_LT(binomial_two_sided(1000, 429), 1e-3);
}

TEST(Rmit, SingleTrialHasBothPositions) {
  const auto set = run_rmit(sim_config(Strategy::Rmit, 1), spec_a(), spec_b());
  ASSERT_EQ(set.measurements.size(), 2u);
  std::set<int> positions;
  std::set<std::string> labels;
  for (const auto& m : set.measurements) {
    positions.insert(*m.order_position);
    labels.insert(m.version_label);
    EXPECT_EQ(m.repetition, 0u);
  }
  EXPECT_EQ(positions, (std::set<int>{0, 1}));
  EXPECT_EQ(labels, (std::set<std::string>{"A", "B"}));
}

TEST(Rmit, OrderFollowsOrderStream) {
  const auto cfg = sim_config(Strategy::Rmit, 300, 21);
  const auto set = run_rmit(cfg, spec_a(), spec_b());
  Rng order = rmit_order_stream(21, 0);
  std::bernoulli_distribution coin(0.5);
  for (std::uint64_t i = 0; i < 300; ++i) {
    const bool a_first = coin(order);
    EXPECT_EQ(set.measurements[2 * i].version_label, a_first ? "A" : "B");
  }
}

TEST(Rmit, ChiSquareOnTenThousandTrials) {
  const auto set = run_rmit(sim_config(Strategy::Rmit, 10'000, 5), spec_a(1000), spec_b(0, 1000));
  double ab = 0;
  for (const auto& m : set.measurements) {
    if (m.version_label == "A" && m.order_position == 0) ++ab;
  }
  const double ba = 10'000 - ab;
  const double chi2 = ((ab - 5000) * (ab - 5000) + (ba - 5000) * (ba - 5000)) / 5000;
  EXPECT_GT(std::erfc(std::sqrt(chi2 / 2)), 0.001);
}

TEST(Duet, PairsShareRepetitionIndex) {
  const auto set = run_duet(sim_config(Strategy::Duet, 100), spec_a(), spec_b(5));
  ASSERT_EQ(set.measurements.size(), 200u);
  for (std::size_t i = 0; i < 100; ++i) {
    EXPECT_EQ(set.measurements[2 * i].repetition, i);
    EXPECT_EQ(set.measurements[2 * i + 1].repetition, i);
    EXPECT_EQ(set.measurements[2 * i].clock_mode, ClockMode::CpuTime);
  }
  EXPECT_EQ(pair_measurements(set).size(), 100u);
}

TEST(Duet, ZeroResidualAaIsExactlyZero) {
  auto cfg = sim_config(Strategy::Duet, 500);
  cfg.model.duet_residual_cv = 0;
  const auto set = run_duet(cfg, spec_a(), spec_b(0));
  for (const auto& p : pair_measurements(set)) EXPECT_EQ(p.change_pct, 0.0);
}

TEST(Duet, LiveNeedsTwoCores) {
  auto cfg = sim_config(Strategy::Duet, 2);
  cfg.backend = Backend::Live;
  cfg.executor.core_limit = 1;
  EXPECT_EQ(code_of([&] { run_duet(cfg, spec_a(1000), spec_b(5, 1000)); }),
            ErrorCode::InsufficientCores);
}

TEST(Pairing, ExactRelativeChange) {
  MeasurementSet set;
  Measurement a, b;
  a.version_label = "A";
  a.duration_ns = 100;
  b.version_label = "B";
  b.duration_ns = 105;
  set.measurements = {a, b};
  const auto pairs = pair_measurements(set);
  ASSERT_EQ(pairs.size(), 1u);
  EXPECT_EQ(pairs[0].change_pct, 5.0);
}

TEST(Pairing, EmptySetGivesNoPairs) {
  EXPECT_TRUE(pair_measurements(MeasurementSet{}).empty());
}

TEST(Pairing, MissingPartnerAndDuplicatesRejected) {
  MeasurementSet set;
  Measurement a;
  a.version_label = "A";
  a.duration_ns = 100;
  set.measurements = {a};
  EXPECT_EQ(code_of([&] { pair_measurements(set); }), ErrorCode::PairingError);
  Measurement b = a;
  b.version_label = "B";
  set.measurements = {a, b, b};
  EXPECT_EQ(code_of([&] { pair_measurements(set); }), ErrorCode::PairingError);
  Measurement c = a;
  c.version_label = "C";
  set.measurements = {a, b, c};
  EXPECT_EQ(code_of([&] { pair_measurements(set); }), ErrorCode::PairingError);
}

TEST(Pairing, RandomPairingPermutesWithinInstance) {
  const auto set = run_independent(sim_config(Strategy::Independent, 200), spec_a(), spec_b());
  const auto by_index = pair_measurements(set);
  const auto shuffled = pair_measurements(set, {IndependentPairing::Random, 99});
  ASSERT_EQ(by_index.size(), shuffled.size());
  bool differs = false;
  for (std::size_t i = 0; i < by_index.size(); ++i) {
    differs |= by_index[i].change_pct != shuffled[i].change_pct;
  }
  EXPECT_TRUE(differs);
  EXPECT_EQ(shuffled, pair_measurements(set, {IndependentPairing::Random, 99}));
}

TEST(Live, IndependentAndRmitAgreeOnResults) {
  StrategyConfig cfg = sim_config(Strategy::Independent, 3);
  cfg.backend = Backend::Live;
  cfg.executor.allow_unpinned = true;
  const auto a = make_workload(WorkloadKind::MemSieve, 20'000, "A", 0);
  const auto b = make_workload(WorkloadKind::MemSieve, 20'000, "B", 5);
  const auto ind = run_independent(cfg, a, b);
  cfg.strategy = Strategy::Rmit;
  const auto rmit = run_rmit(cfg, a, b);
  ASSERT_TRUE(ind.result_a && rmit.result_a);
  EXPECT_EQ(*ind.result_a, *rmit.result_a);
  EXPECT_EQ(*ind.result_b, *rmit.result_b);
  EXPECT_EQ(*ind.result_a, run_workload(a));
  for (const auto& m : ind.measurements) {
    EXPECT_EQ(m.clock_mode, ClockMode::WallClock);
    EXPECT_GT(m.duration_ns, 0u);
  }
}

TEST(Names, BackendAndPairingRoundTrip) {
  EXPECT_EQ(parse_backend(to_string(Backend::Live)), Backend::Live);
  EXPECT_EQ(parse_backend(to_string(Backend::Simulated)), Backend::Simulated);
  EXPECT_EQ(parse_pairing(to_string(IndependentPairing::Random)), IndependentPairing::Random);
  EXPECT_EQ(code_of([] { parse_backend("cloud"); }), ErrorCode::ParseError);
}

}  // namespace
}  // namespace duetbench
