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
#include <string>
#include <string_view>
#include <vector>

namespace duetbench {

enum class Strategy { Independent, Rmit, Duet };
enum class ClockMode { CpuTime, WallClock };

std::string_view to_string(Strategy strategy) noexcept;
std::string_view to_string(ClockMode mode) noexcept;
Strategy parse_strategy(std::string_view text);
ClockMode parse_clock_mode(std::string_view text);

// Duet measures per-thread CPU time; the sequential strategies take
// wall-clock timestamps around the call.
constexpr ClockMode default_clock_for(Strategy strategy) noexcept {
  return strategy == Strategy::Duet ? ClockMode::CpuTime : ClockMode::WallClock;
}

// One timed invocation of one workload version.
struct Measurement {
  std::uint64_t duration_ns = 0;
  ClockMode clock_mode = ClockMode::WallClock;
  std::string version_label;
  Strategy strategy = Strategy::Independent;
  int instance_id = 0;
  std::uint64_t repetition = 0;
  bool cold = false;
  std::optional<int> order_position;  // RMIT only: 0 = ran first in trial

  friend bool operator==(const Measurement&, const Measurement&) = default;
};

using Measurements = std::vector<Measurement>;

// Relative performance change of version B against version A for one
// (instance, repetition) pair.
struct PairedSample {
  int instance_id = 0;
  std::uint64_t repetition = 0;
  double change_pct = 0.0;

  friend bool operator==(const PairedSample&, const PairedSample&) = default;
};

}  // namespace duetbench
