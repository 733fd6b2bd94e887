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


#include <string>

#include "duetbench/error.hpp"
#include "duetbench/measurement.hpp"

namespace duetbench {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidWorkload: return "invalid-workload";
    case ErrorCode::InvalidRegression: return "invalid-regression";
    case ErrorCode::InsufficientCores: return "insufficient-cores";
    case ErrorCode::AffinityUnsupported: return "affinity-unsupported";
    case ErrorCode::AffinityError: return "affinity-error";
    case ErrorCode::BarrierTimeout: return "barrier-timeout";
    case ErrorCode::ExecutionError: return "execution-error";
    case ErrorCode::InvalidConfig: return "invalid-config";
    case ErrorCode::PairingError: return "pairing-error";
    case ErrorCode::DivisionDomain: return "division-domain";
    case ErrorCode::EmptySamples: return "empty-samples";
    case ErrorCode::InsufficientSamples: return "insufficient-samples";
    case ErrorCode::RangeError: return "range-error";
    case ErrorCode::InvalidArgument: return "invalid-argument";
    case ErrorCode::IoError: return "io-error";
    case ErrorCode::ParseError: return "parse-error";
  }
  return "unknown-error";
}

std::string_view to_string(Strategy strategy) noexcept {
  switch (strategy) {
    case Strategy::Independent: return "independent";
    case Strategy::Rmit: return "rmit";
    case Strategy::Duet: return "duet";
  }
  return "unknown";
}

std::string_view to_string(ClockMode mode) noexcept {
  switch (mode) {
    case ClockMode::CpuTime: return "cpu";
    case ClockMode::WallClock: return "wall";
  }
  return "unknown";
}

Strategy parse_strategy(std::string_view text) {
  if (text == "independent") return Strategy::Independent;
  if (text == "rmit") return Strategy::Rmit;
  if (text == "duet") return Strategy::Duet;
  throw Error(ErrorCode::ParseError,
              "unknown strategy '" + std::string(text) + "'");
}

ClockMode parse_clock_mode(std::string_view text) {
  if (text == "cpu") return ClockMode::CpuTime;
  if (text == "wall") return ClockMode::WallClock;
  throw Error(ErrorCode::ParseError,
              "unknown clock mode '" + std::string(text) + "'");
}

}  // namespace duetbench
