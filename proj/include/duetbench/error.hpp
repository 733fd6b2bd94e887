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

#include <stdexcept>
#include <string>
#include <string_view>

namespace duetbench {

// Values are part of the C ABI (see duetbench.h); append only.
enum class ErrorCode : int {
  InvalidWorkload = 1,
  InvalidRegression = 2,
  InsufficientCores = 3,
  AffinityUnsupported = 4,
  AffinityError = 5,
  BarrierTimeout = 6,
  ExecutionError = 7,
  InvalidConfig = 8,
  PairingError = 9,
  DivisionDomain = 10,
  EmptySamples = 11,
  InsufficientSamples = 12,
  RangeError = 13,
  InvalidArgument = 14,
  IoError = 15,
  ParseError = 16,
};

std::string_view to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace duetbench
