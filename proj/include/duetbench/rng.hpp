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
#include <initializer_list>
#include <random>
#include <vector>

namespace duetbench {

// Every stochastic component draws from an explicit stream of this type.
using Rng = std::mt19937_64;

// Independent stream for (seed, tags...). Same inputs give the same stream on
// every run, so parallel work keyed by tags stays deterministic.
inline Rng make_stream(std::uint64_t seed,
                       std::initializer_list<std::uint64_t> tags = {}) {
  std::vector<std::uint32_t> words;
  words.reserve(2 + 2 * tags.size());
  auto push = [&](std::uint64_t v) {
    words.push_back(static_cast<std::uint32_t>(v));
    words.push_back(static_cast<std::uint32_t>(v >> 32));
  };
  push(seed);
  for (std::uint64_t t : tags) push(t);
  std::seed_seq seq(words.begin(), words.end());
  return Rng(seq);
}

}  // namespace duetbench
