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

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "duetbench/measurement.hpp"
#include "duetbench/rng.hpp"
#include "duetbench/strategies.hpp"

namespace duetbench {

inline constexpr std::size_t kDefaultMinSampleSize = 50;
inline constexpr std::size_t kDefaultResamples = 10'000;
inline constexpr std::size_t kMinResamples = 1'000;

struct ConfidenceInterval {
  double lower_pct = 0.0;
  double upper_pct = 0.0;
  double level = 0.0;
  double width_pp = 0.0;

  bool contains(double value) const noexcept {
    return lower_pct <= value && value <= upper_pct;
  }
  friend bool operator==(const ConfidenceInterval&,
                         const ConfidenceInterval&) = default;
};

enum class Verdict { Pass, Regression, Inconclusive };

std::string_view to_string(Verdict verdict) noexcept;

// (t_b - t_a) / t_a * 100, where B is the new version.
// Throws Error{DivisionDomain} unless t_a > 0.
double relative_change(double t_a, double t_b);

// Drops cold measurements, then every measurement whose pair partner is gone.
MeasurementSet filter_cold_starts(const MeasurementSet& set);

double median(std::span<const double> values);

/**
 * Equal-tailed percentile interval: stable sort, drop
 * k = floor(n * (1 - level) / 2) values from each end, report the remaining
 * min and max.
 */
ConfidenceInterval percentile_interval(std::span<const double> samples,
                                       double level);

/**
 * Bootstrap percentile CI of the median paired change. Draws `resamples`
 * resamples of size n with replacement from `rng`, takes each median and
 * applies percentile_interval to the medians.
 *
 * The resampling index sequence depends only on n, `resamples` and the
 * stream, never on the sample values.
 */
ConfidenceInterval bootstrap_ci(std::span<const PairedSample> samples,
                                double level, std::size_t resamples, Rng& rng,
                                std::size_t min_sample_size = kDefaultMinSampleSize);

ConfidenceInterval bootstrap_ci(std::span<const double> changes, double level,
                                std::size_t resamples, Rng& rng,
                                std::size_t min_sample_size = kDefaultMinSampleSize);

struct SweepPoint {
  std::uint64_t n = 0;
  double width_pp = 0.0;

  friend bool operator==(const SweepPoint&, const SweepPoint&) = default;
};

// bootstrap_ci over the first n samples for n = from, from+step, ..., <= to.
std::vector<SweepPoint> sweep_sample_size(
    std::span<const PairedSample> samples, std::uint64_t from, std::uint64_t to,
    std::uint64_t step, double level, std::size_t resamples, Rng& rng,
    std::size_t min_sample_size = kDefaultMinSampleSize);

// Regression if the whole CI lies above the threshold, Pass if it lies
// below, otherwise Inconclusive.
Verdict verdict(const ConfidenceInterval& ci, double threshold_pct);

}  // namespace duetbench
