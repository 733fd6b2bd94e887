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


#include "duetbench/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>
#include <utility>

#include "duetbench/error.hpp"

namespace duetbench {

std::string_view to_string(Verdict verdict) noexcept {
  switch (verdict) {
    case Verdict::Pass: return "pass";
    case Verdict::Regression: return "regression";
    case Verdict::Inconclusive: return "inconclusive";
  }
  return "unknown";
}

double relative_change(double t_a, double t_b) {
  if (!(t_a > 0.0)) {
    throw Error(ErrorCode::DivisionDomain,
                "relative change needs a positive baseline duration");
  }
  // Multiply first: (105 - 100) * 100 / 100 is exactly 5.
  return (t_b - t_a) * 100.0 / t_a;
}

MeasurementSet filter_cold_starts(const MeasurementSet& set) {
  using Key = std::pair<int, std::uint64_t>;
  std::map<Key, int> warm_versions;
  for (const Measurement& m : set.measurements) {
    if (m.cold) continue;
    int bit = m.version_label == set.label_a   ? 1
              : m.version_label == set.label_b ? 2
                                               : 0;
    warm_versions[{m.instance_id, m.repetition}] |= bit;
  }

  MeasurementSet out;
  out.config = set.config;
  out.label_a = set.label_a;
  out.label_b = set.label_b;
  out.result_a = set.result_a;
  out.result_b = set.result_b;
  for (const Measurement& m : set.measurements) {
    if (m.cold) continue;
    auto it = warm_versions.find({m.instance_id, m.repetition});
    if (it != warm_versions.end() && it->second == 3) {
      out.measurements.push_back(m);
    }
  }
  return out;
}

double median(std::span<const double> values) {
  if (values.empty()) {
    throw Error(ErrorCode::EmptySamples, "median of an empty sample");
  }
  std::vector<double> v(values.begin(), values.end());
  const std::size_t mid = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + mid, v.end());
  const double upper = v[mid];
  if (v.size() % 2 == 1) return upper;
  const double lower = *std::max_element(v.begin(), v.begin() + mid);
  return (lower + upper) / 2.0;
}

ConfidenceInterval percentile_interval(std::span<const double> samples,
                                       double level) {
  if (samples.empty()) {
    throw Error(ErrorCode::EmptySamples,
                "percentile interval of an empty sample");
  }
  if (!(level > 0.0 && level < 1.0)) {
    throw Error(ErrorCode::InvalidArgument,
                "confidence level must lie in (0, 1)");
  }
  std::vector<double> sorted(samples.begin(), samples.end());
  std::stable_sort(sorted.begin(), sorted.end());

  const std::size_t n = sorted.size();
  // The epsilon absorbs representation error in (1 - level): 1 - 0.9 is
  // slightly below 0.1, which would otherwise turn k = 5 into 4 for n = 100.
  const double tail = static_cast<double>(n) * (1.0 - level) / 2.0;
  std::size_t k = static_cast<std::size_t>(std::floor(tail + 1e-9));
  k = std::min(k, (n - 1) / 2);

  ConfidenceInterval ci;
  ci.lower_pct = sorted[k];
  ci.upper_pct = sorted[n - 1 - k];
  ci.level = level;
  ci.width_pp = ci.upper_pct - ci.lower_pct;
  return ci;
}

ConfidenceInterval bootstrap_ci(std::span<const double> changes, double level,
                                std::size_t resamples, Rng& rng,
                                std::size_t min_sample_size) {
  if (changes.size() < std::max<std::size_t>(min_sample_size, 1)) {
    throw Error(ErrorCode::InsufficientSamples,
                "bootstrap needs at least " + std::to_string(min_sample_size) +
                    " samples, got " + std::to_string(changes.size()));
  }
  if (resamples < kMinResamples) {
    throw Error(ErrorCode::InvalidArgument,
                "bootstrap needs at least " + std::to_string(kMinResamples) +
                    " resamples, got " + std::to_string(resamples));
  }
  if (!(level > 0.0 && level < 1.0)) {
    throw Error(ErrorCode::InvalidArgument,
                "confidence level must lie in (0, 1)");
  }

  const std::size_t n = changes.size();
  const std::size_t mid = n / 2;
  std::uniform_int_distribution<std::size_t> pick(0, n - 1);
  std::vector<double> resample(n);
  std::vector<double> medians(resamples);
  for (std::size_t r = 0; r < resamples; ++r) {
    for (std::size_t i = 0; i < n; ++i) resample[i] = changes[pick(rng)];
    std::nth_element(resample.begin(), resample.begin() + mid, resample.end());
    double m = resample[mid];
    if (n % 2 == 0) {
      m = (*std::max_element(resample.begin(), resample.begin() + mid) + m) /
          2.0;
    }
    medians[r] = m;
  }
  return percentile_interval(medians, level);
}

ConfidenceInterval bootstrap_ci(std::span<const PairedSample> samples,
                                double level, std::size_t resamples, Rng& rng,
                                std::size_t min_sample_size) {
  std::vector<double> changes;
  changes.reserve(samples.size());
  for (const PairedSample& s : samples) changes.push_back(s.change_pct);
  return bootstrap_ci(std::span<const double>(changes), level, resamples, rng,
                      min_sample_size);
}

std::vector<SweepPoint> sweep_sample_size(
    std::span<const PairedSample> samples, std::uint64_t from, std::uint64_t to,
    std::uint64_t step, double level, std::size_t resamples, Rng& rng,
    std::size_t min_sample_size) {
  if (step < 1) {
    throw Error(ErrorCode::InvalidArgument, "sweep step must be >= 1");
  }
  if (from < min_sample_size) {
    throw Error(ErrorCode::RangeError,
                "sweep must start at >= " + std::to_string(min_sample_size) +
                    " samples, got " + std::to_string(from));
  }
  if (to < from) {
    throw Error(ErrorCode::RangeError, "sweep upper bound is below its start");
  }
  if (to > samples.size()) {
    throw Error(ErrorCode::RangeError,
                "sweep upper bound " + std::to_string(to) + " exceeds the " +
                    std::to_string(samples.size()) + " available samples");
  }

  std::vector<SweepPoint> series;
  series.reserve((to - from) / step + 1);
  for (std::uint64_t n = from; n <= to; n += step) {
    const ConfidenceInterval ci = bootstrap_ci(
        samples.first(n), level, resamples, rng, min_sample_size);
    series.push_back({n, ci.width_pp});
  }
  return series;
}

Verdict verdict(const ConfidenceInterval& ci, double threshold_pct) {
  if (ci.lower_pct > threshold_pct) return Verdict::Regression;
  if (ci.upper_pct < threshold_pct) return Verdict::Pass;
  return Verdict::Inconclusive;
}

}  // namespace duetbench
