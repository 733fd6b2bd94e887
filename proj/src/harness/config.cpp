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


#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <string>

#include "json.hpp"

#include "duetbench/error.hpp"
#include "duetbench/harness.hpp"

namespace duetbench {

namespace {

[[noreturn]] void bad_value(std::string_view key, std::string_view value,
                            std::string_view expected) {
  throw Error(ErrorCode::InvalidConfig,
              "invalid value '" + std::string(value) + "' for '" +
                  std::string(key) + "': expected " + std::string(expected));
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) {
    s.remove_prefix(1);
  }
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) {
    s.remove_suffix(1);
  }
  return s;
}

std::uint64_t to_uint(std::string_view key, std::string_view value) {
  value = trim(value);
  std::uint64_t out = 0;
  auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc() || ptr != value.data() + value.size()) {
    bad_value(key, value, "a non-negative integer");
  }
  return out;
}

double to_double(std::string_view key, std::string_view value) {
  value = trim(value);
  double out = 0.0;
  auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc() || ptr != value.data() + value.size() ||
      !std::isfinite(out)) {
    bad_value(key, value, "a finite number");
  }
  return out;
}

bool to_bool(std::string_view key, std::string_view value) {
  value = trim(value);
  if (value == "true" || value == "1" || value == "yes" || value == "on") return true;
  if (value == "false" || value == "0" || value == "no" || value == "off") return false;
  bad_value(key, value, "true or false");
}

template <typename Parse>
auto parse_enum(std::string_view key, std::string_view value, Parse parse,
                std::string_view expected) {
  try {
    return parse(trim(value));
  } catch (const Error&) {
    bad_value(key, value, expected);
  }
}

std::vector<Strategy> to_strategies(std::string_view key, std::string_view value) {
  if (trim(value) == "all") {
    return {Strategy::Duet, Strategy::Rmit, Strategy::Independent};
  }
  std::vector<Strategy> out;
  std::string_view rest = value;
  while (!rest.empty()) {
    const std::size_t comma = rest.find(',');
    const std::string_view item = trim(rest.substr(0, comma));
    if (!item.empty()) {
      out.push_back(parse_enum(key, item, parse_strategy,
                               "a list of independent, rmit, duet"));
    }
    if (comma == std::string_view::npos) break;
    rest.remove_prefix(comma + 1);
  }
  return out;
}

using Setter = std::function<void(ExperimentConfig&, std::string_view,
                                  std::string_view)>;

const std::map<std::string, Setter, std::less<>>& setters() {
  static const std::map<std::string, Setter, std::less<>> table = {
      {"strategies",
       [](auto& c, auto k, auto v) { c.strategies = to_strategies(k, v); }},
      {"backend",
       [](auto& c, auto k, auto v) {
         c.backend = parse_enum(k, v, parse_backend, "live or simulated");
       }},
      {"repetitions", [](auto& c, auto k, auto v) { c.repetitions = to_uint(k, v); }},
      {"instances",
       [](auto& c, auto k, auto v) {
         c.instances = static_cast<unsigned>(to_uint(k, v));
       }},
      {"seed", [](auto& c, auto k, auto v) { c.seed = to_uint(k, v); }},
      {"workload",
       [](auto& c, auto k, auto v) {
         c.workload =
             parse_enum(k, v, parse_workload_kind, "cpu_mutation or mem_sieve");
       }},
      {"scale", [](auto& c, auto k, auto v) { c.scale = to_uint(k, v); }},
      {"regression_pct",
       [](auto& c, auto k, auto v) { c.regression_pct = to_double(k, v); }},
      {"ci_level", [](auto& c, auto k, auto v) { c.ci_level = to_double(k, v); }},
      {"resamples", [](auto& c, auto k, auto v) { c.resamples = to_uint(k, v); }},
      {"threshold_pct",
       [](auto& c, auto k, auto v) { c.threshold_pct = to_double(k, v); }},
      {"min_sample_size",
       [](auto& c, auto k, auto v) { c.min_sample_size = to_uint(k, v); }},
      {"pairing",
       [](auto& c, auto k, auto v) {
         c.pairing = parse_enum(k, v, parse_pairing, "index or random");
       }},
      {"sweep", [](auto& c, auto k, auto v) { c.sweep = to_bool(k, v); }},
      {"sweep_from", [](auto& c, auto k, auto v) { c.sweep_from = to_uint(k, v); }},
      {"sweep_to", [](auto& c, auto k, auto v) { c.sweep_to = to_uint(k, v); }},
      {"sweep_step", [](auto& c, auto k, auto v) { c.sweep_step = to_uint(k, v); }},
      {"sweep_resamples",
       [](auto& c, auto k, auto v) { c.sweep_resamples = to_uint(k, v); }},
      {"output_dir",
       [](auto& c, auto, auto v) { c.output_dir = std::string(trim(v)); }},
      {"instance_quality_cv",
       [](auto& c, auto k, auto v) { c.model.instance_quality_cv = to_double(k, v); }},
      {"temporal_sigma",
       [](auto& c, auto k, auto v) { c.model.temporal_sigma = to_double(k, v); }},
      {"cold_penalty_ms",
       [](auto& c, auto k, auto v) { c.model.cold_penalty_ms = to_double(k, v); }},
      {"base_cost_ns_per_unit",
       [](auto& c, auto k, auto v) {
         c.model.base_cost_ns_per_unit = to_double(k, v);
       }},
      {"drift_period_s",
       [](auto& c, auto k, auto v) { c.model.drift_period_s = to_double(k, v); }},
      {"drift_amplitude",
       [](auto& c, auto k, auto v) { c.model.drift_amplitude = to_double(k, v); }},
      {"duet_residual_cv",
       [](auto& c, auto k, auto v) { c.model.duet_residual_cv = to_double(k, v); }},
      {"time_step_s",
       [](auto& c, auto k, auto v) { c.model.time_step_s = to_double(k, v); }},
      {"independent_pool_size",
       [](auto& c, auto k, auto v) {
         c.model.independent_pool_size = static_cast<unsigned>(to_uint(k, v));
       }},
      {"pin", [](auto& c, auto k, auto v) { c.pin = to_bool(k, v); }},
      {"allow_unpinned",
       [](auto& c, auto k, auto v) { c.allow_unpinned = to_bool(k, v); }},
      {"clock",
       [](auto& c, auto k, auto v) {
         if (trim(v) == "default") {
           c.clock_override.reset();
         } else {
           c.clock_override =
               parse_enum(k, v, parse_clock_mode, "cpu, wall or default");
         }
       }},
      {"parallel_instances",
       [](auto& c, auto k, auto v) { c.parallel_instances = to_bool(k, v); }},
  };
  return table;
}

void require(bool ok, const std::string& message) {
  if (!ok) throw Error(ErrorCode::InvalidConfig, message);
}

std::string json_scalar_text(const nlohmann::json& value) {
  if (value.is_string()) return value.get<std::string>();
  if (value.is_array()) {
    std::string joined;
    for (const auto& item : value) {
      if (!joined.empty()) joined += ',';
      joined += json_scalar_text(item);
    }
    return joined;
  }
  return value.dump();
}

}  // namespace

void apply_setting(ExperimentConfig& cfg, std::string_view key,
                   std::string_view value) {
  const auto& table = setters();
  auto it = table.find(key);
  if (it == table.end()) {
    throw Error(ErrorCode::InvalidConfig,
                "unknown config key '" + std::string(key) + "'");
  }
  it->second(cfg, key, value);
}

std::vector<std::string> config_keys() {
  std::vector<std::string> keys;
  for (const auto& [key, setter] : setters()) keys.push_back(key);
  return keys;
}

void validate(const ExperimentConfig& cfg) {
  require(!cfg.strategies.empty(), "at least one strategy is required");
  for (std::size_t i = 0; i < cfg.strategies.size(); ++i) {
    require(std::find(cfg.strategies.begin() + i + 1, cfg.strategies.end(),
                      cfg.strategies[i]) == cfg.strategies.end(),
            "strategy '" + std::string(to_string(cfg.strategies[i])) +
                "' is listed twice");
  }
  require(cfg.repetitions >= 1, "repetitions must be >= 1");
  require(cfg.instances >= 1, "instances must be >= 1");
  require(cfg.scale >= 2, "scale must be >= 2");
  require(cfg.regression_pct >= 0.0, "regression_pct must be >= 0");
  require(cfg.ci_level > 0.0 && cfg.ci_level < 1.0, "ci_level must lie in (0, 1)");
  require(cfg.resamples >= kMinResamples,
          "resamples must be >= " + std::to_string(kMinResamples));
  require(cfg.min_sample_size >= 1, "min_sample_size must be >= 1");
  require(std::isfinite(cfg.threshold_pct), "threshold_pct must be finite");
  if (cfg.sweep) {
    require(cfg.sweep_step >= 1, "sweep_step must be >= 1");
    require(cfg.sweep_from >= cfg.min_sample_size,
            "sweep_from must be >= min_sample_size");
    require(cfg.sweep_to >= cfg.sweep_from, "sweep_to must be >= sweep_from");
    require(cfg.sweep_resamples >= kMinResamples,
            "sweep_resamples must be >= " + std::to_string(kMinResamples));
  }
  cfg.model.validate();
}

void load_config_json(ExperimentConfig& cfg, std::string_view json_text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ParseError,
                std::string("config is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) {
    throw Error(ErrorCode::InvalidConfig, "config must be a JSON object");
  }
  for (const auto& [key, value] : doc.items()) {
    if (key == "model" && value.is_object()) {
      for (const auto& [mkey, mvalue] : value.items()) {
        apply_setting(cfg, mkey, json_scalar_text(mvalue));
      }
      continue;
    }
    apply_setting(cfg, key, json_scalar_text(value));
  }
}

void load_config_file(ExperimentConfig& cfg, const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorCode::IoError, "cannot read config file " + path.string());
  }
  std::ostringstream text;
  text << in.rdbuf();
  load_config_json(cfg, text.str());
}

std::string config_to_json(const ExperimentConfig& cfg) {
  nlohmann::ordered_json j;
  std::vector<std::string> strategies;
  for (Strategy s : cfg.strategies) strategies.emplace_back(to_string(s));
  j["strategies"] = strategies;
  j["backend"] = to_string(cfg.backend);
  j["repetitions"] = cfg.repetitions;
  j["instances"] = cfg.instances;
  j["seed"] = cfg.seed;
  j["workload"] = to_string(cfg.workload);
  j["scale"] = cfg.scale;
  j["regression_pct"] = cfg.regression_pct;
  j["ci_level"] = cfg.ci_level;
  j["resamples"] = cfg.resamples;
  j["threshold_pct"] = cfg.threshold_pct;
  j["min_sample_size"] = cfg.min_sample_size;
  j["pairing"] = to_string(cfg.pairing);
  j["sweep"] = cfg.sweep;
  j["sweep_from"] = cfg.sweep_from;
  j["sweep_to"] = cfg.sweep_to;
  j["sweep_step"] = cfg.sweep_step;
  j["sweep_resamples"] = cfg.sweep_resamples;
  j["output_dir"] = cfg.output_dir.string();
  j["model"] = {
      {"instance_quality_cv", cfg.model.instance_quality_cv},
      {"temporal_sigma", cfg.model.temporal_sigma},
      {"cold_penalty_ms", cfg.model.cold_penalty_ms},
      {"base_cost_ns_per_unit", cfg.model.base_cost_ns_per_unit},
      {"drift_period_s", cfg.model.drift_period_s},
      {"drift_amplitude", cfg.model.drift_amplitude},
      {"duet_residual_cv", cfg.model.duet_residual_cv},
      {"time_step_s", cfg.model.time_step_s},
      {"independent_pool_size", cfg.model.independent_pool_size},
  };
  j["pin"] = cfg.pin;
  j["allow_unpinned"] = cfg.allow_unpinned;
  j["clock"] = cfg.clock_override ? std::string(to_string(*cfg.clock_override))
                                  : std::string("default");
  j["parallel_instances"] = cfg.parallel_instances;
  return j.dump(2);
}

std::vector<std::uint64_t> repetitions_per_instance(std::uint64_t total,
                                                    unsigned instances) {
  if (instances < 1) {
    throw Error(ErrorCode::InvalidConfig, "instances must be >= 1");
  }
  const std::uint64_t chunk = (total + instances - 1) / instances;
  std::vector<std::uint64_t> shares;
  std::uint64_t left = total;
  for (unsigned i = 0; i < instances; ++i) {
    const std::uint64_t share = std::min(chunk, left);
    shares.push_back(share);
    left -= share;
  }
  return shares;
}

}  // namespace duetbench
