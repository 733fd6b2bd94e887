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


// duetbench command line: run, compare, sweep and analyze.
//
// Exit codes: 0 pass, 1 regression, 2 error, 3 inconclusive.

#include <cstdio>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "duetbench/duetbench.h"

namespace {

constexpr int kErrorExit = 2;

int report_error(duet_status status, const std::string& context) {
  nlohmann::ordered_json err;
  err["error"] = {{"status", duet_status_name(status)},
                  {"context", context},
                  {"message", duet_last_error()}};
  std::fprintf(stderr, "%s\n", err.dump().c_str());
  return kErrorExit;
}

struct ConfigFlags {
  std::string config_file;
  std::string format = "json";
  bool quiet = false;
  std::map<std::string, std::string> values;
  std::map<std::string, CLI::Option*> options;
};

void add_config_flags(CLI::App* cmd, ConfigFlags& flags) {
  cmd->add_option("-c,--config", flags.config_file, "JSON config file")
      ->check(CLI::ExistingFile);
  cmd->add_option("--format", flags.format, "Summary format")
      ->check(CLI::IsMember({"json", "csv"}));
  cmd->add_flag("-q,--quiet", flags.quiet, "Do not print the summary table");
  for (std::size_t i = 0; i < duet_config_key_count(); ++i) {
    const std::string key = duet_config_key(i);
    std::string dashed = key;
    for (char& ch : dashed) {
      if (ch == '_') ch = '-';
    }
    std::string names = "--" + key;
    if (dashed != key) names += ",--" + dashed;
    flags.options[key] =
        cmd->add_option(names, flags.values[key], "Config field " + key);
  }
}

// Config file first, then explicit flags on top.
duet_status build_config(const ConfigFlags& flags, duet_config* cfg,
                         std::string& context) {
  if (!flags.config_file.empty()) {
    context = "loading " + flags.config_file;
    if (duet_status st = duet_config_load_file(cfg, flags.config_file.c_str());
        st != DUET_OK) {
      return st;
    }
  }
  for (const auto& [key, option] : flags.options) {
    if (option->count() == 0) continue;
    context = "--" + key;
    const std::string& value = flags.values.at(key);
    if (duet_status st = duet_config_set(cfg, key.c_str(), value.c_str());
        st != DUET_OK) {
      return st;
    }
  }
  context = "validating config";
  return duet_config_validate(cfg);
}

const char* verdict_name(duet_verdict v) {
  switch (v) {
    case DUET_VERDICT_PASS: return "pass";
    case DUET_VERDICT_REGRESSION: return "regression";
    case DUET_VERDICT_INCONCLUSIVE: return "inconclusive";
  }
  return "?";
}

void print_table(const duet_report* report) {
  std::printf("%-12s %12s %24s %10s %8s %13s\n", "strategy", "median[%]",
              "CI[%]", "width[pp]", "pairs", "verdict");
  for (std::size_t i = 0; i < duet_report_strategy_count(report); ++i) {
    duet_strategy_summary s{};
    if (duet_report_strategy(report, i, &s) != DUET_OK) continue;
    char ci[64];
    std::snprintf(ci, sizeof(ci), "[%.4f, %.4f]", s.ci.lower_pct,
                  s.ci.upper_pct);
    std::printf("%-12s %12.4f %24s %10.4f %8zu %13s\n", s.strategy,
                s.median_change_pct, ci, s.ci.width_pp, s.pairs_after_filter,
                verdict_name(s.verdict));
  }
  std::printf("verdict: %s\n", verdict_name(duet_report_verdict(report)));
}

struct ConfigGuard {
  duet_config* cfg = nullptr;
  ~ConfigGuard() { duet_config_destroy(cfg); }
};
struct ReportGuard {
  duet_report* report = nullptr;
  ~ReportGuard() { duet_report_destroy(report); }
};

// preset: settings applied before the file and flags, e.g. the strategy list
// of `compare`.
int execute(const ConfigFlags& flags,
            const std::vector<std::pair<std::string, std::string>>& preset,
            const std::string* raw_csv) {
  ConfigGuard cfg;
  if (duet_status st = duet_config_create(&cfg.cfg); st != DUET_OK) {
    return report_error(st, "creating config");
  }
  for (const auto& [key, value] : preset) {
    if (duet_status st = duet_config_set(cfg.cfg, key.c_str(), value.c_str());
        st != DUET_OK) {
      return report_error(st, "preset " + key);
    }
  }
  std::string context;
  if (duet_status st = build_config(flags, cfg.cfg, context); st != DUET_OK) {
    return report_error(st, context);
  }

  ReportGuard report;
  duet_status st = raw_csv != nullptr
                       ? duet_analyze_raw_csv(cfg.cfg, raw_csv->c_str(),
                                              &report.report)
                       : duet_run_experiment(cfg.cfg, &report.report);
  if (st != DUET_OK) {
    return report_error(st, raw_csv != nullptr ? "analyzing " + *raw_csv
                                               : std::string("running experiment"));
  }
  st = duet_report_emit(report.report, nullptr,
                        flags.format == "csv" ? DUET_FORMAT_CSV : DUET_FORMAT_JSON);
  if (st != DUET_OK) return report_error(st, "writing report");
  if (!flags.quiet) print_table(report.report);
  return static_cast<int>(duet_report_verdict(report.report));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"duetbench: duet, RMIT and independent regression benchmarking"};
  app.set_version_flag("--version", duet_version());
  app.require_subcommand(1);

  ConfigFlags run_flags, compare_flags, sweep_flags, analyze_flags;
  std::string raw_csv;

  CLI::App* run = app.add_subcommand("run", "Run the configured strategies");
  add_config_flags(run, run_flags);
  CLI::App* compare =
      app.add_subcommand("compare", "Run all three strategies side by side");
  add_config_flags(compare, compare_flags);
  CLI::App* sweep =
      app.add_subcommand("sweep", "Sample-size sweep of CI widths per strategy");
  add_config_flags(sweep, sweep_flags);
  CLI::App* analyze =
      app.add_subcommand("analyze", "Re-analyze an archived raw.csv");
  analyze->add_option("raw_csv", raw_csv, "raw.csv from an earlier run")
      ->required()
      ->check(CLI::ExistingFile);
  add_config_flags(analyze, analyze_flags);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kErrorExit;
  }

  if (*run) return execute(run_flags, {}, nullptr);
  if (*compare) return execute(compare_flags, {{"strategies", "all"}}, nullptr);
  if (*sweep) {
    return execute(sweep_flags, {{"strategies", "all"}, {"sweep", "true"}},
                   nullptr);
  }
  if (*analyze) return execute(analyze_flags, {}, &raw_csv);
  return kErrorExit;
}
