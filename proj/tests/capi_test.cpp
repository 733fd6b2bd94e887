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


#include "duetbench/duetbench.h"

#include <gtest/gtest.h>

#include <cstring>
#include <filesystem>
#include <string>
#include <vector>

namespace {

namespace fs = std::filesystem;

struct ConfigHandle {
  duet_config* ptr = nullptr;
  ConfigHandle() { EXPECT_EQ(duet_config_create(&ptr), DUET_OK); }
  ~ConfigHandle() { duet_config_destroy(ptr); }
};

struct ReportHandle {
  duet_report* ptr = nullptr;
  ~ReportHandle() { duet_report_destroy(ptr); }
};

TEST(CApi, VersionAndStatusNames) {
  EXPECT_STRNE(duet_version(), "");
  EXPECT_STREQ(duet_status_name(DUET_OK), "ok");
  EXPECT_STRNE(duet_status_name(DUET_ERR_PAIRING), duet_status_name(DUET_ERR_RANGE));
  EXPECT_EQ(duet_status_exit_code(DUET_OK), 0);
  EXPECT_EQ(duet_status_exit_code(DUET_ERR_INVALID_CONFIG), 2);
  EXPECT_EQ(duet_status_exit_code(DUET_ERR_INTERNAL), 2);
}

TEST(CApi, NullArguments) {
  EXPECT_EQ(duet_config_create(nullptr), DUET_ERR_NULL_ARGUMENT);
  EXPECT_EQ(duet_config_set(nullptr, "seed", "1"), DUET_ERR_NULL_ARGUMENT);
  EXPECT_EQ(duet_run_experiment(nullptr, nullptr), DUET_ERR_NULL_ARGUMENT);
  EXPECT_EQ(duet_relative_change(1, 2, nullptr), DUET_ERR_NULL_ARGUMENT);
  EXPECT_NE(std::string(duet_last_error()), "");
  duet_config_destroy(nullptr);
  duet_report_destroy(nullptr);
}

TEST(CApi, ConfigKeysAndErrors) {
  ConfigHandle cfg;
  EXPECT_GT(duet_config_key_count(), 10u);
  EXPECT_EQ(duet_config_key(duet_config_key_count()), nullptr);
  EXPECT_EQ(duet_config_set(cfg.ptr, "repetitions", "120"), DUET_OK);
  EXPECT_EQ(duet_config_set(cfg.ptr, "no_such_key", "1"), DUET_ERR_INVALID_CONFIG);
  EXPECT_NE(std::strstr(duet_last_error(), "no_such_key"), nullptr);
  EXPECT_EQ(duet_config_set(cfg.ptr, "repetitions", "0"), DUET_OK);
  EXPECT_EQ(duet_config_validate(cfg.ptr), DUET_ERR_INVALID_CONFIG);
  EXPECT_EQ(duet_config_load_file(cfg.ptr, "/nonexistent/cfg.json"), DUET_ERR_IO);
}

TEST(CApi, BufferProtocol) {
  ConfigHandle cfg;
  size_t needed = 0;
  ASSERT_EQ(duet_config_to_json(cfg.ptr, nullptr, 0, &needed), DUET_OK);
  ASSERT_GT(needed, 1u);
  std::vector<char> small(needed - 1);
  EXPECT_EQ(duet_config_to_json(cfg.ptr, small.data(), small.size(), &needed),
            DUET_ERR_BUFFER_TOO_SMALL);
  std::vector<char> buf(needed);
  ASSERT_EQ(duet_config_to_json(cfg.ptr, buf.data(), buf.size(), &needed), DUET_OK);
  EXPECT_EQ(std::strlen(buf.data()) + 1, needed);
  EXPECT_NE(std::strstr(buf.data(), "\"repetitions\""), nullptr);
}

TEST(CApi, RunReportAndEmit) {
  ConfigHandle cfg;
  ASSERT_EQ(duet_config_set(cfg.ptr, "repetitions", "300"), DUET_OK);
  ASSERT_EQ(duet_config_set(cfg.ptr, "resamples", "1000"), DUET_OK);
  ASSERT_EQ(duet_config_set(cfg.ptr, "strategies", "duet,rmit"), DUET_OK);
  ASSERT_EQ(duet_config_set(cfg.ptr, "regression_pct", "5"), DUET_OK);
  ASSERT_EQ(duet_config_set(cfg.ptr, "sweep", "true"), DUET_OK);
  ASSERT_EQ(duet_config_set(cfg.ptr, "sweep_to", "200"), DUET_OK);
  ASSERT_EQ(duet_config_set(cfg.ptr, "sweep_step", "50"), DUET_OK);
  ReportHandle report;
  ASSERT_EQ(duet_run_experiment(cfg.ptr, &report.ptr), DUET_OK) << duet_last_error();

  EXPECT_EQ(duet_report_verdict(report.ptr), DUET_VERDICT_REGRESSION);
  ASSERT_EQ(duet_report_strategy_count(report.ptr), 2u);
  duet_strategy_summary s{};
  ASSERT_EQ(duet_report_strategy(report.ptr, 0, &s), DUET_OK);
  EXPECT_STREQ(s.strategy, "duet");
  EXPECT_EQ(s.measurements_total, 600u);
  EXPECT_LE(s.ci.lower_pct, 5.0);
  EXPECT_GE(s.ci.upper_pct, 5.0);
  EXPECT_EQ(s.sweep_points, 4u);
  EXPECT_EQ(duet_report_strategy(report.ptr, 2, &s), DUET_ERR_RANGE);

  uint64_t n = 0;
  double width = -1;
  ASSERT_EQ(duet_report_sweep_point(report.ptr, 0, 0, &n, &width), DUET_OK);
  EXPECT_EQ(n, 50u);
  EXPECT_GE(width, 0.0);
  EXPECT_EQ(duet_report_sweep_point(report.ptr, 0, 4, &n, &width), DUET_ERR_RANGE);

  size_t needed = 0;
  ASSERT_EQ(duet_report_summary_json(report.ptr, 0, nullptr, 0, &needed), DUET_OK);
  std::string json(needed, '\0');
  ASSERT_EQ(duet_report_summary_json(report.ptr, 0, json.data(), json.size(), &needed), DUET_OK);
  EXPECT_NE(json.find("\"gate_strategy\""), std::string::npos);

  const fs::path dir = fs::temp_directory_path() / "duetbench_capi_emit";
  fs::remove_all(dir);
  fs::create_directories(dir);
  ASSERT_EQ(duet_report_emit(report.ptr, dir.c_str(), DUET_FORMAT_CSV), DUET_OK);
  EXPECT_TRUE(fs::exists(dir / "summary.csv"));
  EXPECT_TRUE(fs::exists(dir / "raw.csv"));
  EXPECT_TRUE(fs::exists(dir / "sweep.csv"));

  ReportHandle again;
  ASSERT_EQ(duet_analyze_raw_csv(cfg.ptr, (dir / "raw.csv").c_str(), &again.ptr), DUET_OK);
  duet_strategy_summary t{};
  ASSERT_EQ(duet_report_strategy(again.ptr, 0, &t), DUET_OK);
  ASSERT_EQ(duet_report_strategy(report.ptr, 0, &s), DUET_OK);
  EXPECT_EQ(t.ci.lower_pct, s.ci.lower_pct);
  EXPECT_EQ(t.ci.upper_pct, s.ci.upper_pct);
}

TEST(CApi, RunFailureLeavesOutputNull) {
  ConfigHandle cfg;
  ASSERT_EQ(duet_config_set(cfg.ptr, "repetitions", "10"), DUET_OK);
  duet_report* report = nullptr;
  EXPECT_EQ(duet_run_experiment(cfg.ptr, &report), DUET_ERR_INSUFFICIENT_SAMPLES);
  EXPECT_EQ(report, nullptr);
}

TEST(CApi, Primitives) {
  double change = 0;
  ASSERT_EQ(duet_relative_change(100, 105, &change), DUET_OK);
  EXPECT_EQ(change, 5.0);
  EXPECT_EQ(duet_relative_change(0, 105, &change), DUET_ERR_DIVISION_DOMAIN);

  std::vector<double> xs;
  for (int i = 1; i <= 100; ++i) xs.push_back(i);
  duet_interval iv{};
  ASSERT_EQ(duet_percentile_interval(xs.data(), xs.size(), 0.90, &iv), DUET_OK);
  EXPECT_EQ(iv.lower_pct, 6.0);
  EXPECT_EQ(iv.upper_pct, 95.0);
  EXPECT_EQ(duet_percentile_interval(xs.data(), 0, 0.90, &iv), DUET_ERR_EMPTY_SAMPLES);

  std::vector<double> flat(60, 2.5);
  ASSERT_EQ(duet_bootstrap_ci(flat.data(), flat.size(), 0.99, 1000, 1, &iv), DUET_OK);
  EXPECT_EQ(iv.lower_pct, 2.5);
  EXPECT_EQ(iv.upper_pct, 2.5);
  EXPECT_EQ(duet_bootstrap_ci(flat.data(), 10, 0.99, 1000, 1, &iv),
            DUET_ERR_INSUFFICIENT_SAMPLES);

  uint64_t checksum = 0, units = 0;
  ASSERT_EQ(duet_workload_run("mem_sieve", 30, 0, &checksum, &units), DUET_OK);
  EXPECT_EQ(units, 10u);
  EXPECT_EQ(duet_workload_run("mem_sieve", 1, 0, &checksum, &units), DUET_ERR_INVALID_WORKLOAD);
  EXPECT_EQ(duet_workload_run("gpu", 100, 0, &checksum, &units), DUET_ERR_INVALID_WORKLOAD);
  EXPECT_GE(duet_available_cores(), 1u);
}

}  // namespace
