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
#include <charconv>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <string>

#include "json.hpp"

#include "duetbench/error.hpp"
#include "duetbench/harness.hpp"

namespace duetbench {

namespace {

constexpr std::string_view kRawHeader =
    "strategy,instance_id,repetition,version,duration_ns,clock_mode,cold,"
    "order_position";

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::IoError, "cannot open " + path.string());
  out << text;
  out.close();
  if (!out) throw Error(ErrorCode::IoError, "failed writing " + path.string());
}

std::vector<std::string_view> split_csv_line(std::string_view line) {
  std::vector<std::string_view> fields;
  while (true) {
    const std::size_t comma = line.find(',');
    fields.push_back(line.substr(0, comma));
    if (comma == std::string_view::npos) break;
    line.remove_prefix(comma + 1);
  }
  return fields;
}

template <typename T>
T parse_int(std::string_view text, std::size_t line_no, const char* column) {
  T out{};
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw Error(ErrorCode::ParseError,
                "raw CSV line " + std::to_string(line_no) + ": bad " + column +
                    " '" + std::string(text) + "'");
  }
  return out;
}

void require_strategies(const Report& report) {
  if (report.strategies.empty()) {
    throw Error(ErrorCode::InvalidArgument, "report holds no strategy results");
  }
}

}  // namespace

ReportFormat parse_report_format(std::string_view text) {
  if (text == "json") return ReportFormat::Json;
  if (text == "csv") return ReportFormat::Csv;
  throw Error(ErrorCode::ParseError,
              "unknown report format '" + std::string(text) + "'");
}

std::string summary_json(const Report& report, bool include_timestamps) {
  require_strategies(report);
  nlohmann::ordered_json j;
  j["seed"] = report.config.seed;
  j["verdict"] = to_string(report.verdict);
  j["gate_strategy"] = to_string(report.strategies.front().strategy);
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (const StrategyResult& r : report.strategies) {
    nlohmann::ordered_json row;
    row["strategy"] = to_string(r.strategy);
    row["median_change_pct"] = r.median_change_pct;
    row["ci"] = {{"lower_pct", r.ci.lower_pct},
                 {"upper_pct", r.ci.upper_pct},
                 {"level", r.ci.level},
                 {"width_pp", r.ci.width_pp}};
    row["verdict"] = to_string(r.verdict);
    row["measurements_total"] = r.measurements_total;
    row["measurements_after_filter"] = r.measurements_after_filter;
    row["pairs_total"] = r.pairs_total;
    row["pairs_after_filter"] = r.pairs_after_filter;
    if (!r.sweep.empty()) {
      row["sweep_to_effective"] = r.sweep_to_effective;
      nlohmann::ordered_json series = nlohmann::ordered_json::array();
      for (const SweepPoint& p : r.sweep) series.push_back({p.n, p.width_pp});
      row["sweep"] = series;
    }
    rows.push_back(row);
  }
  j["strategies"] = rows;
  j["config"] = nlohmann::ordered_json::parse(config_to_json(report.config));
  if (include_timestamps) {
    j["timestamps"] = {{"started_at", report.started_at},
                       {"finished_at", report.finished_at}};
  }
  return j.dump(2) + "\n";
}

std::string summary_csv(const Report& report) {
  require_strategies(report);
  std::string out =
      "strategy,median_change_pct,ci_lower_pct,ci_upper_pct,ci_level,width_pp,"
      "verdict,measurements_total,measurements_after_filter,pairs_total,"
      "pairs_after_filter\n";
  for (const StrategyResult& r : report.strategies) {
    out += std::string(to_string(r.strategy)) + ',' + num(r.median_change_pct) +
           ',' + num(r.ci.lower_pct) + ',' + num(r.ci.upper_pct) + ',' +
           num(r.ci.level) + ',' + num(r.ci.width_pp) + ',' +
           std::string(to_string(r.verdict)) + ',' +
           std::to_string(r.measurements_total) + ',' +
           std::to_string(r.measurements_after_filter) + ',' +
           std::to_string(r.pairs_total) + ',' +
           std::to_string(r.pairs_after_filter) + '\n';
  }
  return out;
}

std::string raw_csv(const Report& report) {
  require_strategies(report);
  std::string out(kRawHeader);
  out += '\n';
  for (const StrategyResult& r : report.strategies) {
    for (const Measurement& m : r.raw) {
      out += std::string(to_string(m.strategy)) + ',' +
             std::to_string(m.instance_id) + ',' + std::to_string(m.repetition) +
             ',' + m.version_label + ',' + std::to_string(m.duration_ns) + ',' +
             std::string(to_string(m.clock_mode)) + ',' +
             (m.cold ? "true" : "false") + ',' +
             (m.order_position ? std::to_string(*m.order_position) : "") + '\n';
    }
  }
  return out;
}

std::string sweep_csv(const Report& report) {
  require_strategies(report);
  std::map<std::uint64_t, std::vector<std::string>> rows;
  const std::size_t columns = report.strategies.size();
  std::string out = "n";
  for (std::size_t c = 0; c < columns; ++c) {
    const StrategyResult& r = report.strategies[c];
    out += ',' + std::string(to_string(r.strategy)) + "_width_pp";
    for (const SweepPoint& p : r.sweep) {
      auto& row = rows[p.n];
      row.resize(columns);
      row[c] = num(p.width_pp);
    }
  }
  out += '\n';
  for (auto& [n, cells] : rows) {
    out += std::to_string(n);
    for (const std::string& cell : cells) out += ',' + cell;
    out += '\n';
  }
  return out;
}

Measurements parse_raw_csv(std::string_view text) {
  Measurements out;
  std::size_t line_no = 0;
  bool header_seen = false;
  while (!text.empty()) {
    const std::size_t eol = text.find('\n');
    std::string_view line = text.substr(0, eol);
    text.remove_prefix(eol == std::string_view::npos ? text.size() : eol + 1);
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    if (!header_seen) {
      if (line != kRawHeader) {
        throw Error(ErrorCode::ParseError,
                    "raw CSV header must be '" + std::string(kRawHeader) + "'");
      }
      header_seen = true;
      continue;
    }
    const auto f = split_csv_line(line);
    if (f.size() != 8) {
      throw Error(ErrorCode::ParseError,
                  "raw CSV line " + std::to_string(line_no) + ": expected 8 "
                  "fields, got " + std::to_string(f.size()));
    }
    Measurement m;
    try {
      m.strategy = parse_strategy(f[0]);
      m.clock_mode = parse_clock_mode(f[5]);
    } catch (const Error& e) {
      throw Error(ErrorCode::ParseError,
                  "raw CSV line " + std::to_string(line_no) + ": " + e.what());
    }
    m.instance_id = parse_int<int>(f[1], line_no, "instance_id");
    m.repetition = parse_int<std::uint64_t>(f[2], line_no, "repetition");
    m.version_label = std::string(f[3]);
    m.duration_ns = parse_int<std::uint64_t>(f[4], line_no, "duration_ns");
    if (f[6] == "true") {
      m.cold = true;
    } else if (f[6] != "false") {
      throw Error(ErrorCode::ParseError,
                  "raw CSV line " + std::to_string(line_no) + ": bad cold flag");
    }
    if (!f[7].empty()) m.order_position = parse_int<int>(f[7], line_no, "order_position");
    out.push_back(std::move(m));
  }
  if (!header_seen) throw Error(ErrorCode::ParseError, "raw CSV is empty");
  return out;
}

Measurements read_raw_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot read " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return parse_raw_csv(text.str());
}

EmittedFiles emit_report(const Report& report, ReportFormat format,
                         const std::filesystem::path& dir) {
  require_strategies(report);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) {
    throw Error(ErrorCode::IoError,
                "cannot create " + dir.string() + ": " + ec.message());
  }
  EmittedFiles files;
  if (format == ReportFormat::Json) {
    files.summary = dir / "summary.json";
    write_file(files.summary, summary_json(report));
  } else {
    files.summary = dir / "summary.csv";
    write_file(files.summary, summary_csv(report));
  }
  files.raw = dir / "raw.csv";
  write_file(files.raw, raw_csv(report));
  const bool swept = std::any_of(
      report.strategies.begin(), report.strategies.end(),
      [](const StrategyResult& r) { return !r.sweep.empty(); });
  if (swept) {
    files.sweep = dir / "sweep.csv";
    write_file(*files.sweep, sweep_csv(report));
  }
  return files;
}

}  // namespace duetbench
