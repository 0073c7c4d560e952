/*
 * Copyright 2026 The Springback Authors
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

#include <charconv>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "springback/experiment.hpp"

namespace springback {

namespace {

constexpr std::string_view kRecordHeader =
    "trial_index,solver_id,s,relative_error,absolute_error,success,accepted,wall_time,status,"
    "alpha_used,sweep_value";
constexpr std::string_view kSummaryHeader =
    "solver_id,sweep_value,trials,successes,success_rate,accepted,acceptance_rate,mean_error,"
    "mean_log_error,mean_abs_error,mean_accepted_abs_error";

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(std::move(cur));
      cur.clear();
    } else if (c != '\r') {
      cur.push_back(c);
    }
  }
  out.push_back(std::move(cur));
  return out;
}

[[noreturn]] void bad_field(std::size_t line, std::string_view what, std::string_view value) {
  throw std::invalid_argument("line " + std::to_string(line) + ": bad " + std::string(what) + " '" +
                              std::string(value) + "'");
}

double parse_double(std::size_t line, std::string_view what, std::string_view v) {
  double out = 0.0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size()) bad_field(line, what, v);
  return out;
}

template <typename Int>
Int parse_int(std::size_t line, std::string_view what, std::string_view v) {
  Int out = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size()) bad_field(line, what, v);
  return out;
}

bool parse_bool(std::size_t line, std::string_view what, std::string_view v) {
  if (v == "true") return true;
  if (v == "false") return false;
  bad_field(line, what, v);
}

const char* bool_text(bool b) { return b ? "true" : "false"; }

// Reads the header, checks it, and returns the data rows split into fields.
std::vector<std::vector<std::string>> read_table(std::istream& in, std::string_view header,
                                                 std::size_t fields) {
  std::string line;
  if (!std::getline(in, line)) throw std::invalid_argument("missing header line");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != header) throw std::invalid_argument("unexpected header '" + line + "'");
  std::vector<std::vector<std::string>> rows;
  std::size_t number = 1;
  while (std::getline(in, line)) {
    ++number;
    if (line.empty() || line == "\r") continue;
    auto f = split_fields(line);
    if (f.size() != fields)
      throw std::invalid_argument("line " + std::to_string(number) + ": expected " + std::to_string(fields) +
                                  " fields, got " + std::to_string(f.size()));
    rows.push_back(std::move(f));
  }
  return rows;
}

template <typename Writer>
void write_file(const std::filesystem::path& path, Writer&& writer) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
  writer(out);
  out.flush();
  if (!out) throw std::runtime_error("failed writing '" + path.string() + "'");
}

}  // namespace

void write_records(std::ostream& out, const std::vector<TrialRecord>& records) {
  out << kRecordHeader << '\n';
  for (const TrialRecord& r : records) {
    out << r.trial_index << ',' << r.solver_id << ',' << r.s << ',' << fmt(r.relative_error) << ','
        << fmt(r.absolute_error) << ',' << bool_text(r.success) << ','
        << (r.accepted ? bool_text(*r.accepted) : "") << ',' << fmt(r.wall_time) << ',' << r.status << ','
        << fmt(r.alpha_used) << ',' << fmt(r.sweep_value) << '\n';
  }
}

std::vector<TrialRecord> read_records(std::istream& in) {
  std::vector<TrialRecord> out;
  std::size_t line = 1;
  for (const auto& f : read_table(in, kRecordHeader, 11)) {
    ++line;
    TrialRecord r;
    r.trial_index = parse_int<int>(line, "trial_index", f[0]);
    r.solver_id = f[1];
    r.s = parse_int<std::size_t>(line, "s", f[2]);
    r.relative_error = parse_double(line, "relative_error", f[3]);
    r.absolute_error = parse_double(line, "absolute_error", f[4]);
    r.success = parse_bool(line, "success", f[5]);
    if (!f[6].empty()) r.accepted = parse_bool(line, "accepted", f[6]);
    r.wall_time = parse_double(line, "wall_time", f[7]);
    r.status = f[8];
    r.alpha_used = parse_double(line, "alpha_used", f[9]);
    r.sweep_value = parse_double(line, "sweep_value", f[10]);
    out.push_back(std::move(r));
  }
  return out;
}

void write_summary(std::ostream& out, const std::vector<SummaryRow>& rows) {
  out << kSummaryHeader << '\n';
  for (const SummaryRow& r : rows) {
    out << r.solver_id << ',' << fmt(r.sweep_value) << ',' << r.trials << ',' << r.successes << ','
        << fmt(r.success_rate) << ',' << (r.accepted ? std::to_string(*r.accepted) : "") << ','
        << (r.acceptance_rate ? fmt(*r.acceptance_rate) : "") << ',' << fmt(r.mean_error) << ','
        << fmt(r.mean_log_error) << ',' << fmt(r.mean_abs_error) << ','
        << (r.mean_accepted_abs_error ? fmt(*r.mean_accepted_abs_error) : "") << '\n';
  }
}

std::vector<SummaryRow> read_summary(std::istream& in) {
  std::vector<SummaryRow> out;
  std::size_t line = 1;
  for (const auto& f : read_table(in, kSummaryHeader, 11)) {
    ++line;
    SummaryRow r;
    r.solver_id = f[0];
    r.sweep_value = parse_double(line, "sweep_value", f[1]);
    r.trials = parse_int<int>(line, "trials", f[2]);
    r.successes = parse_int<int>(line, "successes", f[3]);
    r.success_rate = parse_double(line, "success_rate", f[4]);
    if (!f[5].empty()) r.accepted = parse_int<int>(line, "accepted", f[5]);
    if (!f[6].empty()) r.acceptance_rate = parse_double(line, "acceptance_rate", f[6]);
    r.mean_error = parse_double(line, "mean_error", f[7]);
    r.mean_log_error = parse_double(line, "mean_log_error", f[8]);
    r.mean_abs_error = parse_double(line, "mean_abs_error", f[9]);
    if (!f[10].empty()) r.mean_accepted_abs_error = parse_double(line, "mean_accepted_abs_error", f[10]);
    out.push_back(std::move(r));
  }
  return out;
}

void write_plot_script(std::ostream& out) {
  out << R"(#!/usr/bin/env python3
"""Plot success rate against the sweep value for each solver in summary.csv."""
import csv
import sys
from collections import defaultdict

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

summary = sys.argv[1] if len(sys.argv) > 1 else "summary.csv"
target = sys.argv[2] if len(sys.argv) > 2 else "success.png"

curves = defaultdict(list)
with open(summary, newline="") as fh:
    for row in csv.DictReader(fh):
        curves[row["solver_id"]].append((float(row["sweep_value"]), float(row["success_rate"])))

fig, ax = plt.subplots(figsize=(6, 4))
for solver, points in curves.items():
    points.sort()
    ax.plot([p[0] for p in points], [p[1] for p in points], marker="o", label=solver)
ax.set_xlabel("sweep value")
ax.set_ylabel("success rate")
ax.set_ylim(-0.05, 1.05)
ax.grid(True, alpha=0.3)
ax.legend()
fig.tight_layout()
fig.savefig(target, dpi=150)
print(f"wrote {target}")
)";
}

void emit_results(const std::filesystem::path& dir, const ExperimentSpec& spec,
                  const ExperimentResult& result) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw std::runtime_error("cannot create directory '" + dir.string() + "': " + ec.message());
  write_file(dir / "records.csv", [&](std::ostream& o) { write_records(o, result.records); });
  write_file(dir / "summary.csv", [&](std::ostream& o) { write_summary(o, result.summary); });
  write_file(dir / "plot_success.py", [&](std::ostream& o) { write_plot_script(o); });
  write_file(dir / "manifest.cfg", [&](std::ostream& o) { write_config(o, spec); });
}

}  // namespace springback
