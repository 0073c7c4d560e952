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

#pragma once

// Monte-Carlo recovery experiments: instance generation per trial, solver
// runs, success/acceptance bookkeeping, aggregation and persistence.

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "springback/sensing.hpp"
#include "springback/solvers.hpp"

namespace springback {

/// Which instance parameter a sweep varies.
enum class SweepKind { kSparsity, kRefinement, kSnr, kMeasurements };
std::string_view to_string(SweepKind kind);
SweepKind parse_sweep_kind(std::string_view name);

/// How a springback result is judged against ADMM-l1 on the same trial.
///  - kWithinTenfold:  err_springback <= 10 * err_l1 (filters blow-ups)
///  - kTenfoldSmaller: err_springback <= err_l1 / 10
enum class AcceptanceRule { kWithinTenfold, kTenfoldSmaller };
std::string_view to_string(AcceptanceRule rule);
AcceptanceRule parse_acceptance_rule(std::string_view name);

/// A solver as it appears in an experiment. `efficiency_detection` only
/// affects springback: when false, alpha skips the omega clamp.
struct SolverEntry {
  SolverId id = SolverId::kDcaSpringback;
  bool efficiency_detection = true;

  /// "dca_springback", or "dca_springback_noed" without efficiency detection.
  std::string label() const;
  static SolverEntry parse(std::string_view label);
  friend bool operator==(const SolverEntry&, const SolverEntry&) = default;
};

struct ExperimentSpec {
  std::string name = "custom";
  EnsembleSpec ensemble;  // ensemble.seed is ignored; seeds are derived per trial
  std::size_t sparsity = 10;
  std::size_t min_separation = 0;
  /// When positive, L = separation_factor * F (overrides min_separation).
  int separation_factor = 0;
  SweepKind sweep = SweepKind::kSparsity;
  std::vector<double> sweep_values{10};
  std::vector<SolverEntry> solvers{SolverEntry{}};
  int trials = 100;
  std::optional<double> snr_db;
  double omega = 0.5;
  double cond_threshold = 5.0;
  double success_tol = 1e-3;
  std::uint64_t master_seed = 1;
  AcceptanceRule acceptance = AcceptanceRule::kWithinTenfold;
  SolverOptions options;
  /// eps_outer used instead of options.eps_outer for noisy measurements.
  double eps_outer_noisy = 1e-3;

  friend bool operator==(const ExperimentSpec&, const ExperimentSpec&) = default;
};

/// Throws std::invalid_argument on an inconsistent spec.
void validate(const ExperimentSpec& spec);

/// Concrete instance parameters at one sweep value.
struct TrialSetting {
  EnsembleSpec ensemble;
  SignalSpec signal;
  std::optional<double> snr_db;
};
TrialSetting setting_at(const ExperimentSpec& spec, double sweep_value);

struct TrialRecord {
  int trial_index = 0;
  std::string solver_id;
  std::size_t s = 0;
  double relative_error = 0.0;
  double absolute_error = 0.0;
  bool success = false;
  std::optional<bool> accepted;
  double wall_time = 0.0;
  std::string status;
  double alpha_used = 0.0;
  double sweep_value = 0.0;

  friend bool operator==(const TrialRecord&, const TrialRecord&) = default;
};

struct SummaryRow {
  std::string solver_id;
  double sweep_value = 0.0;
  int trials = 0;
  int successes = 0;
  double success_rate = 0.0;
  std::optional<int> accepted;
  std::optional<double> acceptance_rate;
  double mean_error = 0.0;      // mean relative error
  double mean_log_error = 0.0;  // mean log10 relative error, floored at 1e-16
  double mean_abs_error = 0.0;
  std::optional<double> mean_accepted_abs_error;

  friend bool operator==(const SummaryRow&, const SummaryRow&) = default;
};

/// Instance built for one (sweep value, trial) pair, plus its content hash.
struct TrialInstance {
  ProblemInstance problem;
  std::uint64_t hash = 0;
  SingularExtremes singular;
};
TrialInstance make_instance(const ExperimentSpec& spec, int trial_index, double sweep_value);

/// FNV-1a over A, b, tau and the ground truth.
std::uint64_t instance_hash(const ProblemInstance& prob);

/// Runs every configured solver on one instance. Solver exceptions become
/// NUMERIC_FAILURE records; the sweep never aborts.
std::vector<TrialRecord> run_trial(const ExperimentSpec& spec, int trial_index, double sweep_value);

struct RunOptions {
  /// 0 selects SPRINGBACK_WORKERS or the hardware concurrency.
  unsigned workers = 0;
  /// Called after each finished work item with (done, total).
  std::function<void(std::size_t, std::size_t)> progress;
};

struct ExperimentResult {
  std::vector<TrialRecord> records;  // ordered by sweep value, trial, solver
  std::vector<SummaryRow> summary;
};

/// Runs all trials on a bounded worker pool and folds the records in
/// (sweep value, trial) order, so results do not depend on scheduling.
ExperimentResult run_experiment(const ExperimentSpec& spec, const RunOptions& run = {});

/// Aggregates records per (solver, sweep value), in first-appearance order.
std::vector<SummaryRow> summarize(const std::vector<TrialRecord>& records);

/// Worker count from SPRINGBACK_WORKERS, else hardware concurrency (>= 1).
unsigned default_workers();

/// Named experiment setups: fig4, fig4_dct, fig5, fig7, fig7_dct, fig8,
/// fig8_m. `literal_shape` selects the printed 128 x 64 Gaussian shape for
/// fig7 instead of 64 x 128.
ExperimentSpec preset(std::string_view name, bool literal_shape = false);
std::vector<std::string> preset_names();

// Config files ---------------------------------------------------------------

/// Parses the INI-style experiment grammar documented in the README. Unknown
/// sections or keys are errors.
ExperimentSpec parse_config(std::istream& in, std::string_view origin = "<config>");
ExperimentSpec load_config(const std::filesystem::path& path);
/// Writes every field at full precision; parse_config(write_config(s)) == s.
void write_config(std::ostream& out, const ExperimentSpec& spec);
/// Applies one "section.key=value" override.
void apply_override(ExperimentSpec& spec, std::string_view assignment);

// Result files ---------------------------------------------------------------

void write_records(std::ostream& out, const std::vector<TrialRecord>& records);
std::vector<TrialRecord> read_records(std::istream& in);
void write_summary(std::ostream& out, const std::vector<SummaryRow>& rows);
std::vector<SummaryRow> read_summary(std::istream& in);
void write_plot_script(std::ostream& out);

/// Writes records.csv, summary.csv, plot_success.py and manifest.cfg into
/// `dir` (created if needed). Throws std::runtime_error naming the path on
/// I/O failure.
void emit_results(const std::filesystem::path& dir, const ExperimentSpec& spec,
                  const ExperimentResult& result);

}  // namespace springback
