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

#include "cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <limits>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "springback/bounds.hpp"
#include "springback/experiment.hpp"
#include "springback/penalties.hpp"
#include "springback/sensing.hpp"
#include "springback/solvers.hpp"

namespace springback::cli {

namespace {

std::string num(double v, int digits = 6) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

// threshold ------------------------------------------------------------------

struct ThresholdArgs {
  std::string op;
  std::vector<double> w;
  double lambda = 0.25;
  double alpha = 1.0;
  double mu = 0.75;
};

void run_threshold(const ThresholdArgs& a, std::ostream& out) {
  for (double w : a.w) {
    double v = 0.0;
    if (a.op == "soft") {
      v = soft_threshold(w, a.lambda);
    } else if (a.op == "firm") {
      v = firm_threshold(w, a.lambda, a.mu);
    } else {
      v = springback_threshold(w, a.lambda, a.alpha);
    }
    out << num(w, 12) << ' ' << num(v, 12) << '\n';
  }
}

// curve ----------------------------------------------------------------------

struct CurveArgs {
  std::string kind;
  double from = -3.0;
  double to = 3.0;
  int points = 601;
  ThresholdParams params{.lambda = 1.0, .alpha = 0.5, .mu = 1.0, .beta = 1.0, .p = 0.5};
};

void run_curve(const CurveArgs& a, std::ostream& out) {
  if (a.points < 2) throw std::invalid_argument("--points must be at least 2");
  const PenaltyKind kind = parse_penalty_kind(a.kind);
  validate(kind, a.params);
  out << "x," << to_string(kind) << '\n';
  for (int i = 0; i < a.points; ++i) {
    const double x = a.from + (a.to - a.from) * i / (a.points - 1);
    const double v = penalty_value(kind, std::span<const double>(&x, 1), a.params);
    out << num(x, 10) << ',' << num(v, 10) << '\n';
  }
}

// bounds ---------------------------------------------------------------------

struct BoundsArgs {
  bool toy = false;
  int s = 0;
  double delta3s = 0.0;
  double delta4s = 0.0;
  double alpha = 1.0;
  double beta = 1.0;
  double tau = 0.0;
  double tail = 0.0;
  std::optional<double> xopt_norm;
};

const RipProfile kToyProfile{20, 0.25, 1.0 / 3.0};

struct ThresholdCase {
  std::string label;
  PenaltyKind kind;
  double p;
};

std::vector<ThresholdCase> threshold_cases() {
  return {{"l1", PenaltyKind::kL1, 0.5},     {"l0.2", PenaltyKind::kLp, 0.2},
          {"l0.5", PenaltyKind::kLp, 0.5},   {"l0.999", PenaltyKind::kLp, 0.999},
          {"tl1", PenaltyKind::kTL1, 0.5},   {"l1-2", PenaltyKind::kL1Minus2, 0.5}};
}

std::vector<ToyRow> thresholds_for(const RipProfile& prof, double alpha, double beta) {
  std::vector<ToyRow> rows;
  for (const auto& c : threshold_cases()) {
    ThresholdParams params;
    params.p = c.p;
    params.beta = beta;
    rows.push_back({c.label, noise_threshold(c.kind, prof, alpha, params, false),
                    exact_condition(c.kind, prof, params)});
  }
  return rows;
}

void print_thresholds(const std::vector<ToyRow>& rows, std::ostream& out) {
  out << std::left << std::setw(10) << "penalty" << std::setw(16) << "tau >" << "exact condition\n";
  for (const auto& r : rows)
    out << std::left << std::setw(10) << r.label << std::setw(16) << num(r.threshold)
        << (r.condition_holds ? "holds" : "fails") << '\n';
}

void run_bounds(const BoundsArgs& a, std::ostream& out) {
  if (a.toy) {
    out << "toy profile: s = 20, delta3s = 1/4, delta4s = 1/3, alpha = 1, beta = 1\n";
    print_thresholds(toy_thresholds(), out);
    return;
  }
  const RipProfile prof{a.s, a.delta3s, a.delta4s};
  validate(prof);
  const bool ok = rip_condition(prof);
  out << "rip_condition  " << (ok ? "holds" : "fails") << '\n';
  out << "D1             " << num(d1(prof, a.alpha)) << '\n';
  out << "D2             " << num(d2(prof)) << '\n';
  out << "a(s)           " << num(a_of_s(prof.s)) << '\n';
  if (ok) {
    const auto plain = recovery_bound(prof, a.alpha, a.tau, a.tail, false);
    const auto improved = recovery_bound(prof, a.alpha, a.tau, a.tail, true);
    out << "bound          " << num(plain.bound) << "  (" << to_string(plain.kind) << ")\n";
    out << "bound_improved " << num(improved.bound) << "  (" << to_string(improved.kind) << ")\n";
    out << "C_s (l1)       " << num(basis_pursuit_noise_constant(prof)) << '\n';
  }
  if (a.xopt_norm)
    out << "alpha_max      " << num(alpha_posterior_bound(prof, *a.xopt_norm)) << '\n';
  out << '\n';
  print_thresholds(thresholds_for(prof, a.alpha, a.beta), out);
}

// solve ----------------------------------------------------------------------

struct SolveArgs {
  std::string problem;
  std::string solver = "dca_springback";
  std::string ensemble = "gaussian";
  std::size_t m = 64;
  std::size_t n = 160;
  int refinement = 1;
  std::size_t sparsity = 10;
  std::size_t min_separation = 0;
  std::uint64_t seed = 1;
  std::optional<double> snr;
  std::optional<double> alpha;
  double omega = 0.5;
  double cond_threshold = 5.0;
  std::vector<std::string> overrides;
  std::string x_out;
};

std::vector<double> json_vector(const nlohmann::json& j, const char* what) {
  if (!j.is_array()) throw std::invalid_argument(std::string(what) + " must be an array");
  return j.get<std::vector<double>>();
}

ProblemInstance load_problem(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open problem file '" + path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(path + ": " + e.what());
  }
  ProblemInstance prob;
  try {
    const auto& rows = j.at("a");
    if (!rows.is_array() || rows.empty()) throw std::invalid_argument("a must be a non-empty array of rows");
    const std::size_t cols = rows.front().size();
    std::vector<double> entries;
    for (const auto& row : rows) {
      auto r = json_vector(row, "a row");
      if (r.size() != cols) throw std::invalid_argument("rows of a differ in length");
      entries.insert(entries.end(), r.begin(), r.end());
    }
    prob.a = Matrix(rows.size(), cols, std::move(entries));
    prob.b = json_vector(j.at("b"), "b");
    prob.tau = j.value("tau", 0.0);
    if (j.contains("x_true")) prob.ground_truth = json_vector(j.at("x_true"), "x_true");
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(path + ": " + e.what());
  }
  validate(prob);
  return prob;
}

ProblemInstance generate_problem(const SolveArgs& a) {
  EnsembleSpec es;
  es.kind = parse_ensemble_kind(a.ensemble);
  es.m = a.m;
  es.n = a.n;
  es.refinement = a.refinement;
  es.seed = derive_seed(a.seed, 1);
  SignalSpec ss{a.n, a.sparsity, a.min_separation, derive_seed(a.seed, 2)};
  ProblemInstance prob;
  prob.a = gen_matrix(es);
  prob.ground_truth = gen_signal(ss);
  prob.b = matvec(prob.a, *prob.ground_truth);
  if (a.snr) {
    auto noisy = add_noise_snr(prob.b, *a.snr, derive_seed(a.seed, 3));
    prob.b = std::move(noisy.noisy);
    prob.tau = noisy.tau;
  }
  return prob;
}

void run_solve(const SolveArgs& a, bool generated_sparsity, std::ostream& out) {
  const SolverId id = parse_solver_id(a.solver);
  ProblemInstance prob = a.problem.empty() ? generate_problem(a) : load_problem(a.problem);

  ExperimentSpec holder;
  for (const auto& o : a.overrides) {
    if (o.rfind("solver.", 0) != 0)
      throw std::invalid_argument("solve only accepts solver.* overrides, got '" + o + "'");
    apply_override(holder, o);
  }
  SolverOptions opts = holder.options;
  if (a.problem.empty() || generated_sparsity) opts.sparsity_estimate = a.sparsity;
  if (id == SolverId::kAiht && opts.sparsity_estimate == 0)
    throw std::invalid_argument("aiht needs a sparsity level (--sparsity)");

  const double b_norm = norm2(prob.b);
  const SingularExtremes sv = singular_extremes(prob.a);
  opts.sigma_min = sv.sigma_min;
  if (a.alpha) {
    opts.alpha = *a.alpha;
  } else {
    opts.alpha = b_norm + prob.tau > 0.0
                     ? alpha_subroutine(sv, b_norm, prob.tau, a.omega, a.cond_threshold)
                     : 0.7;
  }

  const SolverReport rep = solve(id, prob, opts);
  std::size_t nnz = 0;
  for (double v : rep.x_star) nnz += std::abs(v) > 1e-8 ? 1 : 0;

  out << "solver            " << to_string(id) << '\n';
  out << "size              " << prob.a.rows() << " x " << prob.a.cols() << '\n';
  out << "tau               " << num(prob.tau) << '\n';
  out << "alpha             " << num(opts.alpha) << '\n';
  out << "status            " << to_string(rep.status) << '\n';
  out << "outer_iterations  " << rep.outer_iterations << '\n';
  out << "inner_iterations  " << rep.inner_iterations_total << '\n';
  out << "residual          " << num(rep.residual) << '\n';
  out << "nonzeros          " << nnz << '\n';
  if (!rep.objective_trace.empty()) out << "objective         " << num(rep.objective_trace.back(), 10) << '\n';
  if (rep.convergence_alpha_ok)
    out << "alpha_convergence " << (*rep.convergence_alpha_ok ? "ok" : "violated") << '\n';
  if (prob.ground_truth) {
    const double err = distance2(rep.x_star, *prob.ground_truth);
    const double tn = norm2(*prob.ground_truth);
    out << "relative_error    " << num(tn > 0.0 ? err / tn : err) << '\n';
  }

  if (!a.x_out.empty()) {
    std::ofstream f(a.x_out);
    if (!f) throw std::runtime_error("cannot open '" + a.x_out + "' for writing");
    f << nlohmann::json{{"x", rep.x_star}, {"status", std::string(to_string(rep.status))}}.dump(1) << '\n';
    if (!f) throw std::runtime_error("failed writing '" + a.x_out + "'");
  }
}

// bench / report -------------------------------------------------------------

struct BenchArgs {
  std::string config;
  std::string preset_name;
  std::string out_dir;
  unsigned workers = 0;
  bool serial = false;
  bool literal_shape = false;
  bool quiet = false;
  bool list = false;
  std::vector<std::string> overrides;
};

void print_summary(const std::vector<SummaryRow>& rows, std::ostream& out) {
  out << std::left << std::setw(22) << "solver" << std::setw(10) << "value" << std::setw(10) << "success"
      << std::setw(10) << "accept" << "mean_rel_error\n";
  for (const auto& r : rows) {
    out << std::left << std::setw(22) << r.solver_id << std::setw(10) << num(r.sweep_value)
        << std::setw(10) << num(r.success_rate, 4) << std::setw(10)
        << (r.acceptance_rate ? num(*r.acceptance_rate, 4) : std::string("-")) << num(r.mean_error, 4)
        << '\n';
  }
}

int run_bench(const BenchArgs& a, std::ostream& out, std::ostream& err) {
  if (a.list) {
    for (const auto& name : preset_names()) out << name << '\n';
    return 0;
  }
  if (a.config.empty() == a.preset_name.empty())
    throw std::invalid_argument("bench needs exactly one of --config or --preset");
  ExperimentSpec spec = a.config.empty() ? preset(a.preset_name, a.literal_shape) : load_config(a.config);
  for (const auto& o : a.overrides) apply_override(spec, o);
  validate(spec);

  RunOptions run;
  run.workers = a.serial ? 1U : a.workers;
  if (!a.quiet) {
    run.progress = [&err, last = std::size_t{0}](std::size_t done, std::size_t total) mutable {
      const std::size_t pct = done * 100 / total;
      if (pct >= last + 10 || done == total) {
        last = pct;
        err << "  " << done << '/' << total << " instances\n";
      }
    };
  }
  const ExperimentResult result = run_experiment(spec, run);
  const std::filesystem::path dir = a.out_dir.empty() ? std::filesystem::path("results") / spec.name
                                                      : std::filesystem::path(a.out_dir);
  emit_results(dir, spec, result);
  print_summary(result.summary, out);
  out << "wrote " << dir.string() << '\n';
  return 0;
}

void run_report(const std::string& records_path, const std::string& out_path, std::ostream& out) {
  std::ifstream in(records_path);
  if (!in) throw std::runtime_error("cannot open records file '" + records_path + "'");
  std::vector<TrialRecord> records;
  try {
    records = read_records(in);
  } catch (const std::invalid_argument& e) {
    throw std::invalid_argument(records_path + ": " + e.what());
  }
  const auto rows = summarize(records);
  if (out_path.empty()) {
    write_summary(out, rows);
    return;
  }
  std::ofstream f(out_path);
  if (!f) throw std::runtime_error("cannot open '" + out_path + "' for writing");
  write_summary(f, rows);
  if (!f) throw std::runtime_error("failed writing '" + out_path + "'");
  print_summary(rows, out);
}

}  // namespace

std::vector<ToyRow> toy_thresholds() { return thresholds_for(kToyProfile, 1.0, 1.0); }

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Sparse recovery with the springback penalty"};
  app.name(args.empty() ? "springback" : args.front());
  app.require_subcommand(1);

  ThresholdArgs ta;
  auto* threshold = app.add_subcommand("threshold", "Evaluate a scalar thresholding operator");
  threshold->add_option("op", ta.op, "soft, firm or springback")
      ->required()
      ->check(CLI::IsMember({"soft", "firm", "springback"}));
  threshold->add_option("--w", ta.w, "Input values")->required()->delimiter(',');
  threshold->add_option("--lambda", ta.lambda, "Threshold weight")->capture_default_str();
  threshold->add_option("--alpha", ta.alpha, "Springback weight")->capture_default_str();
  threshold->add_option("--mu", ta.mu, "Firm saturation point")->capture_default_str();

  CurveArgs ca;
  auto* curve = app.add_subcommand("curve", "Sample a penalty on a 1-D grid (CSV)");
  curve->add_option("kind", ca.kind, "Penalty name")->required();
  curve->add_option("--from", ca.from)->capture_default_str();
  curve->add_option("--to", ca.to)->capture_default_str();
  curve->add_option("--points", ca.points)->capture_default_str();
  curve->add_option("--lambda", ca.params.lambda)->capture_default_str();
  curve->add_option("--alpha", ca.params.alpha)->capture_default_str();
  curve->add_option("--mu", ca.params.mu)->capture_default_str();
  curve->add_option("--beta", ca.params.beta)->capture_default_str();
  curve->add_option("--p", ca.params.p)->capture_default_str();

  BoundsArgs ba;
  auto* bounds = app.add_subcommand("bounds", "Recovery conditions, constants and noise thresholds");
  bounds->add_flag("--toy", ba.toy, "Noise thresholds of the s = 20 toy profile");
  auto* s_opt = bounds->add_option("--s", ba.s, "Sparsity level");
  bounds->add_option("--delta3s", ba.delta3s, "RIP constant of order 3s");
  bounds->add_option("--delta4s", ba.delta4s, "RIP constant of order 4s");
  bounds->add_option("--alpha", ba.alpha)->capture_default_str();
  bounds->add_option("--beta", ba.beta, "TL1 shape")->capture_default_str();
  bounds->add_option("--tau", ba.tau, "Noise level")->capture_default_str();
  bounds->add_option("--tail", ba.tail, "l1 norm of the signal tail")->capture_default_str();
  bounds->add_option("--xopt-norm", ba.xopt_norm, "Norm of the minimizer, for the alpha ceiling");
  s_opt->excludes(bounds->get_option("--toy"));

  SolveArgs sa;
  auto* solve_cmd = app.add_subcommand("solve", "Solve one instance from a file or a generated ensemble");
  solve_cmd->add_option("--problem", sa.problem, "JSON file with a, b, tau and optional x_true");
  solve_cmd->add_option("--solver", sa.solver)->capture_default_str();
  solve_cmd->add_option("--ensemble", sa.ensemble, "gaussian, partial_dct or oversampled_dct")
      ->capture_default_str();
  solve_cmd->add_option("--m", sa.m)->capture_default_str();
  solve_cmd->add_option("--n", sa.n)->capture_default_str();
  solve_cmd->add_option("--refinement", sa.refinement, "Oversampling factor F")->capture_default_str();
  auto* sparsity_opt = solve_cmd->add_option("--sparsity", sa.sparsity)->capture_default_str();
  solve_cmd->add_option("--min-separation", sa.min_separation)->capture_default_str();
  solve_cmd->add_option("--seed", sa.seed)->capture_default_str();
  solve_cmd->add_option("--snr", sa.snr, "Measurement SNR in dB (noiseless if absent)");
  solve_cmd->add_option("--alpha", sa.alpha, "Fixed alpha (default: alpha subroutine)");
  solve_cmd->add_option("--omega", sa.omega)->capture_default_str();
  solve_cmd->add_option("--cond-threshold", sa.cond_threshold)->capture_default_str();
  solve_cmd->add_option("--set", sa.overrides, "solver.key=value override");
  solve_cmd->add_option("--x-out", sa.x_out, "Write the solution as JSON");

  BenchArgs bench_args;
  auto* bench = app.add_subcommand("bench", "Run a Monte-Carlo recovery experiment");
  auto* cfg_opt = bench->add_option("--config", bench_args.config, "Experiment config file");
  auto* preset_opt = bench->add_option("--preset", bench_args.preset_name, "Named experiment setup");
  cfg_opt->excludes(preset_opt);
  bench->add_option("--out", bench_args.out_dir, "Output directory (default results/<name>)");
  bench->add_option("--workers", bench_args.workers, "Worker threads (default SPRINGBACK_WORKERS or all cores)");
  bench->add_flag("--serial", bench_args.serial, "Run on one thread");
  bench->add_flag("--literal-shape", bench_args.literal_shape, "Use the printed 128 x 64 shape for fig7");
  bench->add_flag("--quiet", bench_args.quiet, "No progress output");
  bench->add_flag("--list-presets", bench_args.list, "List preset names and exit");
  bench->add_option("--set", bench_args.overrides, "section.key=value override");

  std::string records_path, report_out;
  auto* report = app.add_subcommand("report", "Re-aggregate a records.csv file");
  report->add_option("records", records_path, "records.csv")->required();
  report->add_option("--out", report_out, "Write summary CSV here instead of stdout");

  std::vector<const char*> argv;
  argv.reserve(args.size() + 1);
  if (args.empty()) argv.push_back("springback");
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return 2;
  }

  try {
    if (threshold->parsed()) {
      run_threshold(ta, out);
    } else if (curve->parsed()) {
      run_curve(ca, out);
    } else if (bounds->parsed()) {
      if (!ba.toy && s_opt->count() == 0) {
        err << "bounds: pass --toy or --s/--delta3s/--delta4s\n" << bounds->help();
        return 2;
      }
      run_bounds(ba, out);
    } else if (solve_cmd->parsed()) {
      run_solve(sa, sparsity_opt->count() > 0, out);
    } else if (bench->parsed()) {
      return run_bench(bench_args, out, err);
    } else if (report->parsed()) {
      run_report(records_path, report_out, out);
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

}  // namespace springback::cli
