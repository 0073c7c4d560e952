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

// Acceptance suite. Prints one PASS/FAIL line per criterion; with arguments,
// runs only the listed criterion numbers. Exit status is nonzero if any
// selected criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "springback/bounds.hpp"
#include "springback/experiment.hpp"
#include "springback/penalties.hpp"
#include "springback/sensing.hpp"
#include "springback/solvers.hpp"

namespace sb = springback;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

using Clock = std::chrono::steady_clock;
double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

// 1 ---------------------------------------------------------------------------

Outcome toy_thresholds() {
  const auto t0 = Clock::now();
  std::ostringstream out, err;
  const int code = sb::cli::run({"springback", "bounds", "--toy"}, out, err);
  const double elapsed = seconds_since(t0);
  if (code != 0) return {false, "bounds --toy exited with " + std::to_string(code)};

  // Rows after the two header lines: "<label> <threshold> <holds|fails>".
  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line);
  std::getline(in, line);
  std::vector<double> got;
  while (std::getline(in, line)) {
    std::istringstream row(line);
    std::string label;
    double v = NAN;
    row >> label >> v;
    got.push_back(v);
  }
  const std::vector<double> want{0.1385, 0.0271, 0.2333, 0.1391, 0.0807, 2.8652e-4};
  const std::vector<double> tol{1e-3, 1e-3, 1e-3, 1e-3, 1e-3, 1e-2};
  if (got.size() != want.size()) return {false, "expected 6 rows, got " + std::to_string(got.size())};
  bool ok = elapsed < 1.0;
  double worst = 0.0;
  for (std::size_t i = 0; i < want.size(); ++i) {
    const double rel = std::abs(got[i] - want[i]) / want[i];
    worst = std::max(worst, rel / tol[i]);
    ok = ok && rel <= tol[i];
  }
  return {ok, fmt("worst relative error %.3g of its tolerance, %.3f s", worst, elapsed)};
}

// 2 ---------------------------------------------------------------------------

Outcome prox_oracle() {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(sb::derive_seed(2026, 2));
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  int cases = 0, bad = 0;
  double worst = 0.0;
  while (cases < 200) {
    const double lambda = 0.05 + 1.95 * u01(rng);
    const double slack = 0.1 + 0.9 * u01(rng);  // 1 - lambda alpha in [0.1, 1)
    const double alpha = (1.0 - slack) / lambda;
    const double w = -5.0 + 10.0 * u01(rng);
    double best_y = 0.0, best_v = INFINITY;
    for (int i = -50000; i <= 50000; ++i) {
      const double y = i * 1e-4;
      const double v = 0.5 * (y - w) * (y - w) + lambda * (std::abs(y) - 0.5 * alpha * y * y);
      if (v < best_v) {
        best_v = v;
        best_y = y;
      }
    }
    if (std::abs(best_y) >= 5.0) continue;  // minimizer outside the grid window
    ++cases;
    const double err = std::abs(sb::springback_threshold(w, lambda, alpha) - best_y);
    worst = std::max(worst, err);
    if (err > 2e-4) ++bad;
  }
  const double elapsed = seconds_since(t0);
  return {bad == 0 && elapsed < 10.0,
          fmt("%d/200 cases off by more than 2e-4, worst %.3g, %.2f s", bad, worst, elapsed)};
}

// 3 ---------------------------------------------------------------------------

Outcome operator_identities() {
  std::mt19937_64 rng(sb::derive_seed(2026, 3));
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  int firm_mismatch = 0, odd_mismatch = 0;
  double soft_gap = 0.0;
  for (int i = 0; i < 10000; ++i) {
    const double mu = 0.1 + 3.0 * u01(rng);
    const double lambda = mu * (0.01 + 0.98 * u01(rng));
    const double w = mu * (2.0 * u01(rng) - 1.0);
    if (sb::springback_threshold(w, lambda, 1.0 / mu) != sb::firm_threshold(w, lambda, mu)) ++firm_mismatch;

    const double v = -5.0 + 10.0 * u01(rng);
    soft_gap = std::max(soft_gap, std::abs(sb::springback_threshold(v, lambda, 1e-9) -
                                           sb::soft_threshold(v, lambda)));
    const double alpha = 0.9 / lambda * u01(rng);
    if (sb::soft_threshold(-v, lambda) != -sb::soft_threshold(v, lambda)) ++odd_mismatch;
    if (sb::firm_threshold(-v, lambda, mu) != -sb::firm_threshold(v, lambda, mu)) ++odd_mismatch;
    if (sb::springback_threshold(-v, lambda, alpha) != -sb::springback_threshold(v, lambda, alpha))
      ++odd_mismatch;
  }
  return {firm_mismatch == 0 && soft_gap <= 1e-6 && odd_mismatch == 0,
          fmt("firm mismatches %d/10000, max |springback - soft| %.3g, odd-symmetry mismatches %d",
              firm_mismatch, soft_gap, odd_mismatch)};
}

// 4, 5 ------------------------------------------------------------------------

struct DescentRun {
  double alpha;
  double bound;  // (||b|| + tau) / sigma_min
  sb::SolverReport report;
};

const std::vector<DescentRun>& descent_runs(double* elapsed) {
  static std::optional<std::vector<DescentRun>> runs;
  static double took = 0.0;
  if (!runs) {
    const auto t0 = Clock::now();
    runs.emplace();
    for (std::uint64_t t = 0; t < 50; ++t) {
      const std::uint64_t seed = sb::derive_seed(2026, 4, t);
      sb::EnsembleSpec es;
      es.m = 64;
      es.n = 250;
      es.seed = sb::derive_seed(seed, 1);
      sb::ProblemInstance p{sb::gen_matrix(es), {}, 0.0, sb::gen_signal({250, 10, 0, sb::derive_seed(seed, 2)})};
      p.b = sb::matvec(p.a, *p.ground_truth);
      const auto sv = sb::singular_extremes(p.a);
      sb::SolverOptions o;
      o.alpha = sb::alpha_subroutine(sv, sb::norm2(p.b), p.tau, 0.5);
      o.sigma_min = sv.sigma_min;
      runs->push_back({o.alpha, (sb::norm2(p.b) + p.tau) / sv.sigma_min, sb::dca_springback(p, o)});
    }
    took = seconds_since(t0);
  }
  *elapsed = took;
  return *runs;
}

Outcome dc_descent() {
  double elapsed = 0.0;
  const auto& runs = descent_runs(&elapsed);
  int descent_bad = 0, negative = 0;
  double worst = INFINITY;
  for (const auto& r : runs) {
    const auto& f = r.report.objective_trace;
    for (std::size_t k = 0; k + 1 < f.size(); ++k) {
      const double step = r.report.step_norms[k + 1];
      const double slack = f[k] - f[k + 1] - 0.5 * r.alpha * step * step;
      worst = std::min(worst, slack);
      if (slack < -1e-6) ++descent_bad;
    }
    for (double v : f)
      if (v < -1e-8) ++negative;
  }
  return {descent_bad == 0 && negative == 0 && elapsed < 120.0,
          fmt("%d descent violations, worst slack %.3g, %d negative objectives, 50 runs in %.1f s",
              descent_bad, worst, negative, elapsed)};
}

Outcome iterate_bound() {
  double elapsed = 0.0;
  const auto& runs = descent_runs(&elapsed);
  int violating_runs = 0;
  double worst_ratio = 0.0;
  for (const auto& r : runs) {
    bool bad = false;
    for (double norm : r.report.iterate_norms) {
      worst_ratio = std::max(worst_ratio, norm / r.bound);
      bad = bad || norm > r.bound + 1e-3;
    }
    violating_runs += bad;
  }
  return {violating_runs == 0,
          fmt("%d/50 runs exceed (||b||+tau)/sigma_min + 1e-3, worst ||x^k|| / bound = %.4f", violating_runs,
              worst_ratio)};
}

// 6 ---------------------------------------------------------------------------

std::map<double, int> springback_successes(const sb::ExperimentResult& res, const std::string& solver) {
  std::map<double, int> out;
  for (const auto& row : res.summary)
    if (row.solver_id == solver) out[row.sweep_value] = row.successes;
  return out;
}

Outcome gaussian_recovery() {
  const auto t0 = Clock::now();
  sb::ExperimentSpec spec = sb::preset("fig4");
  spec.trials = 20;
  spec.solvers = {sb::SolverEntry{sb::SolverId::kDcaSpringback, true}};
  spec.master_seed = 2026;
  const auto res = sb::run_experiment(spec);
  const double elapsed = seconds_since(t0);
  const auto hits = springback_successes(res, "dca_springback");
  const double at6 = hits.at(6) / 20.0, at40 = hits.at(40) / 20.0;
  int worst_rise = -20;
  for (auto i = hits.begin(); i != hits.end(); ++i)
    for (auto j = std::next(i); j != hits.end(); ++j) worst_rise = std::max(worst_rise, j->second - i->second);
  std::string curve;
  for (const auto& [s, k] : hits) curve += fmt(" %g:%d", s, k);
  return {at6 >= 0.9 && at40 <= 0.1 && worst_rise <= 2 && elapsed < 600.0,
          fmt("rate %.2f at s=6, %.2f at s=40, largest rise %d, %.0f s; successes/20%s", at6, at40,
              worst_rise, elapsed, curve.c_str())};
}

// 7 ---------------------------------------------------------------------------

Outcome coherence_trend() {
  const auto t0 = Clock::now();
  sb::ExperimentSpec spec = sb::preset("fig5");
  spec.sweep = sb::SweepKind::kRefinement;
  spec.sweep_values = {4, 16};
  spec.sparsity = 15;
  spec.separation_factor = 2;
  spec.trials = 20;
  spec.solvers = {sb::SolverEntry{sb::SolverId::kDcaSpringback, true}, sb::SolverEntry{sb::SolverId::kIrlsLp, true}};
  spec.master_seed = 2026;
  const auto res = sb::run_experiment(spec);
  const double elapsed = seconds_since(t0);
  const auto spb = springback_successes(res, "dca_springback");
  const auto irls = springback_successes(res, "irls_lp");
  const double spb4 = spb.at(4) / 20.0, spb16 = spb.at(16) / 20.0;
  const double irls4 = irls.at(4) / 20.0, irls16 = irls.at(16) / 20.0;
  return {std::abs(spb16 - spb4) <= 0.25 && irls4 - irls16 > 0.4 && elapsed < 1800.0,
          fmt("springback %.2f -> %.2f, IRLS-l0.5 %.2f -> %.2f (F=4 -> F=16), %.0f s", spb4, spb16, irls4,
              irls16, elapsed)};
}

// 8 ---------------------------------------------------------------------------

// Best springback objective over all supports S with |S| <= m whose columns
// are independent and whose least-squares fit solves A x = b exactly. The
// objective is concave on each orthant, so its minimizers over {Ax = b} that
// exist are among these basic solutions.
double enumeration_optimum(const sb::ProblemInstance& p, double alpha) {
  const std::size_t m = p.a.rows(), n = p.a.cols();
  double best = INFINITY;
  for (unsigned mask = 1; mask < (1U << n); ++mask) {
    std::vector<std::size_t> s;
    for (std::size_t j = 0; j < n; ++j)
      if (mask >> j & 1U) s.push_back(j);
    if (s.size() > m) continue;
    sb::Matrix sub(m, s.size());
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t k = 0; k < s.size(); ++k) sub(i, k) = p.a(i, s[k]);
    sb::Vector xs;
    try {
      xs = sb::solve_spd(sb::gram(sub), sb::matvec_transposed(sub, p.b));
    } catch (const sb::NumericError&) {
      continue;
    }
    if (sb::distance2(sb::matvec(sub, xs), p.b) > 1e-9 * (1.0 + sb::norm2(p.b))) continue;
    best = std::min(best, sb::norm1(xs) - 0.5 * alpha * sb::dot(xs, xs));
  }
  return best;
}

Outcome enumeration_oracle() {
  const auto t0 = Clock::now();
  int matched = 0;
  double worst = 0.0;
  for (std::uint64_t t = 0; t < 30; ++t) {
    const std::uint64_t seed = sb::derive_seed(2026, 8, t);
    const std::size_t m = 2 + t % 2;
    const std::size_t n = m + 1 + (t / 2) % (6 - m);
    const std::size_t s = 1 + t % (m - 1);
    sb::EnsembleSpec es;
    es.m = m;
    es.n = n;
    es.seed = sb::derive_seed(seed, 1);
    sb::ProblemInstance p{sb::gen_matrix(es), {}, 0.0, sb::gen_signal({n, s, 0, sb::derive_seed(seed, 2)})};
    p.b = sb::matvec(p.a, *p.ground_truth);
    const auto sv = sb::singular_extremes(p.a);
    sb::SolverOptions o;
    o.alpha = sb::alpha_subroutine(sv, sb::norm2(p.b), 0.0, 0.5);
    const auto rep = sb::dca_springback(p, o);
    const double gap = sb::springback_objective(rep.x_star, o.alpha) - enumeration_optimum(p, o.alpha);
    worst = std::max(worst, std::abs(gap));
    if (std::abs(gap) <= 1e-3) ++matched;
  }
  const double elapsed = seconds_since(t0);
  return {matched == 30 && elapsed < 60.0,
          fmt("%d/30 instances within 1e-3 of the enumeration optimum, worst gap %.4g, %.2f s", matched,
              worst, elapsed)};
}

// 9 ---------------------------------------------------------------------------

Outcome generator_statistics() {
  sb::EnsembleSpec es;
  es.m = 100;
  es.n = 100;
  es.seed = sb::derive_seed(2026, 9);
  const sb::Matrix a = sb::gen_matrix(es);
  double sq = 0.0;
  for (double v : a.entries()) sq += v * v;
  const double var_ratio = sq / static_cast<double>(a.entries().size()) * es.m;

  double worst_db = 0.0;
  for (std::uint64_t t = 0; t < 20; ++t) {
    const std::size_t m = 1000 + 250 * (t % 4);
    sb::Vector clean(m);
    std::mt19937_64 rng(sb::derive_seed(2026, 91, t));
    std::normal_distribution<double> g;
    for (double& v : clean) v = g(rng);
    const double snr = 5.0 * static_cast<double>(t % 12);
    const auto noisy = sb::add_noise_snr(clean, snr, sb::derive_seed(2026, 92, t));
    worst_db = std::max(worst_db, std::abs(20.0 * std::log10(sb::norm2(clean) / noisy.tau) - snr));
  }

  int separation_failures = 0;
  std::mt19937_64 rng(sb::derive_seed(2026, 93));
  for (int t = 0; t < 10000; ++t) {
    const std::size_t n = 50 + rng() % 1500;
    const std::size_t l = rng() % 40;
    const std::size_t s_max = l >= 2 ? (n + l - 1) / l : n;
    const std::size_t s = 1 + rng() % std::min<std::size_t>(s_max, 60);
    try {
      const auto supp = sb::gen_support({n, s, l, rng()});
      bool ok = supp.size() == s;
      for (std::size_t i = 1; i < supp.size(); ++i) ok = ok && supp[i] - supp[i - 1] >= std::max<std::size_t>(l, 1);
      separation_failures += !ok;
    } catch (const std::exception&) {
      ++separation_failures;
    }
  }
  return {std::abs(var_ratio - 1.0) <= 0.1 && worst_db <= 1.0 && separation_failures == 0,
          fmt("variance * m = %.4f, worst SNR error %.3f dB, %d/10000 support failures", var_ratio, worst_db,
              separation_failures)};
}

// 10 --------------------------------------------------------------------------

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

Outcome determinism() {
  const auto root = std::filesystem::temp_directory_path() / "springback_acceptance_determinism";
  std::filesystem::remove_all(root);
  std::vector<sb::ExperimentSpec> specs;
  {
    auto s = sb::preset("fig4");
    s.trials = 4;
    s.sweep_values = {10, 24};
    specs.push_back(s);
  }
  {
    auto s = sb::preset("fig7");
    s.trials = 3;
    s.sweep_values = {20, 45};
    specs.push_back(s);
  }
  {
    auto s = sb::preset("fig8_m");
    s.trials = 3;
    s.sweep_values = {60, 90};
    specs.push_back(s);
  }
  int mismatches = 0;
  for (const auto& spec : specs) {
    const auto dir = root / spec.name;
    sb::emit_results(dir, spec, sb::run_experiment(spec, {.workers = 1}));
    const auto again = sb::load_config(dir / "manifest.cfg");
    const auto rerun_dir = root / (spec.name + "_rerun");
    sb::emit_results(rerun_dir, again, sb::run_experiment(again, {.workers = 4}));
    if (read_file(dir / "summary.csv") != read_file(rerun_dir / "summary.csv")) ++mismatches;
    if (read_file(dir / "manifest.cfg") != read_file(rerun_dir / "manifest.cfg")) ++mismatches;
  }
  std::filesystem::remove_all(root);
  return {mismatches == 0,
          fmt("%d mismatching files over %zu manifests (serial run vs 4-worker manifest rerun)", mismatches,
              specs.size())};
}

struct Criterion {
  int id;
  const char* name;
  std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> all{
      {1, "toy noise thresholds", toy_thresholds},
      {2, "prox grid oracle", prox_oracle},
      {3, "operator identities", operator_identities},
      {4, "DC descent", dc_descent},
      {5, "iterate norm bound", iterate_bound},
      {6, "Gaussian exact recovery", gaussian_recovery},
      {7, "coherence robustness", coherence_trend},
      {8, "small-instance enumeration oracle", enumeration_oracle},
      {9, "generator statistics", generator_statistics},
      {10, "determinism", determinism},
  };
  std::set<int> selected;
  for (int i = 1; i < argc; ++i) {
    try {
      selected.insert(std::stoi(argv[i]));
    } catch (const std::exception&) {
      std::cerr << "usage: " << argv[0] << " [criterion number ...]\n";
      return 2;
    }
  }
  bool all_pass = true;
  for (const auto& c : all) {
    if (!selected.empty() && !selected.contains(c.id)) continue;
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    all_pass = all_pass && o.pass;
    std::cout << (o.pass ? "PASS" : "FAIL") << "  " << c.id << ". " << c.name << ": " << o.detail << std::endl;
  }
  return all_pass ? 0 : 1;
}
