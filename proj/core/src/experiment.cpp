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

#include "springback/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <limits>
#include <map>
#include <mutex>
#include <stdexcept>
#include <thread>

namespace springback {

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw std::invalid_argument(what);
}

std::size_t as_count(double v, const char* what) {
  require(v >= 0.0 && v == std::floor(v) && v < 1e12, std::string(what) + " must be a nonnegative integer");
  return static_cast<std::size_t>(v);
}

bool is_springback(const SolverEntry& e) { return e.id == SolverId::kDcaSpringback; }

}  // namespace

std::string_view to_string(SweepKind kind) {
  switch (kind) {
    case SweepKind::kSparsity: return "s";
    case SweepKind::kRefinement: return "F";
    case SweepKind::kSnr: return "snr";
    case SweepKind::kMeasurements: return "m";
  }
  return "unknown";
}

SweepKind parse_sweep_kind(std::string_view name) {
  if (name == "s" || name == "sparsity") return SweepKind::kSparsity;
  if (name == "F" || name == "refinement") return SweepKind::kRefinement;
  if (name == "snr" || name == "snr_db") return SweepKind::kSnr;
  if (name == "m" || name == "measurements") return SweepKind::kMeasurements;
  throw std::invalid_argument("unknown sweep kind '" + std::string(name) + "'");
}

std::string_view to_string(AcceptanceRule rule) {
  return rule == AcceptanceRule::kWithinTenfold ? "within_tenfold" : "tenfold_smaller";
}

AcceptanceRule parse_acceptance_rule(std::string_view name) {
  if (name == "within_tenfold") return AcceptanceRule::kWithinTenfold;
  if (name == "tenfold_smaller") return AcceptanceRule::kTenfoldSmaller;
  throw std::invalid_argument("unknown acceptance rule '" + std::string(name) + "'");
}

std::string SolverEntry::label() const {
  std::string base(to_string(id));
  return is_springback(*this) && !efficiency_detection ? base + "_noed" : base;
}

SolverEntry SolverEntry::parse(std::string_view label) {
  constexpr std::string_view suffix = "_noed";
  if (label.size() > suffix.size() && label.substr(label.size() - suffix.size()) == suffix) {
    SolverEntry e{parse_solver_id(label.substr(0, label.size() - suffix.size())), false};
    require(is_springback(e), "'_noed' only applies to dca_springback");
    return e;
  }
  return SolverEntry{parse_solver_id(label), true};
}

void validate(const ExperimentSpec& spec) {
  require(spec.trials >= 1, "experiment: trials must be >= 1");
  require(spec.success_tol > 0.0, "experiment: success_tol must be positive");
  require(spec.omega > 0.0, "experiment: omega must be positive");
  require(spec.cond_threshold > 0.0, "experiment: cond_threshold must be positive");
  require(!spec.sweep_values.empty(), "experiment: no sweep values");
  require(!spec.solvers.empty(), "experiment: no solvers");
  require(spec.eps_outer_noisy > 0.0, "experiment: eps_outer_noisy must be positive");
  require(spec.separation_factor >= 0, "experiment: separation_factor must be >= 0");
  validate(spec.options);
  for (double v : spec.sweep_values) {
    const TrialSetting st = setting_at(spec, v);
    require(st.ensemble.m > 0 && st.ensemble.n > 0, "experiment: empty dimensions");
    require(st.ensemble.refinement >= 1, "experiment: refinement must be >= 1");
    require(st.signal.sparsity <= st.signal.n, "experiment: sparsity exceeds n");
    const std::size_t l = st.signal.min_separation;
    if (l > 1 && st.signal.sparsity > 0)
      require((st.signal.sparsity - 1) * l + 1 <= st.signal.n,
              "experiment: support with separation " + std::to_string(l) + " does not fit at sweep value " +
                  std::to_string(v));
  }
}

TrialSetting setting_at(const ExperimentSpec& spec, double v) {
  TrialSetting st;
  st.ensemble = spec.ensemble;
  st.signal.sparsity = spec.sparsity;
  st.snr_db = spec.snr_db;
  switch (spec.sweep) {
    case SweepKind::kSparsity: st.signal.sparsity = as_count(v, "sparsity"); break;
    case SweepKind::kRefinement:
      st.ensemble.refinement = static_cast<int>(as_count(v, "refinement"));
      break;
    case SweepKind::kSnr: st.snr_db = v; break;
    case SweepKind::kMeasurements: st.ensemble.m = as_count(v, "m"); break;
  }
  st.signal.n = st.ensemble.n;
  st.signal.min_separation = spec.separation_factor > 0
                                 ? static_cast<std::size_t>(spec.separation_factor) *
                                       static_cast<std::size_t>(st.ensemble.refinement)
                                 : spec.min_separation;
  return st;
}

std::uint64_t instance_hash(const ProblemInstance& prob) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto mix = [&](double v) {
    const auto bits = std::bit_cast<std::uint64_t>(v);
    for (int k = 0; k < 8; ++k) {
      h ^= (bits >> (8 * k)) & 0xffU;
      h *= 0x100000001b3ULL;
    }
  };
  mix(static_cast<double>(prob.a.rows()));
  mix(static_cast<double>(prob.a.cols()));
  for (double v : prob.a.entries()) mix(v);
  for (double v : prob.b) mix(v);
  mix(prob.tau);
  if (prob.ground_truth)
    for (double v : *prob.ground_truth) mix(v);
  return h;
}

TrialInstance make_instance(const ExperimentSpec& spec, int trial_index, double sweep_value) {
  TrialSetting st = setting_at(spec, sweep_value);
  const std::uint64_t seed = derive_seed(spec.master_seed, static_cast<std::uint64_t>(trial_index),
                                         std::bit_cast<std::uint64_t>(sweep_value));
  st.ensemble.seed = derive_seed(seed, 1);
  st.signal.seed = derive_seed(seed, 2);

  TrialInstance inst;
  inst.problem.a = gen_matrix(st.ensemble);
  inst.problem.ground_truth = gen_signal(st.signal);
  inst.problem.b = matvec(inst.problem.a, *inst.problem.ground_truth);
  if (st.snr_db && norm2(inst.problem.b) > 0.0) {
    auto noisy = add_noise_snr(inst.problem.b, *st.snr_db, derive_seed(seed, 3));
    inst.problem.b = std::move(noisy.noisy);
    inst.problem.tau = noisy.tau;
  }
  inst.singular = singular_extremes(inst.problem.a);
  inst.hash = instance_hash(inst.problem);
  return inst;
}

std::vector<TrialRecord> run_trial(const ExperimentSpec& spec, int trial_index, double sweep_value) {
  const TrialInstance inst = make_instance(spec, trial_index, sweep_value);
  const ProblemInstance& prob = inst.problem;
  const Vector& truth = *prob.ground_truth;
  const double truth_norm = norm2(truth);
  const double b_norm = norm2(prob.b);
  const TrialSetting st = setting_at(spec, sweep_value);

  SolverOptions opts = spec.options;
  if (st.snr_db) opts.eps_outer = spec.eps_outer_noisy;
  opts.sparsity_estimate = st.signal.sparsity;
  opts.sigma_min = inst.singular.sigma_min;
  const bool degenerate = !(b_norm + prob.tau > 0.0);
  auto choose_alpha = [&](bool efficiency_detection) {
    if (degenerate) return 0.7;
    const double threshold =
        efficiency_detection ? spec.cond_threshold : std::numeric_limits<double>::infinity();
    return alpha_subroutine(inst.singular, b_norm, prob.tau, spec.omega, threshold);
  };
  opts.alpha = choose_alpha(true);

  std::vector<TrialRecord> out;
  out.reserve(spec.solvers.size());
  for (const SolverEntry& entry : spec.solvers) {
    SolverOptions o = opts;
    if (is_springback(entry)) o.alpha = choose_alpha(entry.efficiency_detection);

    TrialRecord rec;
    rec.trial_index = trial_index;
    rec.solver_id = entry.label();
    rec.s = st.signal.sparsity;
    rec.sweep_value = sweep_value;
    rec.alpha_used = (is_springback(entry) || entry.id == SolverId::kDcaMcp) ? o.alpha : 0.0;

    const auto t0 = std::chrono::steady_clock::now();
    Vector x;
    try {
      SolverReport rep = solve(entry.id, prob, o);
      x = std::move(rep.x_star);
      rec.status = to_string(rep.status);
    } catch (const std::exception&) {
      x.assign(truth.size(), 0.0);
      rec.status = to_string(SolverStatus::kNumericFailure);
    }
    rec.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (instance_hash(prob) != inst.hash)
      throw std::logic_error("run_trial: instance changed while running " + rec.solver_id);
    if (!all_finite(x)) {
      x.assign(truth.size(), 0.0);
      rec.status = to_string(SolverStatus::kNumericFailure);
    }

    rec.absolute_error = distance2(x, truth);
    rec.relative_error = truth_norm > 0.0 ? rec.absolute_error / truth_norm : rec.absolute_error;
    rec.success = rec.relative_error < spec.success_tol;
    out.push_back(std::move(rec));
  }

  const auto l1 = std::find_if(out.begin(), out.end(),
                               [](const TrialRecord& r) { return r.solver_id == to_string(SolverId::kAdmmL1); });
  if (l1 != out.end()) {
    const double reference = l1->absolute_error;
    for (std::size_t k = 0; k < out.size(); ++k) {
      if (!is_springback(spec.solvers[k])) continue;
      const double e = out[k].absolute_error;
      out[k].accepted = spec.acceptance == AcceptanceRule::kWithinTenfold ? e <= 10.0 * reference
                                                                         : e <= reference / 10.0;
    }
  }
  return out;
}

unsigned default_workers() {
  if (const char* env = std::getenv("SPRINGBACK_WORKERS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v >= 1) return static_cast<unsigned>(v);
  }
  return std::max(1U, std::thread::hardware_concurrency());
}

ExperimentResult run_experiment(const ExperimentSpec& spec, const RunOptions& run) {
  validate(spec);
  const std::size_t per_value = static_cast<std::size_t>(spec.trials);
  const std::size_t total = spec.sweep_values.size() * per_value;
  std::vector<std::vector<TrialRecord>> slots(total);

  std::atomic<std::size_t> next{0};
  std::atomic<std::size_t> done{0};
  std::mutex report_mutex;
  std::exception_ptr failure;
  auto worker = [&] {
    for (;;) {
      const std::size_t item = next.fetch_add(1);
      if (item >= total) return;
      try {
        slots[item] = run_trial(spec, static_cast<int>(item % per_value), spec.sweep_values[item / per_value]);
      } catch (...) {
        std::lock_guard lock(report_mutex);
        if (!failure) failure = std::current_exception();
        next.store(total);
        return;
      }
      const std::size_t finished = done.fetch_add(1) + 1;
      if (run.progress) {
        std::lock_guard lock(report_mutex);
        run.progress(finished, total);
      }
    }
  };

  const unsigned workers =
      static_cast<unsigned>(std::min<std::size_t>(run.workers ? run.workers : default_workers(), total));
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);

  ExperimentResult result;
  for (auto& slot : slots)
    for (auto& rec : slot) result.records.push_back(std::move(rec));
  result.summary = summarize(result.records);
  return result;
}

std::vector<SummaryRow> summarize(const std::vector<TrialRecord>& records) {
  struct Acc {
    SummaryRow row;
    int with_flag = 0;
    double sum_rel = 0.0, sum_log = 0.0, sum_abs = 0.0, sum_accepted_abs = 0.0;
  };
  std::vector<Acc> groups;
  std::map<std::pair<std::string, std::uint64_t>, std::size_t> index;
  for (const TrialRecord& r : records) {
    const auto key = std::make_pair(r.solver_id, std::bit_cast<std::uint64_t>(r.sweep_value));
    auto [it, inserted] = index.try_emplace(key, groups.size());
    if (inserted) {
      groups.emplace_back();
      groups.back().row.solver_id = r.solver_id;
      groups.back().row.sweep_value = r.sweep_value;
    }
    Acc& a = groups[it->second];
    ++a.row.trials;
    if (r.success) ++a.row.successes;
    if (r.accepted) {
      ++a.with_flag;
      if (*r.accepted) {
        a.row.accepted = a.row.accepted.value_or(0) + 1;
        a.sum_accepted_abs += r.absolute_error;
      } else if (!a.row.accepted) {
        a.row.accepted = 0;
      }
    }
    a.sum_rel += r.relative_error;
    a.sum_log += std::log10(std::max(r.relative_error, 1e-16));
    a.sum_abs += r.absolute_error;
  }

  std::vector<SummaryRow> rows;
  rows.reserve(groups.size());
  for (Acc& a : groups) {
    SummaryRow& row = a.row;
    const double n = row.trials;
    row.success_rate = static_cast<double>(row.successes) / n;
    row.mean_error = a.sum_rel / n;
    row.mean_log_error = a.sum_log / n;
    row.mean_abs_error = a.sum_abs / n;
    if (a.with_flag > 0) {
      row.acceptance_rate = static_cast<double>(*row.accepted) / a.with_flag;
      if (*row.accepted > 0) row.mean_accepted_abs_error = a.sum_accepted_abs / *row.accepted;
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

namespace {

std::vector<double> range(double first, double last, double step) {
  std::vector<double> v;
  for (double x = first; x <= last + 1e-9; x += step) v.push_back(x);
  return v;
}

std::vector<SolverEntry> entries(std::initializer_list<std::string_view> labels) {
  std::vector<SolverEntry> v;
  for (auto l : labels) v.push_back(SolverEntry::parse(l));
  return v;
}

std::vector<SolverEntry> every_solver() {
  std::vector<SolverEntry> v;
  for (SolverId id : all_solvers()) v.push_back({id, true});
  return v;
}

}  // namespace

std::vector<std::string> preset_names() {
  return {"fig4", "fig4_dct", "fig5", "fig7", "fig7_dct", "fig8", "fig8_m"};
}

ExperimentSpec preset(std::string_view name, bool literal_shape) {
  ExperimentSpec s;
  s.name = std::string(name);
  s.trials = 100;
  s.solvers = every_solver();
  if (name == "fig4" || name == "fig4_dct") {
    s.ensemble.kind = name == "fig4" ? EnsembleKind::kGaussian : EnsembleKind::kPartialDct;
    s.ensemble.m = 64;
    s.ensemble.n = 160;
    s.sweep = SweepKind::kSparsity;
    s.sweep_values = range(6, 40, 2);
    s.omega = 0.5;
  } else if (name == "fig5") {
    s.ensemble.kind = EnsembleKind::kOversampledDct;
    s.ensemble.m = 100;
    s.ensemble.n = 1500;
    s.ensemble.refinement = 16;
    s.separation_factor = 2;
    s.sweep = SweepKind::kSparsity;
    s.sweep_values = range(5, 35, 2);
    s.omega = 0.5;
  } else if (name == "fig7") {
    s.ensemble.kind = EnsembleKind::kGaussian;
    s.ensemble.m = literal_shape ? 128 : 64;
    s.ensemble.n = literal_shape ? 64 : 128;
    s.sparsity = 25;
    s.sweep = SweepKind::kSnr;
    s.sweep_values = range(20, 60, 5);
    s.omega = 0.4;
  } else if (name == "fig7_dct") {
    s.ensemble.kind = EnsembleKind::kOversampledDct;
    s.ensemble.m = 128;
    s.ensemble.n = 1500;
    s.ensemble.refinement = 8;
    s.separation_factor = 2;
    s.sparsity = 30;
    s.sweep = SweepKind::kSnr;
    s.sweep_values = range(20, 60, 5);
    s.omega = 0.4;
    s.solvers.push_back(SolverEntry{SolverId::kDcaSpringback, false});
  } else if (name == "fig8" || name == "fig8_m") {
    s.ensemble.kind = EnsembleKind::kGaussian;
    s.ensemble.m = 50;
    s.ensemble.n = 160;
    s.snr_db = 45.0;
    s.omega = 0.4;
    s.solvers = entries({"admm_l1", "dca_l1_minus_2", "dca_springback"});
    if (name == "fig8") {
      s.sweep = SweepKind::kSparsity;
      s.sweep_values = range(10, 40, 1);
    } else {
      s.sparsity = 20;
      s.sweep = SweepKind::kMeasurements;
      s.sweep_values = range(50, 120, 1);
    }
  } else {
    throw std::invalid_argument("unknown preset '" + std::string(name) + "'");
  }
  return s;
}

}  // namespace springback
