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

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>

#include "springback/solvers.hpp"

namespace springback {

AdmmState AdmmState::zeros(std::size_t m, std::size_t n) {
  return {Vector(n, 0.0), Vector(n, 0.0), Vector(m, 0.0), Vector(n, 0.0), Vector(m, 0.0)};
}

int admm_subproblem(const ProblemInstance& prob, std::span<const double> xi,
                    const SolverOptions& opts, const ShiftedGramSolver& solver, AdmmState& st) {
  const std::size_t m = prob.a.rows();
  const std::size_t n = prob.a.cols();
  const double rho = opts.rho;
  const double zeta = opts.inner_zeta;
  const double shrink = 1.0 / zeta;
  Vector w(m), rhs(n), ax(m);

  int pass = 0;
  while (pass < opts.max_inner) {
    ++pass;
    for (std::size_t i = 0; i < m; ++i) w[i] = prob.b[i] + st.z[i] - st.eta[i];
    Vector atw = matvec_transposed(prob.a, w);
    for (std::size_t j = 0; j < n; ++j)
      rhs[j] = rho * atw[j] + xi[j] + zeta * (st.y[j] - st.u[j]);
    Vector x_new = solver.solve(rhs);
    if (!all_finite(x_new)) throw NumericError("admm_subproblem: non-finite iterate");

    for (std::size_t j = 0; j < n; ++j) st.y[j] = soft_threshold(x_new[j] + st.u[j], shrink);

    ax = matvec(prob.a, x_new);
    if (prob.tau > 0.0) {
      for (std::size_t i = 0; i < m; ++i) w[i] = ax[i] - prob.b[i] + st.eta[i];
      st.z = l2_ball_project(w, prob.tau);
    }
    for (std::size_t j = 0; j < n; ++j) st.u[j] += x_new[j] - st.y[j];
    for (std::size_t i = 0; i < m; ++i) st.eta[i] += ax[i] - prob.b[i] - st.z[i];

    const double change = distance2(x_new, st.x);
    const double scale = std::max(norm2(x_new), norm2(st.x));
    st.x = std::move(x_new);
    if (change == 0.0 || change < opts.eps_inner * scale) break;
  }
  return pass;
}

Vector admm_subproblem(const ProblemInstance& prob, std::span<const double> xi,
                       const SolverOptions& opts) {
  validate(prob);
  validate(opts);
  if (xi.size() != prob.a.cols()) throw std::invalid_argument("admm_subproblem: xi has wrong length");
  const ShiftedGramSolver solver(prob.a, opts.rho, opts.inner_zeta);
  AdmmState st = AdmmState::zeros(prob.a.rows(), prob.a.cols());
  admm_subproblem(prob, xi, opts, solver, st);
  return st.x;
}

namespace {

double linearized_objective(std::span<const double> x, std::span<const double> xi) {
  return norm1(x) - dot(x, xi);
}

// Feasible point A_S v = b on a candidate support, if one exists.
std::optional<Vector> fit_on_support(const ProblemInstance& prob, const std::vector<std::size_t>& support) {
  const std::size_t m = prob.a.rows();
  const std::size_t k = support.size();
  if (k == 0 || k > m) return std::nullopt;
  Matrix g(k, k);
  Vector rhs(k, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    const auto row = prob.a.row(i);
    for (std::size_t p = 0; p < k; ++p) {
      const double ap = row[support[p]];
      rhs[p] += ap * prob.b[i];
      for (std::size_t q = 0; q <= p; ++q) g(p, q) += ap * row[support[q]];
    }
  }
  for (std::size_t p = 0; p < k; ++p)
    for (std::size_t q = 0; q < p; ++q) g(q, p) = g(p, q);
  Vector v_s;
  try {
    v_s = Cholesky(g).solve(rhs);
  } catch (const NumericError&) {
    return std::nullopt;
  }
  Vector v(prob.a.cols(), 0.0);
  for (std::size_t p = 0; p < k; ++p) v[support[p]] = v_s[p];
  if (!all_finite(v)) return std::nullopt;
  Vector r = matvec(prob.a, v);
  axpy(-1.0, prob.b, r);
  if (norm2(r) > 1e-10 * (1.0 + norm2(prob.b))) return std::nullopt;
  return v;
}

// With tau = 0 the subproblem is a linear program whose solutions sit on
// supports of size <= m. Tries the support of the ADMM's sparse iterate y
// and nested prefixes of the entries of x by magnitude, and keeps the best feasible fit that
// does not increase the subproblem objective.
std::optional<Vector> polish_on_support(const ProblemInstance& prob, std::span<const double> xi,
                                        std::span<const double> y, std::span<const double> x) {
  if (prob.tau != 0.0) return std::nullopt;
  std::vector<std::size_t> from_y;
  for (std::size_t j = 0; j < y.size(); ++j)
    if (y[j] != 0.0) from_y.push_back(j);
  std::vector<std::vector<std::size_t>> candidates{from_y};
  std::vector<std::size_t> order(x.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) { return std::abs(x[i]) > std::abs(x[j]); });
  const std::size_t widest = std::min(prob.a.rows(), x.size());
  for (std::size_t k = std::max<std::size_t>(from_y.size(), 1); k <= widest; ++k) {
    auto& support = candidates.emplace_back(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k));
    std::sort(support.begin(), support.end());
  }

  std::optional<Vector> best;
  // x itself is only approximately feasible, so its value is a slightly
  // optimistic reference.
  const double reference = linearized_objective(x, xi);
  double best_value = reference + 1e-6 * (1.0 + std::abs(reference));
  for (const auto& support : candidates) {
    auto v = fit_on_support(prob, support);
    if (!v) continue;
    const double value = linearized_objective(*v, xi);
    if (value <= best_value) {
      best_value = value;
      best = std::move(v);
    }
  }
  return best;
}

}  // namespace

double springback_objective(std::span<const double> x, double alpha) {
  return norm1(x) - 0.5 * alpha * dot(x, x);
}

SolverReport dca_springback(const ProblemInstance& prob, const SolverOptions& opts) {
  validate(prob);
  validate(opts);
  const std::size_t m = prob.a.rows();
  const std::size_t n = prob.a.cols();
  SolverReport rep;
  rep.x_star.assign(n, 0.0);
  rep.iterate_norms.push_back(0.0);

  const double b_norm = norm2(prob.b);
  if (b_norm + prob.tau > 0.0) {
    const double smin = opts.sigma_min ? *opts.sigma_min : singular_extremes(prob.a).sigma_min;
    rep.convergence_alpha_ok = opts.alpha <= convergence_alpha_bound(smin, b_norm, prob.tau);
  }

  bool infeasible_start = false;
  try {
    const ShiftedGramSolver solver(prob.a, opts.rho, opts.inner_zeta);
    AdmmState st = AdmmState::zeros(m, n);
    Vector& x = rep.x_star;
    Vector xi(n);
    bool converged = false;
    for (int k = 0; k < opts.max_outer; ++k) {
      for (std::size_t j = 0; j < n; ++j) xi[j] = opts.alpha * x[j];
      rep.inner_iterations_total += admm_subproblem(prob, xi, opts, solver, st);
      ++rep.outer_iterations;
      Vector x_next = st.x;
      if (opts.polish)
        if (auto v = polish_on_support(prob, xi, st.y, x_next)) x_next = std::move(*v);
      if (k == 0) {
        Vector r = matvec(prob.a, x_next);
        axpy(-1.0, prob.b, r);
        infeasible_start = norm2(r) > prob.tau + 1e-4;
      }
      const double step = distance2(x_next, x);
      const double x_norm = norm2(x);
      x = std::move(x_next);
      rep.objective_trace.push_back(springback_objective(x, opts.alpha));
      rep.iterate_norms.push_back(norm2(x));
      rep.step_norms.push_back(step);
      const double measure = x_norm > 0.0 ? std::min(step, step / x_norm) : step;
      if (measure <= opts.eps_outer) {
        converged = true;
        break;
      }
    }
    rep.status = infeasible_start ? SolverStatus::kInfeasibleStart
                 : converged      ? SolverStatus::kConverged
                                  : SolverStatus::kMaxIter;
  } catch (const NumericError&) {
    rep.status = SolverStatus::kNumericFailure;
  }

  Vector r = matvec(prob.a, rep.x_star);
  axpy(-1.0, prob.b, r);
  rep.residual = norm2(r);
  if (opts.rip) rep.posterior_alpha_ok = posterior_verify(*opts.rip, opts.alpha, rep.x_star, opts.posterior_eps);
  return rep;
}

}  // namespace springback
