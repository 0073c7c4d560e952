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
#include <string>

#include "springback/solvers.hpp"

namespace springback {

namespace {

struct LassoState {
  Vector x, y, u;
};

double residual_norm(const ProblemInstance& prob, std::span<const double> x) {
  Vector r = matvec(prob.a, x);
  axpy(-1.0, prob.b, r);
  return norm2(r);
}

// ADMM passes on min 1/2||Ax-b||^2 - <x, g> + weight ||x||_1 with the split
// y = x; `solver` factors A^T A + zeta I and `atb` is A^T b. Stops when the
// relative change of x falls below tol.
int lasso_admm(const ShiftedGramSolver& solver, std::span<const double> atb,
               std::span<const double> g, double weight, double zeta, int max_iter, double tol,
               LassoState& st) {
  const std::size_t n = atb.size();
  const double shrink = weight / zeta;
  Vector rhs(n);
  int pass = 0;
  while (pass < max_iter) {
    ++pass;
    for (std::size_t j = 0; j < n; ++j)
      rhs[j] = atb[j] + (g.empty() ? 0.0 : g[j]) + zeta * (st.y[j] - st.u[j]);
    Vector x_new = solver.solve(rhs);
    if (!all_finite(x_new)) throw NumericError("lasso_admm: non-finite iterate");
    for (std::size_t j = 0; j < n; ++j) {
      st.y[j] = soft_threshold(x_new[j] + st.u[j], shrink);
      st.u[j] += x_new[j] - st.y[j];
    }
    const double change = distance2(x_new, st.x);
    const double scale = std::max(norm2(x_new), norm2(st.x));
    st.x = std::move(x_new);
    if (change == 0.0 || change < tol * scale) break;
  }
  return pass;
}

void finish(const ProblemInstance& prob, SolverReport& rep) {
  rep.residual = residual_norm(prob, rep.x_star);
}

}  // namespace

SolverReport admm_l1(const ProblemInstance& prob, const SolverOptions& opts) {
  validate(prob);
  validate(opts);
  const std::size_t n = prob.a.cols();
  SolverReport rep;
  try {
    const ShiftedGramSolver solver(prob.a, 1.0, opts.zeta);
    const Vector atb = matvec_transposed(prob.a, prob.b);
    LassoState st{Vector(n, 0.0), Vector(n, 0.0), Vector(n, 0.0)};
    const int passes =
        lasso_admm(solver, atb, {}, opts.reg_lambda, opts.zeta, opts.admm_l1_max, opts.eps_outer, st);
    rep.x_star = std::move(st.x);
    rep.outer_iterations = passes;
    rep.inner_iterations_total = passes;
    rep.status = passes < opts.admm_l1_max ? SolverStatus::kConverged : SolverStatus::kMaxIter;
  } catch (const NumericError&) {
    rep.x_star.assign(n, 0.0);
    rep.status = SolverStatus::kNumericFailure;
  }
  finish(prob, rep);
  return rep;
}

SolverReport dca_unconstrained(PenaltyKind kind, const ProblemInstance& prob,
                               const SolverOptions& opts) {
  if (kind != PenaltyKind::kL1Minus2 && kind != PenaltyKind::kTL1 && kind != PenaltyKind::kMCP)
    throw std::invalid_argument("dca_unconstrained: unsupported penalty " + std::string(to_string(kind)));
  validate(prob);
  validate(opts);
  ThresholdParams params;
  params.beta = opts.beta;
  params.mu = opts.mu ? *opts.mu : 1.0 / opts.alpha;
  validate(kind, params);

  const std::size_t n = prob.a.cols();
  const double lambda = opts.reg_lambda;
  const double weight = lambda * dc_l1_weight(kind, params);
  SolverReport rep;
  rep.x_star.assign(n, 0.0);
  rep.iterate_norms.push_back(0.0);
  auto objective = [&](std::span<const double> x) {
    const double r = residual_norm(prob, x);
    return 0.5 * r * r + lambda * penalty_value(kind, x, params);
  };

  try {
    const ShiftedGramSolver solver(prob.a, 1.0, opts.zeta);
    const Vector atb = matvec_transposed(prob.a, prob.b);
    LassoState st{Vector(n, 0.0), Vector(n, 0.0), Vector(n, 0.0)};
    Vector& x = rep.x_star;
    bool converged = false;
    for (int k = 0; k < opts.max_outer; ++k) {
      Vector g = dc_concave_gradient(kind, x, params);
      for (double& v : g) v *= lambda;
      rep.inner_iterations_total +=
          lasso_admm(solver, atb, g, weight, opts.zeta, opts.admm_l1_max, opts.eps_inner, st);
      ++rep.outer_iterations;
      const double step = distance2(st.x, x);
      const double x_norm = norm2(x);
      x = st.x;
      rep.objective_trace.push_back(objective(x));
      rep.iterate_norms.push_back(norm2(x));
      rep.step_norms.push_back(step);
      const double measure = x_norm > 0.0 ? std::min(step, step / x_norm) : step;
      if (measure <= opts.eps_outer) {
        converged = true;
        break;
      }
    }
    rep.status = converged ? SolverStatus::kConverged : SolverStatus::kMaxIter;
  } catch (const NumericError&) {
    rep.status = SolverStatus::kNumericFailure;
  }
  finish(prob, rep);
  return rep;
}

SolverReport irls_lp(const ProblemInstance& prob, const SolverOptions& opts) {
  validate(prob);
  validate(opts);
  const std::size_t m = prob.a.rows();
  const std::size_t n = prob.a.cols();
  const double p = opts.p;
  const double lp = opts.reg_lambda * p;
  SolverReport rep;
  rep.x_star.assign(n, 0.0);
  Vector& x = rep.x_star;
  double eps = opts.irls_eps0;
  Vector q(n);
  rep.status = SolverStatus::kMaxIter;

  try {
    for (int it = 0; it < opts.irls_max; ++it) {
      // Minimizer of 1/2||Ax-b||^2 + (lambda/2) sum w_j x_j^2 with
      // w_j = p (x_j^2 + eps^2)^(p/2 - 1): x = Q A^T (A Q A^T + I)^{-1} b,
      // Q = diag(1 / (lambda w_j)).
      for (std::size_t j = 0; j < n; ++j)
        q[j] = std::pow(x[j] * x[j] + eps * eps, 1.0 - 0.5 * p) / lp;
      Matrix mm(m, m);
      for (std::size_t i = 0; i < m; ++i) {
        const auto ai = prob.a.row(i);
        for (std::size_t k = 0; k <= i; ++k) {
          const auto ak = prob.a.row(k);
          double acc = 0.0;
          for (std::size_t j = 0; j < n; ++j) acc += ai[j] * q[j] * ak[j];
          mm(i, k) = acc;
          mm(k, i) = acc;
        }
        mm(i, i) += 1.0;
      }
      const Vector v = Cholesky(mm).solve(prob.b);
      Vector x_new = matvec_transposed(prob.a, v);
      for (std::size_t j = 0; j < n; ++j) x_new[j] *= q[j];
      if (!all_finite(x_new)) throw NumericError("irls_lp: non-finite iterate");

      const double change = distance2(x_new, x);
      const double relative = change / std::max(norm2(x_new), 1e-300);
      x = std::move(x_new);
      ++rep.outer_iterations;
      if (relative < opts.irls_tol || norm2(x) == 0.0) {
        rep.status = SolverStatus::kConverged;
        break;
      }
      if (change < std::sqrt(eps)) eps = std::max(0.1 * eps, opts.irls_eps_floor);
    }
  } catch (const NumericError&) {
    rep.status = SolverStatus::kNumericFailure;
  }
  rep.inner_iterations_total = rep.outer_iterations;
  finish(prob, rep);
  return rep;
}

Vector hard_threshold(std::span<const double> x, std::size_t s) {
  Vector out(x.size(), 0.0);
  if (s == 0) return out;
  std::vector<std::size_t> order(x.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  const std::size_t keep = std::min(s, x.size());
  std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(keep), order.end(),
                    [&](std::size_t i, std::size_t j) {
                      const double ai = std::abs(x[i]);
                      const double aj = std::abs(x[j]);
                      return ai != aj ? ai > aj : i < j;
                    });
  for (std::size_t k = 0; k < keep; ++k) out[order[k]] = x[order[k]];
  return out;
}

SolverReport aiht(const ProblemInstance& prob, const SolverOptions& opts) {
  validate(prob);
  validate(opts);
  const std::size_t s = opts.sparsity_estimate;
  const std::size_t n = prob.a.cols();
  constexpr double c = 0.01;

  auto support_of = [](std::span<const double> v) {
    std::vector<bool> mask(v.size());
    for (std::size_t j = 0; j < v.size(); ++j) mask[j] = v[j] != 0.0;
    return mask;
  };
  auto residual = [&](std::span<const double> v) {
    Vector r = prob.b;
    axpy(-1.0, matvec(prob.a, v), r);
    return r;
  };

  SolverReport rep;
  rep.x_star.assign(n, 0.0);
  Vector& x = rep.x_star;
  Vector r = prob.b;
  const double b_norm = norm2(prob.b);
  rep.status = SolverStatus::kMaxIter;
  if (b_norm == 0.0 || s == 0) {
    rep.status = SolverStatus::kConverged;
    finish(prob, rep);
    return rep;
  }

  for (int it = 0; it < opts.aiht_max; ++it) {
    const Vector g = matvec_transposed(prob.a, r);
    const bool start = norm2(x) == 0.0;
    std::vector<bool> mask = start ? support_of(hard_threshold(g, s)) : support_of(x);
    Vector gs(n, 0.0);
    for (std::size_t j = 0; j < n; ++j)
      if (mask[j]) gs[j] = g[j];
    const double ag = norm2(matvec(prob.a, gs));
    if (ag == 0.0) {
      rep.status = SolverStatus::kConverged;
      break;
    }
    double mu = dot(gs, gs) / (ag * ag);

    auto step = [&](double size) {
      Vector v = x;
      axpy(size, g, v);
      return hard_threshold(v, s);
    };
    Vector x_new = step(mu);
    if (!start && support_of(x_new) != mask) {
      for (int shrink = 0; shrink < 60; ++shrink) {
        Vector d = x_new;
        axpy(-1.0, x, d);
        const double ad = norm2(matvec(prob.a, d));
        if (ad == 0.0 || mu <= (1.0 - c) * dot(d, d) / (ad * ad)) break;
        mu /= 2.0 * (1.0 - c);
        x_new = step(mu);
      }
    }
    Vector r_new = residual(x_new);

    if (!start) {
      Vector d = x_new;
      axpy(-1.0, x, d);
      const Vector ad = matvec(prob.a, d);
      const double ad2 = dot(ad, ad);
      if (ad2 > 0.0) {
        const double a = dot(r_new, ad) / ad2;
        Vector z = x_new;
        axpy(a, d, z);
        z = hard_threshold(z, s);
        Vector r_z = residual(z);
        if (norm2(r_z) < norm2(r_new)) {
          x_new = std::move(z);
          r_new = std::move(r_z);
        }
      }
    }
    if (!all_finite(x_new)) {
      rep.status = SolverStatus::kNumericFailure;
      break;
    }

    const double r_old = norm2(r);
    const double r_cur = norm2(r_new);
    x = std::move(x_new);
    r = std::move(r_new);
    ++rep.outer_iterations;
    if (r_cur <= 1e-14 * b_norm || std::abs(r_old - r_cur) <= opts.aiht_tol * r_old) {
      rep.status = SolverStatus::kConverged;
      break;
    }
  }
  rep.inner_iterations_total = rep.outer_iterations;
  finish(prob, rep);
  return rep;
}

}  // namespace springback
