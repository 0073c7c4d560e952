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

// Sparse recovery solvers: the DCA for the constrained springback model with
// its scaled inner ADMM, and the baseline solvers it is compared against.

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "springback/bounds.hpp"
#include "springback/linalg.hpp"
#include "springback/penalties.hpp"

namespace springback {

/// min R(x) s.t. ||Ax - b||_2 <= tau, or its unconstrained counterpart.
struct ProblemInstance {
  Matrix a;
  Vector b;
  double tau = 0.0;
  std::optional<Vector> ground_truth;
};

/// Throws std::invalid_argument on inconsistent dimensions, negative tau or
/// non-finite data. `require_nonzero_b` additionally rejects b = 0.
void validate(const ProblemInstance& prob, bool require_nonzero_b = false);

struct SolverOptions {
  double alpha = 0.5;
  double rho = 1e5;
  double zeta = 1e-5;        // ADMM penalty of the unconstrained baselines
  double inner_zeta = 10.0;  // ADMM penalty of the constrained subproblem
  double eps_outer = 1e-5;
  int max_outer = 10;
  double eps_inner = 1e-5;
  int max_inner = 500;
  /// With tau = 0, replace each inner ADMM result by the exact solution on
  /// its support when that is feasible and no worse.
  bool polish = true;
  double reg_lambda = 1e-6;
  int admm_l1_max = 5000;
  std::size_t sparsity_estimate = 0;
  double p = 0.5;
  double beta = 1.0;
  std::optional<double> mu;  // MCP; defaults to 1 / alpha
  double irls_eps0 = 1.0;
  double irls_eps_floor = 1e-8;
  double irls_tol = 1e-8;
  int irls_max = 1000;
  int aiht_max = 1000;
  double aiht_tol = 1e-9;
  /// Known RIP profile, enables the posterior alpha check.
  std::optional<RipProfile> rip;
  double posterior_eps = 0.0;
  /// Precomputed sigma_min(A); computed on demand when absent.
  std::optional<double> sigma_min;

  friend bool operator==(const SolverOptions&, const SolverOptions&) = default;
};

/// Throws std::invalid_argument when a field is out of range.
void validate(const SolverOptions& opts);

enum class SolverStatus { kConverged, kMaxIter, kInfeasibleStart, kNumericFailure };
std::string_view to_string(SolverStatus status);

struct SolverReport {
  Vector x_star;
  int outer_iterations = 0;
  long inner_iterations_total = 0;
  /// Objective values F(x^k), k >= 1 (x^0 = 0 is generally infeasible).
  std::vector<double> objective_trace;
  /// ||x^k||_2 for k >= 0.
  std::vector<double> iterate_norms;
  /// ||x^{k+1} - x^k||_2 for k >= 0.
  std::vector<double> step_norms;
  double residual = 0.0;
  std::optional<bool> posterior_alpha_ok;
  std::optional<bool> convergence_alpha_ok;
  SolverStatus status = SolverStatus::kMaxIter;
};

/// Iterate of the scaled ADMM for the constrained subproblem. x, y, u live in
/// R^n, z and eta in R^m.
struct AdmmState {
  Vector x, y, z, u, eta;

  static AdmmState zeros(std::size_t m, std::size_t n);
};

/// Runs the scaled ADMM on
///   min ||x||_1 - <x, xi>  s.t.  ||Ax - b||_2 <= tau
/// from `state` until the relative change of x drops below eps_inner or
/// max_inner passes. `solver` must factor rho A^T A + inner_zeta I. Returns
/// the number of passes; the solution is state.x.
int admm_subproblem(const ProblemInstance& prob, std::span<const double> xi,
                    const SolverOptions& opts, const ShiftedGramSolver& solver, AdmmState& state);

/// Cold-started convenience form.
Vector admm_subproblem(const ProblemInstance& prob, std::span<const double> xi,
                       const SolverOptions& opts);

/// ||x||_1 - (alpha/2) ||x||_2^2
double springback_objective(std::span<const double> x, double alpha);

/// DCA on the constrained springback model, starting from x^0 = 0 with
/// xi^k = alpha x^k.
SolverReport dca_springback(const ProblemInstance& prob, const SolverOptions& opts);

/// min 1/2 ||Ax - b||^2 + lambda ||x||_1 by two-block ADMM.
SolverReport admm_l1(const ProblemInstance& prob, const SolverOptions& opts);

/// DCA on min 1/2 ||Ax - b||^2 + lambda R(x) for R in {l1-2, TL1, MCP}.
SolverReport dca_unconstrained(PenaltyKind kind, const ProblemInstance& prob,
                               const SolverOptions& opts);

/// Iteratively reweighted least squares for the smoothed lp model.
SolverReport irls_lp(const ProblemInstance& prob, const SolverOptions& opts);

/// Keeps the s largest magnitudes (lower index wins ties) and zeroes the rest.
Vector hard_threshold(std::span<const double> x, std::size_t s);

/// Accelerated normalized iterative hard thresholding with sparsity
/// sparsity_estimate (0 yields the zero vector).
SolverReport aiht(const ProblemInstance& prob, const SolverOptions& opts);

/// alpha choice from sigma_min(A), cond(A), ||b|| and tau:
///   cond <= cond_threshold: min(0.7, 2 sigma_min / (||b|| + tau))
///   otherwise:              max(omega, min(0.7, 2 sigma_min / (||b|| + tau)))
double alpha_subroutine(const Matrix& a, std::span<const double> b, double tau, double omega,
                        double cond_threshold = 5.0);
double alpha_subroutine(const SingularExtremes& sv, double b_norm, double tau, double omega,
                        double cond_threshold = 5.0);

/// alpha <= alpha_posterior_bound(prof, ||x*|| + eps)
bool posterior_verify(const RipProfile& prof, double alpha, std::span<const double> x_star,
                      double eps);

enum class SolverId { kDcaSpringback, kAdmmL1, kIrlsLp, kAiht, kDcaL1Minus2, kDcaTL1, kDcaMcp };
std::string_view to_string(SolverId id);
/// Throws std::invalid_argument for unknown names.
SolverId parse_solver_id(std::string_view name);
const std::vector<SolverId>& all_solvers();

/// Uniform entry point.
SolverReport solve(SolverId id, const ProblemInstance& prob, const SolverOptions& opts);

}  // namespace springback
