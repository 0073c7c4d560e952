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

#include "springback/solvers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace springback {

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw std::invalid_argument(what);
}

}  // namespace

void validate(const ProblemInstance& prob, bool require_nonzero_b) {
  require(!prob.a.empty(), "ProblemInstance: empty matrix");
  require(prob.b.size() == prob.a.rows(), "ProblemInstance: b has " + std::to_string(prob.b.size()) +
                                              " entries, A has " + std::to_string(prob.a.rows()) +
                                              " rows");
  require(prob.tau >= 0.0 && std::isfinite(prob.tau), "ProblemInstance: tau must be finite and >= 0");
  require(all_finite(prob.b), "ProblemInstance: b must be finite");
  if (prob.ground_truth)
    require(prob.ground_truth->size() == prob.a.cols(), "ProblemInstance: ground truth has wrong length");
  if (require_nonzero_b) require(norm2(prob.b) > 0.0, "ProblemInstance: b must be nonzero");
}

void validate(const SolverOptions& o) {
  require(o.alpha > 0.0 && std::isfinite(o.alpha), "SolverOptions: alpha must be positive");
  require(o.rho > 0.0 && o.zeta > 0.0 && o.inner_zeta > 0.0,
          "SolverOptions: ADMM penalties must be positive");
  require(o.eps_outer > 0.0 && o.eps_inner > 0.0, "SolverOptions: tolerances must be positive");
  require(o.max_outer > 0 && o.max_inner > 0 && o.admm_l1_max > 0 && o.irls_max > 0 && o.aiht_max > 0,
          "SolverOptions: iteration caps must be positive");
  require(o.reg_lambda > 0.0, "SolverOptions: reg_lambda must be positive");
  require(o.p > 0.0 && o.p < 1.0, "SolverOptions: p must lie in (0, 1)");
  require(o.beta > 0.0, "SolverOptions: beta must be positive");
  require(!o.mu || *o.mu > 0.0, "SolverOptions: mu must be positive");
  require(o.irls_eps0 > 0.0 && o.irls_eps_floor > 0.0 && o.irls_tol > 0.0,
          "SolverOptions: IRLS constants must be positive");
  require(o.aiht_tol > 0.0, "SolverOptions: aiht_tol must be positive");
  require(o.posterior_eps >= 0.0, "SolverOptions: posterior_eps must be nonnegative");
}

std::string_view to_string(SolverStatus status) {
  switch (status) {
    case SolverStatus::kConverged: return "CONVERGED";
    case SolverStatus::kMaxIter: return "MAX_ITER";
    case SolverStatus::kInfeasibleStart: return "INFEASIBLE_START";
    case SolverStatus::kNumericFailure: return "NUMERIC_FAILURE";
  }
  return "UNKNOWN";
}

double alpha_subroutine(const SingularExtremes& sv, double b_norm, double tau, double omega,
                        double cond_threshold) {
  require(omega > 0.0, "alpha_subroutine: omega must be positive");
  require(cond_threshold > 0.0, "alpha_subroutine: cond_threshold must be positive");
  const double safe = std::min(0.7, convergence_alpha_bound(sv.sigma_min, b_norm, tau));
  const double cond = sv.sigma_min > 0.0 ? sv.condition() : std::numeric_limits<double>::infinity();
  return cond <= cond_threshold ? safe : std::max(omega, safe);
}

double alpha_subroutine(const Matrix& a, std::span<const double> b, double tau, double omega,
                        double cond_threshold) {
  return alpha_subroutine(singular_extremes(a), norm2(b), tau, omega, cond_threshold);
}

bool posterior_verify(const RipProfile& prof, double alpha, std::span<const double> x_star, double eps) {
  const double norm = norm2(x_star) + eps;
  if (norm == 0.0) return true;
  return alpha <= alpha_posterior_bound(prof, norm);
}

std::string_view to_string(SolverId id) {
  switch (id) {
    case SolverId::kDcaSpringback: return "dca_springback";
    case SolverId::kAdmmL1: return "admm_l1";
    case SolverId::kIrlsLp: return "irls_lp";
    case SolverId::kAiht: return "aiht";
    case SolverId::kDcaL1Minus2: return "dca_l1_minus_2";
    case SolverId::kDcaTL1: return "dca_tl1";
    case SolverId::kDcaMcp: return "dca_mcp";
  }
  return "unknown";
}

const std::vector<SolverId>& all_solvers() {
  static const std::vector<SolverId> ids{SolverId::kDcaSpringback, SolverId::kAdmmL1,
                                         SolverId::kIrlsLp,        SolverId::kAiht,
                                         SolverId::kDcaL1Minus2,   SolverId::kDcaTL1,
                                         SolverId::kDcaMcp};
  return ids;
}

SolverId parse_solver_id(std::string_view name) {
  for (SolverId id : all_solvers())
    if (name == to_string(id)) return id;
  if (name == "springback" || name == "spb") return SolverId::kDcaSpringback;
  if (name == "irls") return SolverId::kIrlsLp;
  if (name == "l1") return SolverId::kAdmmL1;
  throw std::invalid_argument("unknown solver '" + std::string(name) + "'");
}

SolverReport solve(SolverId id, const ProblemInstance& prob, const SolverOptions& opts) {
  switch (id) {
    case SolverId::kDcaSpringback: return dca_springback(prob, opts);
    case SolverId::kAdmmL1: return admm_l1(prob, opts);
    case SolverId::kIrlsLp: return irls_lp(prob, opts);
    case SolverId::kAiht: return aiht(prob, opts);
    case SolverId::kDcaL1Minus2: return dca_unconstrained(PenaltyKind::kL1Minus2, prob, opts);
    case SolverId::kDcaTL1: return dca_unconstrained(PenaltyKind::kTL1, prob, opts);
    case SolverId::kDcaMcp: return dca_unconstrained(PenaltyKind::kMCP, prob, opts);
  }
  throw std::invalid_argument("solve: unknown solver id");
}

}  // namespace springback
