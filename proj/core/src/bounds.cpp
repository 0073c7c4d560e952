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

#include "springback/bounds.hpp"

#include <cmath>
#include <string>

namespace springback {

namespace {

void require(bool ok, const char* what) {
  if (!ok) throw std::invalid_argument(what);
}

// sqrt(1 - delta4s) and sqrt(1 + delta3s) appear in nearly every formula.
struct RootTerms {
  double lower;  // sqrt(1 - d4)
  double upper;  // sqrt(1 + d3)
  double rs;     // sqrt(s)
  double r3s;    // sqrt(3s)
};

RootTerms roots(const RipProfile& prof) {
  validate(prof);
  const double s = prof.s;
  return {std::sqrt(1.0 - prof.delta4s), std::sqrt(1.0 + prof.delta3s), std::sqrt(s),
          std::sqrt(3.0 * s)};
}

void require_rip(const RipProfile& prof, const char* who) {
  if (!rip_condition(prof))
    throw RipConditionError(std::string(who) + ": RIP condition delta3s < 3(1 - delta4s) - 1 fails");
}

}  // namespace

void validate(const RipProfile& prof) {
  require(prof.s >= 1, "RipProfile: s must be positive");
  require(prof.delta3s > 0.0 && prof.delta3s < 1.0, "RipProfile: delta3s must lie in (0, 1)");
  require(prof.delta4s > 0.0 && prof.delta4s < 1.0, "RipProfile: delta4s must lie in (0, 1)");
}

std::string_view to_string(BoundKind kind) {
  switch (kind) {
    case BoundKind::kSparse: return "sparse";
    case BoundKind::kSparseImproved: return "sparse_improved";
    case BoundKind::kNearlySparse: return "nearly_sparse";
    case BoundKind::kNearlySparseImproved: return "nearly_sparse_improved";
  }
  return "unknown";
}

bool rip_condition(const RipProfile& prof) {
  validate(prof);
  return prof.delta3s < 3.0 * (1.0 - prof.delta4s) - 1.0;
}

double d1(const RipProfile& prof, double alpha) {
  const RootTerms r = roots(prof);
  return 0.5 * alpha * (r.lower + r.upper) / (r.r3s + r.rs);
}

double d2(const RipProfile& prof) {
  const RootTerms r = roots(prof);
  const double sqrt3 = std::sqrt(3.0);
  return (sqrt3 * r.lower - r.upper) / (sqrt3 + 1.0);
}

double alpha_posterior_bound(const RipProfile& prof, double xopt_norm) {
  require(xopt_norm > 0.0, "alpha_posterior_bound: norm must be positive");
  const RootTerms r = roots(prof);
  return (r.lower * r.r3s - r.upper * r.rs) / ((r.lower + r.upper) * xopt_norm);
}

BoundReport recovery_bound(const RipProfile& prof, double alpha, double tau, double tail_l1,
                           bool improved) {
  require(alpha > 0.0, "recovery_bound: alpha must be positive");
  require(tau >= 0.0 && tail_l1 >= 0.0, "recovery_bound: tau and tail must be nonnegative");
  require_rip(prof, "recovery_bound");

  BoundReport rep;
  rep.rip_ok = true;
  rep.d1 = d1(prof, alpha);
  rep.d2 = d2(prof);
  const bool nearly = tail_l1 > 0.0;
  const double radicand = 2.0 * tau / rep.d1 + (nearly ? 4.0 * tail_l1 / alpha : 0.0);
  if (improved) {
    const double shift = rep.d2 / (2.0 * rep.d1);
    rep.bound = std::sqrt(shift * shift + radicand) - shift;
    rep.kind = nearly ? BoundKind::kNearlySparseImproved : BoundKind::kSparseImproved;
  } else {
    rep.bound = std::sqrt(radicand);
    rep.kind = nearly ? BoundKind::kNearlySparse : BoundKind::kSparse;
  }
  return rep;
}

double a_of_s(int s) {
  require(s >= 1, "a_of_s: s must be positive");
  const double sd = s;
  const double q = (3.0 * sd - 1.0) / (std::sqrt(3.0) * sd + std::sqrt(4.0 * sd - 1.0));
  return q * q;
}

bool exact_condition(PenaltyKind kind, const RipProfile& prof, const ThresholdParams& params) {
  validate(prof);
  const double d3 = prof.delta3s;
  const double slack = 1.0 - prof.delta4s;
  switch (kind) {
    case PenaltyKind::kL1:
    case PenaltyKind::kSpringback:
      return d3 < 3.0 * slack - 1.0;
    case PenaltyKind::kLp:
      validate(kind, params);
      return d3 < std::pow(3.0, (2.0 - params.p) / params.p) * slack - 1.0;
    case PenaltyKind::kTL1: {
      validate(kind, params);
      const double r = params.beta / (params.beta + 1.0);
      return d3 < r * r * 3.0 * slack - 1.0;
    }
    case PenaltyKind::kL1Minus2:
      return d3 < a_of_s(prof.s) * slack - 1.0;
    default:
      throw std::invalid_argument("exact_condition: unsupported penalty " + std::string(to_string(kind)));
  }
}

double noise_threshold(PenaltyKind kind, const RipProfile& prof, double alpha,
                       const ThresholdParams& params, bool require_condition) {
  require(alpha > 0.0, "noise_threshold: alpha must be positive");
  if (kind != PenaltyKind::kL1 && kind != PenaltyKind::kLp && kind != PenaltyKind::kTL1 &&
      kind != PenaltyKind::kL1Minus2)
    throw std::invalid_argument("noise_threshold: unsupported penalty " + std::string(to_string(kind)));
  if (!exact_condition(kind, prof, params) && require_condition)
    throw RipConditionError("noise_threshold: exact recovery condition fails for " +
                            std::string(to_string(kind)));

  const RootTerms r = roots(prof);
  const double sqrt3 = std::sqrt(3.0);
  const double width = r.r3s + r.rs;
  const double spread = r.lower + r.upper;

  switch (kind) {
    case PenaltyKind::kL1: {
      const double g = sqrt3 * r.lower - r.upper;
      return width * g * g / (4.0 * alpha * spread);
    }
    case PenaltyKind::kLp: {
      const double p = params.p;
      const double core = std::pow(1.0 - prof.delta4s, p / 2.0) -
                          std::pow(1.0 + prof.delta3s, p / 2.0) * std::pow(3.0, p / 2.0 - 1.0);
      const double num = width * std::pow(core, 2.0 / p);
      const double den =
          alpha * spread * (1.0 + 1.0 / ((2.0 / p - 1.0) * std::pow(3.0, 2.0 / p - 1.0)));
      return num / den;
    }
    case PenaltyKind::kTL1: {
      const double ratio = params.beta / (params.beta + 1.0);
      const double g = ratio * sqrt3 * r.lower - r.upper;
      const double low3 = std::sqrt(1.0 - prof.delta3s);
      const double h = g + r.r3s * low3;
      return 4.0 * width * (1.0 - prof.delta3s) * g * g / (alpha * spread * h * h);
    }
    case PenaltyKind::kL1Minus2: {
      const double a = a_of_s(prof.s);
      const double g = std::sqrt(a * (1.0 - prof.delta4s)) - r.upper;
      const double h = r.r3s - std::sqrt(prof.s * a);
      return width * g * g / (alpha * spread * h * h);
    }
    default:
      return 0.0;
  }
}

double generic_noise_threshold(double d1_value, double c_s) {
  require(d1_value > 0.0 && c_s > 0.0, "generic_noise_threshold: D1 and C_s must be positive");
  return 2.0 / (d1_value * c_s * c_s);
}

double improved_noise_threshold(double d1_value, double d2_value, double c_s) {
  require(d1_value > 0.0 && c_s > 0.0, "improved_noise_threshold: D1 and C_s must be positive");
  return (2.0 - d2_value * c_s) / (d1_value * c_s * c_s);
}

double basis_pursuit_noise_constant(const RipProfile& prof) {
  require_rip(prof, "basis_pursuit_noise_constant");
  const RootTerms r = roots(prof);
  return 4.0 / (std::sqrt(3.0) * r.lower - r.upper);
}

double constant_c(const RipProfile& prof, double alpha, double tau, double c1s) {
  require(c1s > 0.0, "constant_c: c1s must be positive");
  const RootTerms r = roots(prof);
  const double f = (r.lower + r.upper) / (4.0 * (std::sqrt(3.0) + 1.0));
  return alpha * alpha * std::pow(c1s, 4) * tau * tau * f * f;
}

double convergence_alpha_bound(double sigma_min, double b_norm, double tau) {
  require(tau >= 0.0, "convergence_alpha_bound: tau must be nonnegative");
  const double denom = b_norm + tau;
  if (!(denom > 0.0))
    throw std::domain_error("convergence_alpha_bound: ||b|| + tau must be positive");
  return 2.0 * sigma_min / denom;
}

double convergence_alpha_bound(const Matrix& a, std::span<const double> b, double tau) {
  const double bn = norm2(b);
  if (!(bn + tau > 0.0))
    throw std::domain_error("convergence_alpha_bound: ||b|| + tau must be positive");
  return convergence_alpha_bound(singular_extremes(a).sigma_min, bn, tau);
}

bool alpha_relation(const RipProfile& prof, double sigma_min, double b_norm, double tau,
                    double xopt_norm) {
  const RootTerms r = roots(prof);
  const double lhs = (r.lower * r.r3s - r.upper * r.rs) / (r.lower + r.upper);
  const double rhs = 2.0 * sigma_min * xopt_norm / (b_norm + tau);
  return lhs <= rhs;
}

bool alpha_relation(const RipProfile& prof, const Matrix& a, std::span<const double> b, double tau,
                    double xopt_norm) {
  return alpha_relation(prof, singular_extremes(a).sigma_min, norm2(b), tau, xopt_norm);
}

}  // namespace springback
