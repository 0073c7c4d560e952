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

// Closed-form recovery conditions, constants and error bounds for the
// springback-penalized model, and the noise thresholds above which its
// bound beats the linear-in-noise bounds of other penalties.

#include <stdexcept>
#include <string_view>

#include "springback/linalg.hpp"
#include "springback/penalties.hpp"

namespace springback {

/// Thrown when a bound is requested for a profile that violates the
/// restricted isometry condition the bound rests on.
class RipConditionError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Sparsity level and its 3s / 4s restricted isometry constants.
struct RipProfile {
  int s = 1;
  double delta3s = 0.0;
  double delta4s = 0.0;

  friend bool operator==(const RipProfile&, const RipProfile&) = default;
};

/// Throws std::invalid_argument unless s >= 1 and both constants are in (0,1).
void validate(const RipProfile& prof);

enum class BoundKind { kSparse, kSparseImproved, kNearlySparse, kNearlySparseImproved };
std::string_view to_string(BoundKind kind);

struct BoundReport {
  bool rip_ok = false;
  double d1 = 0.0;
  double d2 = 0.0;
  double bound = 0.0;
  BoundKind kind = BoundKind::kSparse;
};

/// delta3s < 3 (1 - delta4s) - 1
bool rip_condition(const RipProfile& prof);

/// D1 = (alpha/2) (sqrt(1-d4) + sqrt(1+d3)) / (sqrt(3s) + sqrt(s))
double d1(const RipProfile& prof, double alpha);

/// D2 = (sqrt(3) sqrt(1-d4) - sqrt(1+d3)) / (sqrt(3) + 1); negative when the
/// RIP condition fails.
double d2(const RipProfile& prof);

/// Largest alpha for which the exact/stable recovery theorems apply, given
/// the norm of the minimizer (pass ||x*|| + eps for the posterior check).
double alpha_posterior_bound(const RipProfile& prof, double xopt_norm);

/// Error bound ||x_opt - x_bar||. tail_l1 = ||x_bar - (x_bar)_s||_1 selects
/// the nearly-sparse variants when positive; `improved` selects the bounds
/// that also use D2. Throws RipConditionError if the RIP condition fails.
BoundReport recovery_bound(const RipProfile& prof, double alpha, double tau, double tail_l1,
                           bool improved);

/// ((3s - 1) / (sqrt(3) s + sqrt(4s - 1)))^2, the l1-2 exact-recovery factor.
double a_of_s(int s);

/// Exact-recovery RIP condition for l1, lp, TL1, l1-2 and springback.
bool exact_condition(PenaltyKind kind, const RipProfile& prof, const ThresholdParams& params);

/// Noise level above which the springback bound sqrt(2 tau / D1) is tighter
/// than the competing penalty's C_s tau bound. Supported kinds: l1, lp, TL1,
/// l1-2. Throws RipConditionError when that penalty's exact condition fails,
/// unless `require_condition` is false, in which case the row formula is
/// evaluated as is.
double noise_threshold(PenaltyKind kind, const RipProfile& prof, double alpha,
                       const ThresholdParams& params, bool require_condition = true);

/// tau > 2 / (D1 C_s^2): generic threshold for a linear bound C_s tau.
double generic_noise_threshold(double d1_value, double c_s);

/// Threshold for the improved springback bound: (2 - D2 C_s) / (D1 C_s^2).
double improved_noise_threshold(double d1_value, double d2_value, double c_s);

/// C_s = 4 / (sqrt(3 (1 - d4)) - sqrt(1 + d3)), the linear noise constant of
/// basis pursuit under the same RIP condition.
double basis_pursuit_noise_constant(const RipProfile& prof);

/// Sparsity level below which the springback nearly-sparse bound beats the
/// basis pursuit stable bound, for an s-sparse signal. c1s is the caller's
/// basis pursuit noise constant.
double constant_c(const RipProfile& prof, double alpha, double tau, double c1s);

/// 2 sigma_min(A) / (||b|| + tau): the alpha ceiling that keeps the DCA
/// objective nonnegative along all iterates.
double convergence_alpha_bound(const Matrix& a, std::span<const double> b, double tau);
/// Same, with sigma_min already known.
double convergence_alpha_bound(double sigma_min, double b_norm, double tau);

/// Whether the posterior alpha condition implies the convergence condition,
/// i.e. whether (sqrt(1-d4) sqrt(3s) - sqrt(1+d3) sqrt(s)) / (sqrt(1-d4) +
/// sqrt(1+d3)) <= 2 sigma_min ||x_opt|| / (||b|| + tau).
bool alpha_relation(const RipProfile& prof, const Matrix& a, std::span<const double> b, double tau,
                    double xopt_norm);
bool alpha_relation(const RipProfile& prof, double sigma_min, double b_norm, double tau,
                    double xopt_norm);

}  // namespace springback
