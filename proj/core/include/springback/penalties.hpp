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

// Sparsity penalties, their thresholding operators and the gradients of the
// subtracted convex part in difference-of-convex splittings.

#include <span>
#include <string_view>

#include "springback/linalg.hpp"

namespace springback {

enum class PenaltyKind { kL1, kElasticNet, kLp, kTL1, kMCP, kL1Minus2, kSpringback };

std::string_view to_string(PenaltyKind kind);
/// Accepts the names produced by to_string (case-insensitive) plus a few
/// aliases ("l1-2", "spb"). Throws std::invalid_argument otherwise.
PenaltyKind parse_penalty_kind(std::string_view name);

/// Scalar operator parameters. Only the fields relevant to a given penalty
/// are validated.
struct ThresholdParams {
  double lambda = 0.25;  // proximal step weight
  double alpha = 1.0;    // springback / elastic-net weight
  double mu = 0.75;      // MCP saturation
  double beta = 1.0;     // TL1 shape
  double p = 0.5;        // lp exponent in (0, 1)
};

/// Throws std::invalid_argument when `params` is invalid for `kind`.
void validate(PenaltyKind kind, const ThresholdParams& params);

double penalty_value(PenaltyKind kind, std::span<const double> x, const ThresholdParams& params);

double soft_threshold(double w, double lambda);
/// Requires 0 < lambda < mu.
double firm_threshold(double w, double lambda, double mu);
/// Requires 1 - lambda * alpha > 0.
double springback_threshold(double w, double lambda, double alpha);

/// Proximal mapping of lambda * (||y||_1 - alpha/2 ||y||_2^2), applied
/// coordinatewise.
Vector prox_springback(std::span<const double> x, double lambda, double alpha);

/// The convex function h subtracted in the splitting R = c||x||_1 - h, for
/// kinds with a DC decomposition (springback, l1-2, TL1, MCP).
double dc_concave_part(PenaltyKind kind, std::span<const double> x, const ThresholdParams& params);

/// A subgradient of dc_concave_part at x. For l1-2 the origin maps to zero.
Vector dc_concave_gradient(PenaltyKind kind, std::span<const double> x,
                           const ThresholdParams& params);

/// Weight c of the ||x||_1 term in the splitting above: (beta+1)/beta for
/// TL1, 1 otherwise.
double dc_l1_weight(PenaltyKind kind, const ThresholdParams& params);

}  // namespace springback
