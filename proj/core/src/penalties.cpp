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

#include "springback/penalties.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <stdexcept>
#include <string>

namespace springback {

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw std::invalid_argument(what);
}

void require_finite(double w, const char* op) {
  require(std::isfinite(w), std::string(op) + ": input must be finite");
}

double sign(double w) { return w > 0.0 ? 1.0 : (w < 0.0 ? -1.0 : 0.0); }

// sgn(w) (|w| - lambda) / denom for |w| > lambda, zero otherwise. Shared by
// the firm and springback operators so that springback(w; lambda, 1/mu) and
// the middle branch of firm(w; lambda, mu) are the same computation.
double scaled_shrink(double w, double lambda, double denom) {
  const double a = std::abs(w);
  if (a <= lambda) return 0.0;
  return sign(w) * ((a - lambda) / denom);
}

double mcp_scalar(double t, double mu) {
  const double a = std::abs(t);
  return a <= mu ? a - t * t / (2.0 * mu) : mu / 2.0;
}

}  // namespace

std::string_view to_string(PenaltyKind kind) {
  switch (kind) {
    case PenaltyKind::kL1: return "l1";
    case PenaltyKind::kElasticNet: return "elastic_net";
    case PenaltyKind::kLp: return "lp";
    case PenaltyKind::kTL1: return "tl1";
    case PenaltyKind::kMCP: return "mcp";
    case PenaltyKind::kL1Minus2: return "l1_minus_2";
    case PenaltyKind::kSpringback: return "springback";
  }
  return "unknown";
}

PenaltyKind parse_penalty_kind(std::string_view name) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  static constexpr std::array kinds{PenaltyKind::kL1,  PenaltyKind::kElasticNet, PenaltyKind::kLp,
                                    PenaltyKind::kTL1, PenaltyKind::kMCP,        PenaltyKind::kL1Minus2,
                                    PenaltyKind::kSpringback};
  for (PenaltyKind k : kinds)
    if (lower == to_string(k)) return k;
  if (lower == "l1-2" || lower == "l12" || lower == "l1_2") return PenaltyKind::kL1Minus2;
  if (lower == "spb") return PenaltyKind::kSpringback;
  if (lower == "el" || lower == "elastic-net") return PenaltyKind::kElasticNet;
  throw std::invalid_argument("unknown penalty kind '" + std::string(name) + "'");
}

void validate(PenaltyKind kind, const ThresholdParams& params) {
  switch (kind) {
    case PenaltyKind::kL1:
    case PenaltyKind::kL1Minus2:
      return;
    case PenaltyKind::kElasticNet:
    case PenaltyKind::kSpringback:
      require(params.alpha > 0.0 && std::isfinite(params.alpha), "alpha must be positive");
      return;
    case PenaltyKind::kLp:
      require(params.p > 0.0 && params.p < 1.0, "p must lie in (0, 1)");
      return;
    case PenaltyKind::kTL1:
      require(params.beta > 0.0 && std::isfinite(params.beta), "beta must be positive");
      return;
    case PenaltyKind::kMCP:
      require(params.mu > 0.0 && std::isfinite(params.mu), "mu must be positive");
      return;
  }
}

double penalty_value(PenaltyKind kind, std::span<const double> x, const ThresholdParams& params) {
  validate(kind, params);
  require(all_finite(x), "penalty_value: x must be finite");
  switch (kind) {
    case PenaltyKind::kL1:
      return norm1(x);
    case PenaltyKind::kElasticNet:
      return norm1(x) + 0.5 * params.alpha * dot(x, x);
    case PenaltyKind::kLp: {
      double acc = 0.0;
      for (double t : x) acc += std::pow(std::abs(t), params.p);
      return acc;
    }
    case PenaltyKind::kTL1: {
      double acc = 0.0;
      for (double t : x) acc += (params.beta + 1.0) * std::abs(t) / (params.beta + std::abs(t));
      return acc;
    }
    case PenaltyKind::kMCP: {
      double acc = 0.0;
      for (double t : x) acc += mcp_scalar(t, params.mu);
      return acc;
    }
    case PenaltyKind::kL1Minus2:
      return norm1(x) - norm2(x);
    case PenaltyKind::kSpringback:
      return norm1(x) - 0.5 * params.alpha * dot(x, x);
  }
  return 0.0;
}

double soft_threshold(double w, double lambda) {
  require_finite(w, "soft_threshold");
  require(lambda > 0.0, "soft_threshold: lambda must be positive");
  return sign(w) * std::max(std::abs(w) - lambda, 0.0);
}

double firm_threshold(double w, double lambda, double mu) {
  require_finite(w, "firm_threshold");
  require(lambda > 0.0, "firm_threshold: lambda must be positive");
  require(mu > lambda, "firm_threshold: mu must exceed lambda");
  if (std::abs(w) >= mu) return w;
  return scaled_shrink(w, lambda, 1.0 - lambda * (1.0 / mu));
}

double springback_threshold(double w, double lambda, double alpha) {
  require_finite(w, "springback_threshold");
  require(lambda > 0.0, "springback_threshold: lambda must be positive");
  require(alpha > 0.0, "springback_threshold: alpha must be positive");
  const double denom = 1.0 - lambda * alpha;
  require(denom > 0.0, "springback_threshold: requires 1 - lambda * alpha > 0");
  return scaled_shrink(w, lambda, denom);
}

Vector prox_springback(std::span<const double> x, double lambda, double alpha) {
  Vector out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = springback_threshold(x[i], lambda, alpha);
  return out;
}

double dc_l1_weight(PenaltyKind kind, const ThresholdParams& params) {
  return kind == PenaltyKind::kTL1 ? (params.beta + 1.0) / params.beta : 1.0;
}

double dc_concave_part(PenaltyKind kind, std::span<const double> x, const ThresholdParams& params) {
  switch (kind) {
    case PenaltyKind::kSpringback:
      validate(kind, params);
      return 0.5 * params.alpha * dot(x, x);
    case PenaltyKind::kL1Minus2:
      return norm2(x);
    case PenaltyKind::kMCP:
    case PenaltyKind::kTL1:
      return dc_l1_weight(kind, params) * norm1(x) - penalty_value(kind, x, params);
    default:
      throw std::invalid_argument("dc_concave_part: no DC splitting for " + std::string(to_string(kind)));
  }
}

Vector dc_concave_gradient(PenaltyKind kind, std::span<const double> x,
                           const ThresholdParams& params) {
  require(all_finite(x), "dc_concave_gradient: x must be finite");
  Vector g(x.size(), 0.0);
  switch (kind) {
    case PenaltyKind::kSpringback:
      validate(kind, params);
      for (std::size_t i = 0; i < x.size(); ++i) g[i] = params.alpha * x[i];
      return g;
    case PenaltyKind::kL1Minus2: {
      const double nx = norm2(x);
      if (nx == 0.0) return g;
      for (std::size_t i = 0; i < x.size(); ++i) g[i] = x[i] / nx;
      return g;
    }
    case PenaltyKind::kMCP:
      validate(kind, params);
      for (std::size_t i = 0; i < x.size(); ++i)
        g[i] = sign(x[i]) * std::min(std::abs(x[i]), params.mu) / params.mu;
      return g;
    case PenaltyKind::kTL1: {
      validate(kind, params);
      const double b = params.beta;
      for (std::size_t i = 0; i < x.size(); ++i) {
        const double d = b + std::abs(x[i]);
        g[i] = sign(x[i]) * ((b + 1.0) / b - (b + 1.0) * b / (d * d));
      }
      return g;
    }
    default:
      throw std::invalid_argument("dc_concave_gradient: no DC splitting for " +
                                  std::string(to_string(kind)));
  }
}

}  // namespace springback
