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

#include <doctest.h>

#include <cmath>
#include <random>
#include <tuple>

#include "springback/penalties.hpp"

using namespace springback;
using doctest::Approx;

TEST_SUITE("penalties") {

TEST_CASE("penalty values") {
  ThresholdParams p;
  p.alpha = 0.8;
  CHECK(penalty_value(PenaltyKind::kSpringback, Vector{0, 0}, p) == 0.0);
  CHECK(penalty_value(PenaltyKind::kSpringback, Vector{1, -2}, p) == Approx(3.0 - 0.4 * 5.0));
  CHECK(penalty_value(PenaltyKind::kL1Minus2, Vector{-3.5}, p) == 0.0);
  p.mu = 0.75;
  CHECK(penalty_value(PenaltyKind::kMCP, Vector{2}, p) == Approx(0.375));
  CHECK(penalty_value(PenaltyKind::kMCP, Vector{0.5}, p) == Approx(0.5 - 0.25 / 1.5));
  p.beta = 1.0;
  CHECK(penalty_value(PenaltyKind::kTL1, Vector{1}, p) == Approx(1.0));
  p.p = 0.5;
  CHECK(penalty_value(PenaltyKind::kLp, Vector{4, 9}, p) == Approx(5.0));
}

TEST_CASE("soft threshold") {
  CHECK(soft_threshold(0.2, 0.25) == 0.0);
  CHECK(soft_threshold(1.0, 0.25) == 0.75);
  CHECK(soft_threshold(-1.0, 0.25) == -0.75);
}

TEST_CASE("firm threshold") {
  CHECK(firm_threshold(0.1, 0.25, 0.75) == 0.0);
  CHECK(firm_threshold(2.0, 0.25, 0.75) == 2.0);
  CHECK(firm_threshold(0.5, 0.25, 0.75) == Approx(0.375));
  CHECK_THROWS_AS(firm_threshold(0.5, 0.75, 0.75), std::invalid_argument);
}

TEST_CASE("springback threshold") {
  CHECK(springback_threshold(0.2, 0.25, 1.0) == 0.0);
  CHECK(springback_threshold(0.5, 0.25, 4.0 / 3.0) == Approx(0.375));
  CHECK(springback_threshold(0.7, 0.25, 1e-9) == Approx(soft_threshold(0.7, 0.25)).epsilon(1e-6));
  CHECK_THROWS_AS(springback_threshold(0.5, 0.5, 2.0), std::invalid_argument);
  CHECK_THROWS_AS(springback_threshold(0.5, 0.5, 3.0), std::invalid_argument);
}

TEST_CASE("prox springback is coordinatewise") {
  CHECK(prox_springback(Vector{0, 0}, 0.25, 4.0 / 3.0) == Vector{0, 0});
  const Vector y = prox_springback(Vector{0.5, -0.5}, 0.25, 4.0 / 3.0);
  CHECK(y[0] == Approx(0.375));
  CHECK(y[1] == Approx(-0.375));
}

TEST_CASE("prox matches a fine grid on a few scalar cases") {
  for (auto [w, lambda, alpha] : {std::tuple{1.3, 0.4, 1.5}, {-0.9, 0.3, 0.5}, {0.35, 0.3, 2.0}}) {
    double best = 0.0, best_val = INFINITY;
    for (int i = -50000; i <= 50000; ++i) {
      const double y = i * 1e-4;
      const double v = 0.5 * (y - w) * (y - w) + lambda * (std::abs(y) - 0.5 * alpha * y * y);
      if (v < best_val) {
        best_val = v;
        best = y;
      }
    }
    CHECK(std::abs(springback_threshold(w, lambda, alpha) - best) <= 2e-4);
  }
}

TEST_CASE("concave part gradients") {
  ThresholdParams p;
  p.alpha = 0.5;
  CHECK(dc_concave_gradient(PenaltyKind::kSpringback, Vector{1, -2}, p) == Vector{0.5, -1});
  CHECK(dc_concave_gradient(PenaltyKind::kL1Minus2, Vector{0, 0}, p) == Vector{0, 0});
  const Vector g = dc_concave_gradient(PenaltyKind::kL1Minus2, Vector{3, 4}, p);
  CHECK(g[0] == Approx(0.6));
  CHECK(g[1] == Approx(0.8));
  p.mu = 1.0;
  CHECK(dc_concave_gradient(PenaltyKind::kMCP, Vector{0.5, 3}, p) == Vector{0.5, 1});
  p.beta = 1.0;
  CHECK(dc_l1_weight(PenaltyKind::kTL1, p) == 2.0);
  CHECK(dc_l1_weight(PenaltyKind::kMCP, p) == 1.0);
}

TEST_CASE("dc splitting reproduces the penalty") {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> g;
  ThresholdParams p;
  p.alpha = 0.6;
  p.mu = 0.8;
  p.beta = 2.0;
  for (PenaltyKind k : {PenaltyKind::kSpringback, PenaltyKind::kL1Minus2, PenaltyKind::kTL1, PenaltyKind::kMCP}) {
    for (int t = 0; t < 20; ++t) {
      Vector x(5);
      for (double& v : x) v = g(rng);
      const double split = dc_l1_weight(k, p) * norm1(x) - dc_concave_part(k, x, p);
      CHECK(split == Approx(penalty_value(k, x, p)).epsilon(1e-12));
    }
  }
}

TEST_CASE("springback plus half alpha squared norm is convex") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  ThresholdParams p;
  p.alpha = 0.9;
  auto f = [&](const Vector& x) {
    return penalty_value(PenaltyKind::kSpringback, x, p) + 0.5 * p.alpha * dot(x, x);
  };
  for (int t = 0; t < 200; ++t) {
    Vector x(4), y(4), mid(4);
    for (std::size_t i = 0; i < 4; ++i) {
      x[i] = u(rng);
      y[i] = u(rng);
      mid[i] = 0.5 * (x[i] + y[i]);
    }
    CHECK(f(x) == Approx(norm1(x)).epsilon(1e-12));
    CHECK(f(mid) <= 0.5 * (f(x) + f(y)) + 1e-10);
  }
}

TEST_CASE("names round trip") {
  for (PenaltyKind k : {PenaltyKind::kL1, PenaltyKind::kLp, PenaltyKind::kTL1, PenaltyKind::kMCP,
                        PenaltyKind::kL1Minus2, PenaltyKind::kSpringback, PenaltyKind::kElasticNet})
    CHECK(parse_penalty_kind(to_string(k)) == k);
  CHECK(parse_penalty_kind("spb") == PenaltyKind::kSpringback);
  CHECK_THROWS_AS(parse_penalty_kind("l3"), std::invalid_argument);
}

}  // TEST_SUITE
