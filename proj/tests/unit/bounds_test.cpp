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

#include "springback/bounds.hpp"

using namespace springback;
using doctest::Approx;

namespace {
const RipProfile kToy{20, 0.25, 1.0 / 3.0};
}

TEST_SUITE("bounds") {

TEST_CASE("rip condition") {
  CHECK(rip_condition(kToy));
  CHECK_FALSE(rip_condition({20, 0.9, 0.9}));
  CHECK_FALSE(rip_condition({20, 0.5, 0.5}));
  CHECK_THROWS_AS(validate(RipProfile{0, 0.1, 0.1}), std::invalid_argument);
}

TEST_CASE("D1 and D2") {
  CHECK(d1(kToy, 1.0) == Approx(0.0791667).epsilon(1e-5));
  CHECK(d1(kToy, 2.0) == Approx(2.0 * d1(kToy, 1.0)));
  CHECK(d1({80, 0.25, 1.0 / 3.0}, 1.0) == Approx(0.5 * d1(kToy, 1.0)));
  CHECK(d2(kToy) == Approx(0.108409).epsilon(1e-5));
  CHECK(d2({20, 0.25, 0.99}) < 0.0);
  CHECK(d2({20, 1e-12, 1e-12}) == Approx((std::sqrt(3.0) - 1.0) / (std::sqrt(3.0) + 1.0)));
}

TEST_CASE("posterior alpha ceiling") {
  CHECK(alpha_posterior_bound(kToy, 1.0) == Approx(0.68468).epsilon(1e-4));
  CHECK(alpha_posterior_bound({20, 0.9, 0.9}, 1.0) < 0.0);
  CHECK_THROWS_AS(alpha_posterior_bound(kToy, 0.0), std::invalid_argument);
}

TEST_CASE("recovery bounds") {
  CHECK(recovery_bound(kToy, 1.0, 0.0, 0.0, false).bound == 0.0);
  CHECK(recovery_bound(kToy, 1.0, 0.0, 0.0, true).bound == Approx(0.0).scale(1.0));
  const auto plain = recovery_bound(kToy, 1.0, 0.1, 0.0, false);
  CHECK(plain.bound == Approx(1.58945).epsilon(1e-5));
  CHECK(plain.kind == BoundKind::kSparse);
  CHECK(recovery_bound(kToy, 1.0, 0.1, 0.5, true).kind == BoundKind::kNearlySparseImproved);
  CHECK_THROWS_AS(recovery_bound({20, 0.9, 0.9}, 1.0, 0.1, 0.0, false), RipConditionError);

  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  int checked = 0;
  while (checked < 200) {
    const RipProfile prof{1 + static_cast<int>(u(rng) * 50), 0.5 * u(rng), 0.5 * u(rng)};
    if (!rip_condition(prof)) continue;
    const double alpha = 0.05 + u(rng), tau = u(rng), tail = u(rng) < 0.5 ? 0.0 : u(rng);
    CHECK(recovery_bound(prof, alpha, tau, tail, true).bound <=
          recovery_bound(prof, alpha, tau, tail, false).bound + 1e-12);
    ++checked;
  }
}

TEST_CASE("a(s) and exact conditions") {
  CHECK(a_of_s(1) == Approx(1.0 / 3.0));
  CHECK(a_of_s(20) == Approx(1.8371).epsilon(1e-4));
  for (int s = 1; s <= 1000000; s = s * 3 + 1) CHECK(a_of_s(s) < 3.0);
  ThresholdParams p;
  CHECK_FALSE(exact_condition(PenaltyKind::kL1Minus2, kToy, p));
  for (double d : {0.05, 0.2, 0.4})
    CHECK(exact_condition(PenaltyKind::kSpringback, {5, d, d}, p) ==
          exact_condition(PenaltyKind::kL1, {5, d, d}, p));
  p.p = 1.0 - 1e-9;
  CHECK(exact_condition(PenaltyKind::kLp, {5, 0.3, 0.2}, p) ==
        exact_condition(PenaltyKind::kL1, {5, 0.3, 0.2}, p));
  CHECK_THROWS_AS(exact_condition(PenaltyKind::kMCP, kToy, p), std::invalid_argument);
}

TEST_CASE("toy noise thresholds") {
  ThresholdParams p;
  CHECK(noise_threshold(PenaltyKind::kL1, kToy, 1.0, p) == Approx(0.1385).epsilon(1e-3));
  p.p = 0.2;
  CHECK(noise_threshold(PenaltyKind::kLp, kToy, 1.0, p) == Approx(0.0271).epsilon(1e-3));
  p.p = 0.5;
  CHECK(noise_threshold(PenaltyKind::kLp, kToy, 1.0, p) == Approx(0.2333).epsilon(1e-3));
  p.p = 0.999;
  CHECK(noise_threshold(PenaltyKind::kLp, kToy, 1.0, p) == Approx(0.1391).epsilon(1e-3));
  p.beta = 1.0;
  // TL1 and l1-2 fail their own exact conditions at this profile; the row
  // formulas are still defined.
  CHECK_THROWS_AS(noise_threshold(PenaltyKind::kTL1, kToy, 1.0, p), RipConditionError);
  CHECK(noise_threshold(PenaltyKind::kTL1, kToy, 1.0, p, false) == Approx(0.0807).epsilon(1e-3));
  CHECK(noise_threshold(PenaltyKind::kL1Minus2, kToy, 1.0, p, false) == Approx(2.8652e-4).epsilon(1e-3));
  CHECK_THROWS_AS(noise_threshold(PenaltyKind::kMCP, kToy, 1.0, p), std::invalid_argument);
}

TEST_CASE("generic thresholds") {
  CHECK(generic_noise_threshold(0.5, 2.0) == Approx(1.0));
  CHECK(improved_noise_threshold(0.5, 0.0, 2.0) == Approx(generic_noise_threshold(0.5, 2.0)));
  CHECK(improved_noise_threshold(0.5, 0.1, 2.0) < generic_noise_threshold(0.5, 2.0));
  CHECK(basis_pursuit_noise_constant(kToy) ==
        Approx(4.0 / (std::sqrt(3.0 * (2.0 / 3.0)) - std::sqrt(1.25))));
}

TEST_CASE("constant C") {
  CHECK(constant_c(kToy, 1.0, 0.0, 1.0) == 0.0);
  CHECK(constant_c(kToy, 1.0, 1.0, 1.0) == Approx(0.031336).epsilon(1e-4));
  CHECK(constant_c(kToy, 2.0, 1.0, 1.0) == Approx(4.0 * constant_c(kToy, 1.0, 1.0, 1.0)));
}

TEST_CASE("convergence alpha bound") {
  CHECK(convergence_alpha_bound(Matrix::identity(3), Vector{1, 0, 0}, 0.0) == Approx(2.0));
  CHECK(convergence_alpha_bound(Matrix(2, 3, {0.1, 0, 0, 0, 1, 0}), Vector{1, 0}, 1.0) == Approx(0.1));
  CHECK_THROWS_AS(convergence_alpha_bound(1.0, 0.0, 0.0), std::domain_error);
}

TEST_CASE("alpha relation") {
  CHECK(alpha_relation(kToy, 1.0, 1e6, 0.0, 1e9));
  CHECK_FALSE(alpha_relation(kToy, 1.0, 1.0, 0.0, 1e-9));
  // Left side (sqrt(1-d4) sqrt(3s) - sqrt(1+d3) sqrt(s)) / (sqrt(1-d4) + sqrt(1+d3)) = 0.68468.
  CHECK(alpha_relation(kToy, 1.0, 1.0, 1.0, 1.0));
  CHECK(alpha_relation(kToy, 1.0, 1.0, 1.0, 0.685));
  CHECK_FALSE(alpha_relation(kToy, 1.0, 1.0, 1.0, 0.684));
}

}  // TEST_SUITE
