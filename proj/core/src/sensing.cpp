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

#include "springback/sensing.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>
#include <string>

namespace springback {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Uniform s-subset of {0, ..., n-1}, sorted (partial Fisher-Yates).
std::vector<std::size_t> random_subset(std::size_t n, std::size_t s, Rng& rng) {
  std::vector<std::size_t> pool(n);
  std::iota(pool.begin(), pool.end(), std::size_t{0});
  for (std::size_t k = 0; k < s; ++k) {
    std::uniform_int_distribution<std::size_t> pick(k, n - 1);
    std::swap(pool[k], pool[pick(rng)]);
  }
  pool.resize(s);
  std::sort(pool.begin(), pool.end());
  return pool;
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t parent, std::uint64_t stream, std::uint64_t substream) {
  return splitmix64(splitmix64(splitmix64(parent) ^ stream) ^ (substream * 0xd1b54a32d192ed03ULL));
}

std::string_view to_string(EnsembleKind kind) {
  switch (kind) {
    case EnsembleKind::kGaussian: return "gaussian";
    case EnsembleKind::kPartialDct: return "partial_dct";
    case EnsembleKind::kOversampledDct: return "oversampled_dct";
  }
  return "unknown";
}

EnsembleKind parse_ensemble_kind(std::string_view name) {
  if (name == "gaussian") return EnsembleKind::kGaussian;
  if (name == "partial_dct" || name == "dct") return EnsembleKind::kPartialDct;
  if (name == "oversampled_dct") return EnsembleKind::kOversampledDct;
  throw std::invalid_argument("unknown ensemble kind '" + std::string(name) + "'");
}

std::string_view to_string(DctConstruction c) {
  return c == DctConstruction::kSharedFrequencies ? "shared" : "as_printed";
}

DctConstruction parse_dct_construction(std::string_view name) {
  if (name == "shared") return DctConstruction::kSharedFrequencies;
  if (name == "as_printed") return DctConstruction::kAsPrinted;
  throw std::invalid_argument("unknown DCT construction '" + std::string(name) + "'");
}

Matrix gen_matrix(const EnsembleSpec& spec) {
  if (spec.m == 0 || spec.n == 0) throw std::invalid_argument("gen_matrix: m and n must be positive");
  if (spec.refinement < 1) throw std::invalid_argument("gen_matrix: refinement must be >= 1");
  const std::size_t m = spec.m;
  const std::size_t n = spec.n;
  const double scale = 1.0 / std::sqrt(static_cast<double>(m));
  Matrix a(m, n);
  Rng rng(derive_seed(spec.seed, 0x6d6174));

  if (spec.kind == EnsembleKind::kGaussian) {
    std::normal_distribution<double> normal(0.0, scale);
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t i = 0; i < m; ++i) a(i, j) = normal(rng);
    return a;
  }

  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  const bool oversampled = spec.kind == EnsembleKind::kOversampledDct;
  const double f = oversampled ? static_cast<double>(spec.refinement) : 1.0;
  constexpr double two_pi = 2.0 * std::numbers::pi;

  if (spec.construction == DctConstruction::kSharedFrequencies) {
    std::vector<double> chi(m);
    for (double& c : chi) c = uniform(rng);
    for (std::size_t i = 0; i < m; ++i) {
      auto row = a.row(i);
      for (std::size_t j = 0; j < n; ++j)
        row[j] = scale * std::cos(two_pi * static_cast<double>(j + 1) * chi[i] / f);
    }
    return a;
  }

  for (std::size_t j = 0; j < n; ++j) {
    const double idx = static_cast<double>(j + 1);
    for (std::size_t i = 0; i < m; ++i) {
      const double chi = uniform(rng);
      const double arg = oversampled ? 2.0 * idx * chi / f : two_pi * idx * chi;
      a(i, j) = scale * std::cos(arg);
    }
  }
  return a;
}

std::vector<std::size_t> gen_support(const SignalSpec& spec) {
  const std::size_t n = spec.n;
  const std::size_t s = spec.sparsity;
  if (s > n) throw std::invalid_argument("gen_support: sparsity exceeds dimension");
  if (s == 0) return {};
  Rng rng(derive_seed(spec.seed, 0x737570));
  const std::size_t l = spec.min_separation;
  if (l <= 1) return random_subset(n, s, rng);

  // Gap allocation: draw s of the n - (s-1)(L-1) free slots, then spread
  // consecutive picks by L-1.
  const std::size_t spread = (s - 1) * (l - 1);
  if (spread + s > n)
    throw std::invalid_argument("gen_support: " + std::to_string(s) + " indices with separation " +
                                std::to_string(l) + " do not fit in n = " + std::to_string(n));
  auto picks = random_subset(n - spread, s, rng);
  for (std::size_t k = 0; k < s; ++k) picks[k] += k * (l - 1);
  return picks;
}

Vector gen_signal(const SignalSpec& spec) {
  const auto support = gen_support(spec);
  Vector x(spec.n, 0.0);
  Rng rng(derive_seed(spec.seed, 0x76616c));
  std::normal_distribution<double> normal(0.0, 1.0);
  for (std::size_t idx : support) {
    double v = 0.0;
    while (v == 0.0) v = normal(rng);
    x[idx] = v;
  }
  return x;
}

NoisyMeasurement add_noise_snr(std::span<const double> clean, double snr_db, std::uint64_t seed) {
  if (clean.empty()) throw std::invalid_argument("add_noise_snr: empty signal");
  const double power = dot(clean, clean) / static_cast<double>(clean.size());
  if (!(power > 0.0)) throw std::invalid_argument("add_noise_snr: zero signal has no defined SNR");
  NoisyMeasurement out{Vector(clean.begin(), clean.end()), 0.0};
  if (std::isinf(snr_db) && snr_db > 0.0) return out;

  const double sigma = std::sqrt(power / std::pow(10.0, snr_db / 10.0));
  Rng rng(derive_seed(seed, 0x6e6f69));
  std::normal_distribution<double> normal(0.0, sigma);
  Vector e(clean.size());
  for (double& v : e) v = normal(rng);
  for (std::size_t i = 0; i < e.size(); ++i) out.noisy[i] += e[i];
  out.tau = norm2(e);
  return out;
}

double mutual_coherence(const Matrix& a) {
  const Matrix g = gram(a);
  double mu = 0.0;
  for (std::size_t i = 0; i < g.rows(); ++i)
    for (std::size_t j = i + 1; j < g.cols(); ++j) {
      const double denom = std::sqrt(g(i, i) * g(j, j));
      if (denom > 0.0) mu = std::max(mu, std::abs(g(i, j)) / denom);
    }
  return mu;
}

}  // namespace springback
