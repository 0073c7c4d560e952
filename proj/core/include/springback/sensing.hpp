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

// Random sensing matrices, sparse ground truths and SNR-calibrated noise.
// Everything is a pure function of its spec and seed.

#include <cstddef>
#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

#include "springback/linalg.hpp"

namespace springback {

/// 64-bit engine used everywhere randomness is needed.
using Rng = std::mt19937_64;

/// Mixes a parent seed with stream identifiers (splitmix64 finalizer), so
/// that child streams for different trials or roles are independent of the
/// order in which they are requested.
std::uint64_t derive_seed(std::uint64_t parent, std::uint64_t stream, std::uint64_t substream = 0);

enum class EnsembleKind { kGaussian, kPartialDct, kOversampledDct };

/// How the cosine ensembles draw their random frequencies.
///  - kSharedFrequencies: one chi ~ U[0,1]^m shared by all columns,
///    A_j = cos(2 pi j chi / F) / sqrt(m) (F = 1 for the partial DCT). This
///    is the randomly (oversampled) partial DCT whose coherence grows with F.
///  - kAsPrinted: an independent chi_j per column, partial DCT
///    cos(2 j pi chi_j), oversampled cos(2 j chi_j / F) without pi.
enum class DctConstruction { kSharedFrequencies, kAsPrinted };

std::string_view to_string(EnsembleKind kind);
EnsembleKind parse_ensemble_kind(std::string_view name);
std::string_view to_string(DctConstruction c);
DctConstruction parse_dct_construction(std::string_view name);

struct EnsembleSpec {
  EnsembleKind kind = EnsembleKind::kGaussian;
  std::size_t m = 64;
  std::size_t n = 160;
  int refinement = 1;  // F, oversampled DCT only
  std::uint64_t seed = 0;
  DctConstruction construction = DctConstruction::kSharedFrequencies;

  friend bool operator==(const EnsembleSpec&, const EnsembleSpec&) = default;
};

struct SignalSpec {
  std::size_t n = 160;
  std::size_t sparsity = 10;
  std::size_t min_separation = 0;  // L; 0 or 1 means unconstrained
  std::uint64_t seed = 0;

  friend bool operator==(const SignalSpec&, const SignalSpec&) = default;
};

Matrix gen_matrix(const EnsembleSpec& spec);

/// Sorted support of size `sparsity`. With min_separation L >= 2 every pair
/// of indices is at least L apart; throws std::invalid_argument when
/// (s - 1) L + 1 > n.
std::vector<std::size_t> gen_support(const SignalSpec& spec);

/// Standard normal entries on gen_support(spec), zero elsewhere.
Vector gen_signal(const SignalSpec& spec);

struct NoisyMeasurement {
  Vector noisy;
  double tau = 0.0;  // realized ||e||_2
};

/// Adds white Gaussian noise whose per-sample variance is the measured
/// signal power ||clean||^2 / m divided by 10^(snr_db / 10). An infinite
/// SNR adds nothing.
NoisyMeasurement add_noise_snr(std::span<const double> clean, double snr_db, std::uint64_t seed);

/// max_{i != j} |<A_i, A_j>| / (||A_i|| ||A_j||)
double mutual_coherence(const Matrix& a);

}  // namespace springback
