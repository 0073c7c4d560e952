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

// Small dense kernels: row-major matrices, vector helpers, Cholesky
// factorization, symmetric eigenvalues and the l2-ball projection.

#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

namespace springback {

using Vector = std::vector<double>;

/// Thrown when a factorization or iteration produces a non-usable result
/// (loss of positive definiteness, non-finite values).
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Dense row-major matrix of finite doubles.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0);
  /// Takes ownership of `entries` (row-major, rows * cols values).
  Matrix(std::size_t rows, std::size_t cols, std::vector<double> entries);

  static Matrix identity(std::size_t n);
  static Matrix diagonal(std::span<const double> diag);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool empty() const noexcept { return entries_.empty(); }

  double& operator()(std::size_t i, std::size_t j) noexcept { return entries_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const noexcept {
    return entries_[i * cols_ + j];
  }

  std::span<double> row(std::size_t i) noexcept { return {entries_.data() + i * cols_, cols_}; }
  std::span<const double> row(std::size_t i) const noexcept {
    return {entries_.data() + i * cols_, cols_};
  }

  std::span<const double> entries() const noexcept { return entries_; }
  std::span<double> entries() noexcept { return entries_; }

  Matrix transposed() const;

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> entries_;
};

// Vector helpers.
double dot(std::span<const double> a, std::span<const double> b);
double norm2(std::span<const double> v);
double norm1(std::span<const double> v);
double norm_inf(std::span<const double> v);
double distance2(std::span<const double> a, std::span<const double> b);
/// y += a * x
void axpy(double a, std::span<const double> x, std::span<double> y);
bool all_finite(std::span<const double> v);

/// A * x. Throws std::invalid_argument on a dimension mismatch.
Vector matvec(const Matrix& a, std::span<const double> x);
/// A^T * y.
Vector matvec_transposed(const Matrix& a, std::span<const double> y);
/// A^T A (cols x cols).
Matrix gram(const Matrix& a);
/// A A^T (rows x rows).
Matrix outer_gram(const Matrix& a);

/// Lower-triangular Cholesky factor of a symmetric positive definite matrix.
/// Built once, then reused for any number of right-hand sides.
class Cholesky {
 public:
  explicit Cholesky(const Matrix& spd);

  std::size_t size() const noexcept { return n_; }
  Vector solve(std::span<const double> rhs) const;
  void solve_in_place(std::span<double> rhs) const;

 private:
  std::size_t n_ = 0;
  std::vector<double> lower_;  // packed row-major n x n, upper part unused
};

/// Solves M w = r for symmetric positive definite M.
Vector solve_spd(const Matrix& m, std::span<const double> r);

/// Eigenvalues of a symmetric matrix in ascending order (cyclic Jacobi).
Vector symmetric_eigenvalues(const Matrix& sym);

struct SingularExtremes {
  double sigma_min = 0.0;
  double sigma_max = 0.0;

  double condition() const noexcept { return sigma_max / sigma_min; }
};

/// Smallest and largest of the min(rows, cols) singular values, from the
/// eigenvalues of the smaller Gram matrix.
SingularExtremes singular_extremes(const Matrix& a);

/// Euclidean projection onto {v : ||v||_2 <= tau}; tau == 0 gives zero.
Vector l2_ball_project(std::span<const double> v, double tau);

/// Solves (rho A^T A + zeta I) x = r for a fixed A.
///
/// For wide A the m x m capacitance matrix (zeta I + rho A A^T) is factored
/// and the inverse applied through the Woodbury identity, followed by
/// iterative refinement against the exact operator. A probe solve at
/// construction checks that refinement converges; badly conditioned A with
/// a tiny zeta falls back to a dense n x n Cholesky factor instead.
class ShiftedGramSolver {
 public:
  ShiftedGramSolver(Matrix a, double rho, double zeta);

  Vector solve(std::span<const double> r) const;
  /// (rho A^T A + zeta I) x
  Vector apply(std::span<const double> x) const;

  bool uses_woodbury() const noexcept { return !dense_.has_value(); }
  const Matrix& matrix() const noexcept { return a_; }

 private:
  Vector woodbury_solve(std::span<const double> r) const;
  std::optional<Vector> refined_solve(std::span<const double> r) const;

  Matrix a_;
  double rho_;
  double zeta_;
  double operator_scale_;
  std::optional<Cholesky> capacitance_;
  std::optional<Cholesky> dense_;
};

}  // namespace springback
