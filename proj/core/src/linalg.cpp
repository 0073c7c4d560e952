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

#include "springback/linalg.hpp"

#include <algorithm>
#include <limits>
#include <cmath>
#include <numeric>
#include <string>

namespace springback {

namespace {

void require(bool ok, const char* what) {
  if (!ok) throw std::invalid_argument(what);
}

}  // namespace

Matrix::Matrix(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), entries_(rows * cols, fill) {}

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> entries)
    : rows_(rows), cols_(cols), entries_(std::move(entries)) {
  require(entries_.size() == rows * cols, "Matrix: entries length must equal rows * cols");
  require(all_finite(entries_), "Matrix: entries must be finite");
}

Matrix Matrix::identity(std::size_t n) {
  Matrix id(n, n);
  for (std::size_t i = 0; i < n; ++i) id(i, i) = 1.0;
  return id;
}

Matrix Matrix::diagonal(std::span<const double> diag) {
  Matrix d(diag.size(), diag.size());
  for (std::size_t i = 0; i < diag.size(); ++i) d(i, i) = diag[i];
  return d;
}

Matrix Matrix::transposed() const {
  Matrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

double dot(std::span<const double> a, std::span<const double> b) {
  require(a.size() == b.size(), "dot: length mismatch");
  return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

double norm2(std::span<const double> v) {
  // Scaled accumulation so huge or tiny entries do not overflow.
  double scale = norm_inf(v);
  if (scale == 0.0 || !std::isfinite(scale)) return scale;
  double acc = 0.0;
  for (double x : v) {
    const double r = x / scale;
    acc += r * r;
  }
  return scale * std::sqrt(acc);
}

double norm1(std::span<const double> v) {
  double acc = 0.0;
  for (double x : v) acc += std::abs(x);
  return acc;
}

double norm_inf(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

double distance2(std::span<const double> a, std::span<const double> b) {
  require(a.size() == b.size(), "distance2: length mismatch");
  Vector d(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) d[i] = a[i] - b[i];
  return norm2(d);
}

void axpy(double a, std::span<const double> x, std::span<double> y) {
  require(x.size() == y.size(), "axpy: length mismatch");
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += a * x[i];
}

bool all_finite(std::span<const double> v) {
  return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

Vector matvec(const Matrix& a, std::span<const double> x) {
  require(a.cols() == x.size(), "matvec: cols(A) must equal len(x)");
  Vector y(a.rows(), 0.0);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    const auto r = a.row(i);
    double acc = 0.0;
    for (std::size_t j = 0; j < r.size(); ++j) acc += r[j] * x[j];
    y[i] = acc;
  }
  return y;
}

Vector matvec_transposed(const Matrix& a, std::span<const double> y) {
  require(a.rows() == y.size(), "matvec_transposed: rows(A) must equal len(y)");
  Vector x(a.cols(), 0.0);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    const double yi = y[i];
    if (yi == 0.0) continue;
    const auto r = a.row(i);
    for (std::size_t j = 0; j < r.size(); ++j) x[j] += r[j] * yi;
  }
  return x;
}

Matrix gram(const Matrix& a) {
  const std::size_t n = a.cols();
  Matrix g(n, n);
  for (std::size_t k = 0; k < a.rows(); ++k) {
    const auto r = a.row(k);
    for (std::size_t i = 0; i < n; ++i) {
      const double ri = r[i];
      if (ri == 0.0) continue;
      auto gi = g.row(i);
      for (std::size_t j = i; j < n; ++j) gi[j] += ri * r[j];
    }
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < i; ++j) g(i, j) = g(j, i);
  return g;
}

Matrix outer_gram(const Matrix& a) {
  const std::size_t m = a.rows();
  Matrix g(m, m);
  for (std::size_t i = 0; i < m; ++i) {
    const auto ri = a.row(i);
    for (std::size_t j = i; j < m; ++j) {
      const auto rj = a.row(j);
      g(i, j) = g(j, i) = std::inner_product(ri.begin(), ri.end(), rj.begin(), 0.0);
    }
  }
  return g;
}

Cholesky::Cholesky(const Matrix& spd) : n_(spd.rows()), lower_(spd.entries().begin(), spd.entries().end()) {
  require(spd.rows() == spd.cols(), "Cholesky: matrix must be square");
  const std::size_t n = n_;
  auto at = [&](std::size_t i, std::size_t j) -> double& { return lower_[i * n + j]; };
  for (std::size_t j = 0; j < n; ++j) {
    double diag = at(j, j);
    for (std::size_t k = 0; k < j; ++k) diag -= at(j, k) * at(j, k);
    if (!(diag > 0.0) || !std::isfinite(diag))
      throw NumericError("Cholesky: matrix is not positive definite (pivot " + std::to_string(j) + ")");
    const double ljj = std::sqrt(diag);
    at(j, j) = ljj;
    for (std::size_t i = j + 1; i < n; ++i) {
      double s = at(i, j);
      const double* li = &lower_[i * n];
      const double* lj = &lower_[j * n];
      for (std::size_t k = 0; k < j; ++k) s -= li[k] * lj[k];
      at(i, j) = s / ljj;
    }
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) at(i, j) = 0.0;
}

void Cholesky::solve_in_place(std::span<double> x) const {
  require(x.size() == n_, "Cholesky::solve: rhs length mismatch");
  const std::size_t n = n_;
  for (std::size_t i = 0; i < n; ++i) {
    const double* li = &lower_[i * n];
    double s = x[i];
    for (std::size_t k = 0; k < i; ++k) s -= li[k] * x[k];
    x[i] = s / li[i];
  }
  for (std::size_t ii = n; ii-- > 0;) {
    double s = x[ii];
    for (std::size_t k = ii + 1; k < n; ++k) s -= lower_[k * n + ii] * x[k];
    x[ii] = s / lower_[ii * n + ii];
  }
}

Vector Cholesky::solve(std::span<const double> rhs) const {
  Vector x(rhs.begin(), rhs.end());
  solve_in_place(x);
  return x;
}

Vector solve_spd(const Matrix& m, std::span<const double> r) {
  require(m.rows() == m.cols(), "solve_spd: matrix must be square");
  require(r.size() == m.cols(), "solve_spd: rhs length mismatch");
  return Cholesky(m).solve(r);
}

Vector symmetric_eigenvalues(const Matrix& sym) {
  require(sym.rows() == sym.cols(), "symmetric_eigenvalues: matrix must be square");
  const std::size_t n = sym.rows();
  Matrix a = sym;
  const double total = [&] {
    double s = 0.0;
    for (double x : a.entries()) s += x * x;
    return s;
  }();
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) off += a(p, q) * a(p, q);
    if (off <= 1e-30 * total || off == 0.0) break;
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a(k, p);
          const double akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a(p, k);
          const double aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
      }
    }
  }
  Vector eig(n);
  for (std::size_t i = 0; i < n; ++i) eig[i] = a(i, i);
  std::sort(eig.begin(), eig.end());
  return eig;
}

SingularExtremes singular_extremes(const Matrix& a) {
  require(!a.empty(), "singular_extremes: empty matrix");
  require(norm_inf(a.entries()) > 0.0, "singular_extremes: zero matrix");
  const Matrix g = a.rows() < a.cols() ? outer_gram(a) : gram(a);
  const Vector eig = symmetric_eigenvalues(g);
  return {std::sqrt(std::max(eig.front(), 0.0)), std::sqrt(std::max(eig.back(), 0.0))};
}

Vector l2_ball_project(std::span<const double> v, double tau) {
  require(tau >= 0.0, "l2_ball_project: tau must be nonnegative");
  if (tau == 0.0) return Vector(v.size(), 0.0);
  const double nv = norm2(v);
  Vector out(v.begin(), v.end());
  if (nv <= tau) return out;
  const double scale = tau / nv;
  for (double& x : out) x *= scale;
  return out;
}

ShiftedGramSolver::ShiftedGramSolver(Matrix a, double rho, double zeta)
    : a_(std::move(a)), rho_(rho), zeta_(zeta) {
  require(rho > 0.0 && zeta > 0.0, "ShiftedGramSolver: rho and zeta must be positive");
  double frob2 = 0.0;
  for (double x : a_.entries()) frob2 += x * x;
  operator_scale_ = zeta_ + rho_ * frob2;

  if (a_.rows() < a_.cols()) {
    Matrix cap = outer_gram(a_);
    for (double& x : cap.entries()) x *= rho_;
    for (std::size_t i = 0; i < cap.rows(); ++i) cap(i, i) += zeta_;
    capacitance_.emplace(cap);

    // Probe touching both the row space and the null space of A.
    Vector ones(a_.rows());
    for (std::size_t i = 0; i < ones.size(); ++i) ones[i] = std::cos(static_cast<double>(i) + 1.0);
    Vector probe = matvec_transposed(a_, ones);
    for (std::size_t j = 0; j < probe.size(); ++j) probe[j] += std::sin(static_cast<double>(j) + 1.0);
    if (refined_solve(probe)) return;
    capacitance_.reset();
  }
  Matrix m = gram(a_);
  for (double& x : m.entries()) x *= rho_;
  for (std::size_t i = 0; i < m.rows(); ++i) m(i, i) += zeta_;
  dense_.emplace(m);
}

Vector ShiftedGramSolver::apply(std::span<const double> x) const {
  Vector out = matvec_transposed(a_, matvec(a_, x));
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = rho_ * out[i] + zeta_ * x[i];
  return out;
}

Vector ShiftedGramSolver::woodbury_solve(std::span<const double> r) const {
  Vector w = matvec(a_, r);
  capacitance_->solve_in_place(w);
  Vector x = matvec_transposed(a_, w);
  for (std::size_t j = 0; j < x.size(); ++j) x[j] = (r[j] - rho_ * x[j]) / zeta_;
  return x;
}

std::optional<Vector> ShiftedGramSolver::refined_solve(std::span<const double> r) const {
  const double rnorm = norm2(r);
  Vector x = woodbury_solve(r);
  double last = std::numeric_limits<double>::infinity();
  for (int step = 0; step < 8; ++step) {
    Vector res = apply(x);
    for (std::size_t j = 0; j < res.size(); ++j) res[j] = r[j] - res[j];
    const double rn = norm2(res);
    if (!std::isfinite(rn)) return std::nullopt;
    if (rn <= 1e-13 * (rnorm + operator_scale_ * norm2(x))) return x;
    if (rn > 0.5 * last) return std::nullopt;
    last = rn;
    const Vector dx = woodbury_solve(res);
    axpy(1.0, dx, x);
  }
  return std::nullopt;
}

Vector ShiftedGramSolver::solve(std::span<const double> r) const {
  require(r.size() == a_.cols(), "ShiftedGramSolver::solve: rhs length mismatch");
  if (dense_) return dense_->solve(r);
  if (auto x = refined_solve(r)) return std::move(*x);
  // Probe passed but this rhs did not refine; best effort Woodbury result.
  return woodbury_solve(r);
}

}  // namespace springback
