/* Copyright 2026 The Identity Lab Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#include "idlab/numerics/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "idlab/error.hpp"

namespace idlab {

namespace {

// Applies the reflector I - 2 v vᵀ (v unit, supported on rows [start, m)) to
// the columns [col_begin, n) of a from the left.
void reflect_left(Matrix& a, std::span<const double> v, std::size_t start,
                  std::size_t col_begin) {
  for (std::size_t c = col_begin; c < a.cols(); ++c) {
    double s = 0.0;
    for (std::size_t r = start; r < a.rows(); ++r) s += v[r - start] * a(r, c);
    s *= 2.0;
    for (std::size_t r = start; r < a.rows(); ++r) a(r, c) -= s * v[r - start];
  }
}

// Builds the unit Householder vector that maps x onto -sign(x0)‖x‖e₀.
// Returns false for an all-zero x (no reflection needed).
bool householder_vector(std::span<const double> x, Vector& v) {
  const double norm = norm2(x);
  v.assign(x.begin(), x.end());
  if (norm == 0.0) return false;
  v[0] += (x[0] >= 0.0 ? norm : -norm);
  const double vnorm = norm2(v);
  for (double& e : v) e /= vnorm;
  return true;
}

struct LuFactorization {
  Matrix lu;
  std::vector<std::size_t> pivots;
  int sign = 1;
};

LuFactorization lu_factor(const Matrix& a) {
  require(a.rows() == a.cols(), ErrorKind::kInvalidArgument, "LU needs a square matrix");
  const std::size_t n = a.rows();
  LuFactorization f{a, std::vector<std::size_t>(n), 1};
  std::iota(f.pivots.begin(), f.pivots.end(), std::size_t{0});
  const double scale = std::max(max_abs(a), 1e-300);
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t p = k;
    for (std::size_t r = k + 1; r < n; ++r)
      if (std::abs(f.lu(r, k)) > std::abs(f.lu(p, k))) p = r;
    if (std::abs(f.lu(p, k)) <= 1e-13 * scale)
      fail(ErrorKind::kRankError, "matrix is singular to working precision");
    if (p != k) {
      for (std::size_t c = 0; c < n; ++c) std::swap(f.lu(k, c), f.lu(p, c));
      std::swap(f.pivots[k], f.pivots[p]);
      f.sign = -f.sign;
    }
    for (std::size_t r = k + 1; r < n; ++r) {
      const double factor = f.lu(r, k) / f.lu(k, k);
      f.lu(r, k) = factor;
      for (std::size_t c = k + 1; c < n; ++c) f.lu(r, c) -= factor * f.lu(k, c);
    }
  }
  return f;
}

}  // namespace

QrFactorization householder_qr(const Matrix& a) {
  const std::size_t m = a.rows();
  const std::size_t n = a.cols();
  require(m >= n, ErrorKind::kInvalidArgument, "householder_qr needs rows >= cols");
  Matrix r = a;
  Matrix qt = Matrix::identity(m);
  Vector x;
  Vector v;
  const std::size_t steps = std::min(n, m - 1);
  for (std::size_t k = 0; k < steps; ++k) {
    x.resize(m - k);
    for (std::size_t i = k; i < m; ++i) x[i - k] = r(i, k);
    if (!householder_vector(x, v)) continue;
    reflect_left(r, v, k, k);
    reflect_left(qt, v, k, 0);
    for (std::size_t i = k + 1; i < m; ++i) r(i, k) = 0.0;
  }
  return {qt.transposed(), std::move(r)};
}

std::size_t numerical_rank(const Matrix& a, double rel_tol) {
  Matrix work = a.rows() >= a.cols() ? a : a.transposed();
  const std::size_t m = work.rows();
  const std::size_t n = work.cols();
  std::vector<double> col_norm(n);
  Vector x;
  Vector v;
  double first = 0.0;
  std::size_t rank = 0;
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t c = k; c < n; ++c) {
      double s = 0.0;
      for (std::size_t r = k; r < m; ++r) s += work(r, c) * work(r, c);
      col_norm[c] = s;
    }
    std::size_t best = k;
    for (std::size_t c = k + 1; c < n; ++c)
      if (col_norm[c] > col_norm[best]) best = c;
    if (best != k)
      for (std::size_t r = 0; r < m; ++r) std::swap(work(r, k), work(r, best));
    const double diag = std::sqrt(col_norm[best]);
    if (k == 0) first = diag;
    if (first == 0.0 || diag <= rel_tol * first) break;
    ++rank;
    if (k + 1 >= m) break;
    x.resize(m - k);
    for (std::size_t i = k; i < m; ++i) x[i - k] = work(i, k);
    if (householder_vector(x, v)) reflect_left(work, v, k, k);
  }
  return rank;
}

Matrix solve(const Matrix& a, const Matrix& b) {
  require(a.rows() == b.rows(), ErrorKind::kInvalidArgument, "solve dimension mismatch");
  const LuFactorization f = lu_factor(a);
  const std::size_t n = a.rows();
  Matrix x(n, b.cols());
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < b.cols(); ++c) x(r, c) = b(f.pivots[r], c);
  for (std::size_t c = 0; c < b.cols(); ++c) {
    for (std::size_t r = 0; r < n; ++r) {
      double s = x(r, c);
      for (std::size_t k = 0; k < r; ++k) s -= f.lu(r, k) * x(k, c);
      x(r, c) = s;
    }
    for (std::size_t r = n; r-- > 0;) {
      double s = x(r, c);
      for (std::size_t k = r + 1; k < n; ++k) s -= f.lu(r, k) * x(k, c);
      x(r, c) = s / f.lu(r, r);
    }
  }
  return x;
}

Matrix inverse(const Matrix& a) { return solve(a, Matrix::identity(a.rows())); }

double determinant(const Matrix& a) {
  LuFactorization f;
  try {
    f = lu_factor(a);
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::kRankError) return 0.0;
    throw;
  }
  double det = f.sign;
  for (std::size_t i = 0; i < a.rows(); ++i) det *= f.lu(i, i);
  return det;
}

Vector least_squares(const Matrix& a, std::span<const double> b) {
  require(a.rows() == b.size(), ErrorKind::kInvalidArgument, "least_squares length mismatch");
  require(a.rows() >= a.cols(), ErrorKind::kRankError, "underdetermined least-squares system");
  require(numerical_rank(a) == a.cols(), ErrorKind::kRankError,
          "least-squares design matrix is rank deficient");
  const QrFactorization qr = householder_qr(a);
  const std::size_t n = a.cols();
  Vector qtb(n, 0.0);
  for (std::size_t c = 0; c < n; ++c) {
    double s = 0.0;
    for (std::size_t r = 0; r < a.rows(); ++r) s += qr.q(r, c) * b[r];
    qtb[c] = s;
  }
  Vector x(n);
  for (std::size_t r = n; r-- > 0;) {
    double s = qtb[r];
    for (std::size_t k = r + 1; k < n; ++k) s -= qr.r(r, k) * x[k];
    x[r] = s / qr.r(r, r);
  }
  return x;
}

std::pair<Vector, Vector> null_space_pair(const Matrix& columns) {
  const std::size_t m = columns.rows();
  const std::size_t k = columns.cols();
  require(m >= k + 2, ErrorKind::kComplementTooSmall,
          "orthogonal complement of " + std::to_string(k) + " columns in R^" +
              std::to_string(m) + " has dimension < 2");
  require(numerical_rank(columns) == k, ErrorKind::kRankError,
          "input columns are linearly dependent");
  const QrFactorization qr = householder_qr(columns);
  return {qr.q.column_copy(k), qr.q.column_copy(k + 1)};
}

Matrix gaussian_matrix(std::size_t rows, std::size_t cols, double mean, double variance,
                       RandomStream& rng) {
  require(variance >= 0.0, ErrorKind::kInvalidArgument, "variance must be nonnegative");
  Matrix out(rows, cols, mean);
  if (variance == 0.0) return out;
  const double stddev = std::sqrt(variance);
  for (double& v : out.values()) v = mean + stddev * rng.normal();
  return out;
}

Matrix haar_orthogonal(std::size_t n, RandomStream& rng) {
  require(n >= 1, ErrorKind::kInvalidArgument, "haar_orthogonal needs n >= 1");
  const Matrix g = gaussian_matrix(n, n, 0.0, 1.0, rng);
  QrFactorization qr = householder_qr(g);
  for (std::size_t c = 0; c < n; ++c) {
    if (qr.r(c, c) < 0.0)
      for (std::size_t r = 0; r < n; ++r) qr.q(r, c) = -qr.q(r, c);
  }
  return std::move(qr.q);
}

}  // namespace idlab
