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

#include "idlab/numerics/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "idlab/error.hpp"

namespace idlab {

Matrix::Matrix(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), values_(rows * cols, fill) {}

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> values)
    : rows_(rows), cols_(cols), values_(std::move(values)) {
  require(values_.size() == rows * cols, ErrorKind::kInvalidArgument,
          "matrix value count " + std::to_string(values_.size()) + " != " +
              std::to_string(rows) + "x" + std::to_string(cols));
}

Matrix::Matrix(std::initializer_list<std::initializer_list<double>> rows)
    : rows_(rows.size()), cols_(rows.size() == 0 ? 0 : rows.begin()->size()) {
  values_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    require(r.size() == cols_, ErrorKind::kInvalidArgument, "ragged matrix literal");
    values_.insert(values_.end(), r.begin(), r.end());
  }
}

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Matrix Matrix::column(std::span<const double> values) {
  return Matrix(values.size(), 1, std::vector<double>(values.begin(), values.end()));
}

Matrix Matrix::row_vector(std::span<const double> values) {
  return Matrix(1, values.size(), std::vector<double>(values.begin(), values.end()));
}

Vector Matrix::column_copy(std::size_t c) const {
  Vector out(rows_);
  for (std::size_t r = 0; r < rows_; ++r) out[r] = (*this)(r, c);
  return out;
}

void Matrix::set_column(std::size_t c, std::span<const double> values) {
  require(values.size() == rows_, ErrorKind::kInvalidArgument, "set_column length mismatch");
  for (std::size_t r = 0; r < rows_; ++r) (*this)(r, c) = values[r];
}

Matrix Matrix::transposed() const {
  Matrix t(cols_, rows_);
  constexpr std::size_t kBlock = 32;
  for (std::size_t r0 = 0; r0 < rows_; r0 += kBlock) {
    for (std::size_t c0 = 0; c0 < cols_; c0 += kBlock) {
      const std::size_t r1 = std::min(rows_, r0 + kBlock);
      const std::size_t c1 = std::min(cols_, c0 + kBlock);
      for (std::size_t r = r0; r < r1; ++r)
        for (std::size_t c = c0; c < c1; ++c) t.values_[c * rows_ + r] = values_[r * cols_ + c];
    }
  }
  return t;
}

void Matrix::fill(double value) { std::fill(values_.begin(), values_.end(), value); }

Matrix& Matrix::operator+=(const Matrix& other) {
  require(rows_ == other.rows_ && cols_ == other.cols_, ErrorKind::kInvalidArgument,
          "shape mismatch in +=");
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += other.values_[i];
  return *this;
}

Matrix& Matrix::operator-=(const Matrix& other) {
  require(rows_ == other.rows_ && cols_ == other.cols_, ErrorKind::kInvalidArgument,
          "shape mismatch in -=");
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] -= other.values_[i];
  return *this;
}

Matrix& Matrix::operator*=(double scale) {
  for (double& v : values_) v *= scale;
  return *this;
}

Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
Matrix operator*(Matrix a, double scale) { return a *= scale; }
Matrix operator*(double scale, Matrix a) { return a *= scale; }

namespace {

// Eight doubles; maps onto one AVX-512 register when available.
typedef double Lane __attribute__((vector_size(64), aligned(8), may_alias));

constexpr std::size_t kRowTile = 8;
constexpr std::size_t kColTile = 16;

inline Lane load_lane(const double* p) { return *reinterpret_cast<const Lane*>(p); }

inline void store_lane(double* p, Lane v) { *reinterpret_cast<Lane*>(p) = v; }

// Register tile: R rows of a against a 16-wide panel of b. The inner index
// runs strictly upwards for every output entry.
template <std::size_t R>
inline void gemm_tile(std::size_t k, const double* __restrict a, std::size_t lda,
                      const double* __restrict b, std::size_t ldb, double* __restrict c,
                      std::size_t ldc, bool accumulate) {
  Lane lo[R], hi[R];
  for (std::size_t r = 0; r < R; ++r) lo[r] = hi[r] = Lane{};
  for (std::size_t p = 0; p < k; ++p) {
    const Lane b0 = load_lane(b + p * ldb);
    const Lane b1 = load_lane(b + p * ldb + 8);
    for (std::size_t r = 0; r < R; ++r) {
      const double av = a[r * lda + p];
      lo[r] += av * b0;
      hi[r] += av * b1;
    }
  }
  for (std::size_t r = 0; r < R; ++r) {
    double* crow = c + r * ldc;
    if (accumulate) {
      store_lane(crow, load_lane(crow) + lo[r]);
      store_lane(crow + 8, load_lane(crow + 8) + hi[r]);
    } else {
      store_lane(crow, lo[r]);
      store_lane(crow + 8, hi[r]);
    }
  }
}

template <std::size_t R>
inline void gemm_tile_narrow(std::size_t k, std::size_t width, const double* a, std::size_t lda,
                             const double* b, std::size_t ldb, double* c, std::size_t ldc,
                             bool accumulate) {
  double acc[R][kColTile] = {};
  for (std::size_t p = 0; p < k; ++p) {
    const double* brow = b + p * ldb;
    for (std::size_t r = 0; r < R; ++r) {
      const double av = a[r * lda + p];
      for (std::size_t j = 0; j < width; ++j) acc[r][j] += av * brow[j];
    }
  }
  for (std::size_t r = 0; r < R; ++r) {
    double* crow = c + r * ldc;
    for (std::size_t j = 0; j < width; ++j) crow[j] = accumulate ? crow[j] + acc[r][j] : acc[r][j];
  }
}

}  // namespace

void gemm(std::size_t m, std::size_t n, std::size_t k, const double* a, std::size_t lda,
          const double* b, std::size_t ldb, double* c, std::size_t ldc, bool accumulate) {
  if (m == 0 || n == 0) return;
  if (k == 0) {
    if (!accumulate)
      for (std::size_t i = 0; i < m; ++i) std::fill(c + i * ldc, c + i * ldc + n, 0.0);
    return;
  }
  for (std::size_t j0 = 0; j0 < n; j0 += kColTile) {
    const std::size_t width = std::min(kColTile, n - j0);
    std::size_t i0 = 0;
    if (width == kColTile) {
      for (; i0 + kRowTile <= m; i0 += kRowTile)
        gemm_tile<kRowTile>(k, a + i0 * lda, lda, b + j0, ldb, c + i0 * ldc + j0, ldc,
                            accumulate);
      for (; i0 < m; ++i0)
        gemm_tile<1>(k, a + i0 * lda, lda, b + j0, ldb, c + i0 * ldc + j0, ldc, accumulate);
    } else {
      for (; i0 + kRowTile <= m; i0 += kRowTile)
        gemm_tile_narrow<kRowTile>(k, width, a + i0 * lda, lda, b + j0, ldb, c + i0 * ldc + j0,
                                   ldc, accumulate);
      for (; i0 < m; ++i0)
        gemm_tile_narrow<1>(k, width, a + i0 * lda, lda, b + j0, ldb, c + i0 * ldc + j0, ldc,
                            accumulate);
    }
  }
}

void matmul_into(const Matrix& a, const Matrix& b, Matrix& out, bool accumulate) {
  require(a.cols() == b.rows(), ErrorKind::kInvalidArgument,
          "matmul inner dimension mismatch: " + std::to_string(a.cols()) + " vs " +
              std::to_string(b.rows()));
  require(out.rows() == a.rows() && out.cols() == b.cols(), ErrorKind::kInvalidArgument,
          "matmul output shape mismatch");
  gemm(a.rows(), b.cols(), a.cols(), a.values().data(), a.cols(), b.values().data(), b.cols(),
       out.values().data(), out.cols(), accumulate);
}

Matrix matmul(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows(), b.cols());
  matmul_into(a, b, out, false);
  return out;
}

Matrix matmul_at_b(const Matrix& a, const Matrix& b) { return matmul(a.transposed(), b); }

Matrix matmul_a_bt(const Matrix& a, const Matrix& b) { return matmul(a, b.transposed()); }

Vector matvec(const Matrix& a, std::span<const double> x) {
  require(a.cols() == x.size(), ErrorKind::kInvalidArgument, "matvec dimension mismatch");
  Vector y(a.rows());
  for (std::size_t r = 0; r < a.rows(); ++r) y[r] = dot(a.row(r), x);
  return y;
}

double dot(std::span<const double> a, std::span<const double> b) {
  require(a.size() == b.size(), ErrorKind::kInvalidArgument, "dot length mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm2(std::span<const double> a) { return std::sqrt(dot(a, a)); }

double max_abs(std::span<const double> a) {
  double m = 0.0;
  for (double v : a) m = std::max(m, std::abs(v));
  return m;
}

double max_abs(const Matrix& a) { return max_abs(a.values()); }

double max_abs_diff(std::span<const double> a, std::span<const double> b) {
  require(a.size() == b.size(), ErrorKind::kInvalidArgument, "max_abs_diff length mismatch");
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

double max_abs_diff(const Matrix& a, const Matrix& b) {
  require(a.rows() == b.rows() && a.cols() == b.cols(), ErrorKind::kInvalidArgument,
          "max_abs_diff shape mismatch");
  return max_abs_diff(a.values(), b.values());
}

double frobenius_norm(const Matrix& a) { return norm2(a.values()); }

Matrix abs(const Matrix& a) {
  Matrix out = a;
  for (double& v : out.values()) v = std::abs(v);
  return out;
}

bool all_finite(const Matrix& a) {
  return std::all_of(a.values().begin(), a.values().end(),
                     [](double v) { return std::isfinite(v); });
}

Matrix block_diagonal(const Matrix& upper, const Matrix& lower) {
  Matrix out(upper.rows() + lower.rows(), upper.cols() + lower.cols());
  for (std::size_t r = 0; r < upper.rows(); ++r)
    for (std::size_t c = 0; c < upper.cols(); ++c) out(r, c) = upper(r, c);
  for (std::size_t r = 0; r < lower.rows(); ++r)
    for (std::size_t c = 0; c < lower.cols(); ++c)
      out(upper.rows() + r, upper.cols() + c) = lower(r, c);
  return out;
}

}  // namespace idlab
