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

#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "idlab/numerics/matrix.hpp"
#include "idlab/numerics/random.hpp"

namespace idlab {

struct QrFactorization {
  Matrix q;  // m×m orthogonal
  Matrix r;  // m×n upper triangular
};

// Householder QR of an m×n matrix with m >= n.
QrFactorization householder_qr(const Matrix& a);

// Rank from Householder QR with column pivoting; a diagonal entry counts when
// it exceeds rel_tol times the largest one.
std::size_t numerical_rank(const Matrix& a, double rel_tol = 1e-10);

// LU with partial pivoting. Throws rank-error when a pivot vanishes.
Matrix solve(const Matrix& a, const Matrix& b);
Matrix inverse(const Matrix& a);
double determinant(const Matrix& a);

// Minimizer of ‖a·x − b‖₂ for full-column-rank a, via Householder QR.
Vector least_squares(const Matrix& a, std::span<const double> b);

// Two orthonormal vectors orthogonal to every column of `columns` (m×k).
// Requires m >= k + 2 and linearly independent columns.
std::pair<Vector, Vector> null_space_pair(const Matrix& columns);

// i.i.d. N(mean, variance) entries.
Matrix gaussian_matrix(std::size_t rows, std::size_t cols, double mean, double variance,
                       RandomStream& rng);

// Haar-distributed element of O(n): QR of a standard Gaussian matrix with the
// columns of Q rescaled by the signs of diag(R).
Matrix haar_orthogonal(std::size_t n, RandomStream& rng);

}  // namespace idlab
