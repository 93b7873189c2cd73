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

#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include "idlab/error.hpp"
#include "idlab/numerics/linalg.hpp"
#include "idlab/numerics/matrix.hpp"
#include "idlab/numerics/random.hpp"

namespace idlab {
namespace {

Matrix random_matrix(std::size_t r, std::size_t c, std::uint64_t seed) {
  RandomStream rng(seed);
  return gaussian_matrix(r, c, 0.0, 1.0, rng);
}

// Textbook triple loop used as an oracle for the tiled kernel.
Matrix naive_matmul(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < b.cols(); ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < a.cols(); ++k) s += a(i, k) * b(k, j);
      out(i, j) = s;
    }
  return out;
}

TEST(MatrixTest, MatmulMatchesNaiveLoopBitwise) {
  for (auto [m, n, k] : {std::tuple{1, 1, 1}, {3, 17, 5}, {37, 41, 29}, {64, 64, 64}, {5, 300, 7}}) {
    const Matrix a = random_matrix(m, k, 1), b = random_matrix(k, n, 2);
    EXPECT_EQ(matmul(a, b), naive_matmul(a, b)) << m << "x" << n << "x" << k;
  }
}

TEST(MatrixTest, AccumulatingGemmAddsProduct) {
  const Matrix a = random_matrix(9, 4, 3), b = random_matrix(4, 19, 4);
  Matrix out = random_matrix(9, 19, 5);
  const Matrix start = out;
  matmul_into(a, b, out, true);
  EXPECT_LE(max_abs_diff(out, start + naive_matmul(a, b)), 1e-13);
}

TEST(MatrixTest, TransposedProducts) {
  const Matrix a = random_matrix(6, 4, 6), b = random_matrix(6, 5, 7), c = random_matrix(3, 4, 8);
  EXPECT_EQ(matmul_at_b(a, b), naive_matmul(a.transposed(), b));
  EXPECT_EQ(matmul_a_bt(a, c), naive_matmul(a, c.transposed()));
}

TEST(MatrixTest, ShapeMismatchThrows) {
  EXPECT_THROW(matmul(Matrix(2, 3), Matrix(2, 3)), Error);
  EXPECT_THROW(Matrix(2, 2, Vector(3)), Error);
}

TEST(MatrixTest, RepeatedEvaluationIsBitwiseIdentical) {
  const Matrix a = random_matrix(50, 70, 9), b = random_matrix(70, 33, 10);
  EXPECT_EQ(matmul(a, b), matmul(a, b));
}

TEST(MatrixTest, BlockDiagonal) {
  const Matrix d = block_diagonal(Matrix{{1, 2}, {3, 4}}, Matrix{{5}});
  EXPECT_EQ(d, (Matrix{{1, 2, 0}, {3, 4, 0}, {0, 0, 5}}));
}

TEST(RandomStreamTest, SamePathReproducesSequence) {
  RandomStream a = RandomStream(42).split("trial", 3).split("init");
  RandomStream b = RandomStream(42).split("trial", 3).split("init");
  for (int i = 0; i < 100; ++i) EXPECT_EQ(a.next_u64(), b.next_u64());
}

TEST(RandomStreamTest, SplitIgnoresParentConsumption) {
  RandomStream parent(7);
  RandomStream before = parent.split("data", 1);
  for (int i = 0; i < 10; ++i) parent.next_u64();
  RandomStream after = parent.split("data", 1);
  EXPECT_EQ(before.next_u64(), after.next_u64());
}

TEST(RandomStreamTest, DistinctPathsDiffer) {
  RandomStream root(7);
  EXPECT_NE(root.split("data", 0).next_u64(), root.split("data", 1).next_u64());
  EXPECT_NE(root.split("data", 0).next_u64(), root.split("init", 0).next_u64());
  EXPECT_EQ(root.split("data", 2).path_string(), "7/data:2");
}

TEST(RandomStreamTest, UniformAndBelowRanges) {
  RandomStream rng(11);
  std::vector<int> counts(7, 0);
  for (int i = 0; i < 70000; ++i) {
    const double u = rng.uniform();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    ++counts[rng.below(7)];
  }
  // Binomial(70000, 1/7): sd ≈ 92.6; allow 5 sd.
  for (int c : counts) EXPECT_NEAR(c, 10000, 463);
}

TEST(RandomStreamTest, NormalMoments) {
  RandomStream rng(13);
  const int n = 200000;
  double s = 0, s2 = 0;
  for (int i = 0; i < n; ++i) {
    const double z = rng.normal();
    s += z;
    s2 += z * z;
  }
  EXPECT_NEAR(s / n, 0.0, 4.0 / std::sqrt(n));
  EXPECT_NEAR(s2 / n, 1.0, 0.02);
}

TEST(RandomStreamTest, SampleWithoutReplacementIsDistinct) {
  RandomStream rng(17);
  auto idx = rng.sample_without_replacement(552, 48);
  ASSERT_EQ(idx.size(), 48u);
  std::sort(idx.begin(), idx.end());
  EXPECT_EQ(std::adjacent_find(idx.begin(), idx.end()), idx.end());
  EXPECT_LT(idx.back(), 552u);
  EXPECT_THROW(rng.sample_without_replacement(3, 4), Error);
}

TEST(GaussianMatrixTest, ZeroVarianceIsConstant) {
  RandomStream rng(1);
  EXPECT_EQ(gaussian_matrix(2, 2, 0.0, 0.0, rng), Matrix(2, 2));
  EXPECT_EQ(gaussian_matrix(2, 3, 1.5, 0.0, rng), Matrix(2, 3, 1.5));
  EXPECT_THROW(gaussian_matrix(2, 2, 0.0, -1.0, rng), Error);
}

TEST(GaussianMatrixTest, SampleMomentsMatch) {
  RandomStream rng(1);
  const Matrix g = gaussian_matrix(1000, 1000, 0.0, 0.0025, rng);
  const auto v = g.values();
  const double mean = std::accumulate(v.begin(), v.end(), 0.0) / v.size();
  double var = 0.0;
  for (double x : v) var += (x - mean) * (x - mean);
  var /= v.size() - 1;
  EXPECT_LE(std::abs(mean), 4.0 * (0.05 / 1000.0));
  EXPECT_NEAR(var, 0.0025, 0.05 * 0.0025);
}

TEST(HaarTest, OrthogonalUpTo128) {
  RandomStream root(3);
  for (std::size_t n : {1, 2, 5, 26, 64, 128}) {
    RandomStream rng = root.split("haar", n);
    const Matrix q = haar_orthogonal(n, rng);
    EXPECT_LE(max_abs_diff(matmul_at_b(q, q), Matrix::identity(n)), 1e-10) << n;
  }
}

TEST(HaarTest, DeterminantHasUnitModulus) {
  RandomStream rng(4);
  EXPECT_NEAR(std::abs(determinant(haar_orthogonal(4, rng))), 1.0, 1e-10);
}

TEST(HaarTest, OneDimensionalSignsAreFair) {
  RandomStream root(5);
  int plus = 0;
  for (int i = 0; i < 1000; ++i) {
    RandomStream rng = root.split("draw", i);
    const double v = haar_orthogonal(1, rng)(0, 0);
    ASSERT_TRUE(v == 1.0 || v == -1.0);
    plus += v > 0 ? 1 : 0;
  }
  EXPECT_NEAR(plus / 1000.0, 0.5, 0.05);
}

TEST(HaarTest, ZeroDimensionThrows) {
  RandomStream rng(1);
  EXPECT_THROW(haar_orthogonal(0, rng), Error);
}

TEST(HaarTest, FirstColumnIsUniformOnSphere) {
  // For Haar Q, E[q₁₁²] = 1/n and the sign of q₁₁ is fair.
  RandomStream root(6);
  const int draws = 4000;
  double s2 = 0;
  int positive = 0;
  for (int i = 0; i < draws; ++i) {
    RandomStream rng = root.split("draw", i);
    const double v = haar_orthogonal(4, rng)(0, 0);
    s2 += v * v;
    positive += v > 0 ? 1 : 0;
  }
  EXPECT_NEAR(s2 / draws, 0.25, 0.02);
  EXPECT_NEAR(positive / static_cast<double>(draws), 0.5, 0.04);
}

TEST(LinalgTest, QrReconstructs) {
  const Matrix a = random_matrix(7, 4, 21);
  const QrFactorization qr = householder_qr(a);
  EXPECT_LE(max_abs_diff(matmul(qr.q, qr.r), a), 1e-12);
  EXPECT_LE(max_abs_diff(matmul_at_b(qr.q, qr.q), Matrix::identity(7)), 1e-12);
  for (std::size_t i = 0; i < 7; ++i)
    for (std::size_t j = 0; j < std::min<std::size_t>(i, 4); ++j) EXPECT_EQ(qr.r(i, j), 0.0);
}

TEST(LinalgTest, RankDetectsDependence) {
  Matrix a = random_matrix(6, 4, 22);
  EXPECT_EQ(numerical_rank(a), 4u);
  for (std::size_t r = 0; r < 6; ++r) a(r, 3) = a(r, 0) - 2.0 * a(r, 1);
  EXPECT_EQ(numerical_rank(a), 3u);
  EXPECT_EQ(numerical_rank(Matrix(3, 3)), 0u);
}

TEST(LinalgTest, SolveAndInverse) {
  const Matrix a = random_matrix(5, 5, 23), b = random_matrix(5, 2, 24);
  EXPECT_LE(max_abs_diff(matmul(a, solve(a, b)), b), 1e-10);
  EXPECT_LE(max_abs_diff(matmul(a, inverse(a)), Matrix::identity(5)), 1e-10);
  EXPECT_THROW(solve(Matrix(2, 2), Matrix(2, 1)), Error);
  EXPECT_EQ(determinant(Matrix{{1, 2}, {2, 4}}), 0.0);
  EXPECT_NEAR(determinant(Matrix{{2, 1}, {1, 3}}), 5.0, 1e-14);
}

TEST(LinalgTest, LeastSquaresMatchesNormalEquations) {
  const Matrix a = random_matrix(20, 3, 25);
  const Matrix b = random_matrix(20, 1, 26);
  const Vector x = least_squares(a, b.values());
  const Matrix normal = solve(matmul_at_b(a, a), matmul_at_b(a, b));
  for (std::size_t i = 0; i < 3; ++i) EXPECT_NEAR(x[i], normal(i, 0), 1e-10);
}

TEST(NullSpacePairTest, CanonicalComplement) {
  Matrix cols(26, 24);
  for (std::size_t i = 0; i < 24; ++i) cols(i, i) = 1.0;
  const auto [alpha, beta] = null_space_pair(cols);
  for (std::size_t i = 0; i < 24; ++i) {
    EXPECT_LE(std::abs(alpha[i]), 1e-12);
    EXPECT_LE(std::abs(beta[i]), 1e-12);
  }
  EXPECT_NEAR(norm2(alpha), 1.0, 1e-10);
  EXPECT_NEAR(norm2(beta), 1.0, 1e-10);
  EXPECT_LE(std::abs(dot(alpha, beta)), 1e-10);
}

// Classical Gram–Schmidt projection onto span(columns), used as an oracle.
Vector project_out(const Matrix& cols, Vector v) {
  std::vector<Vector> basis;
  for (std::size_t c = 0; c < cols.cols(); ++c) {
    Vector q = cols.column_copy(c);
    for (int pass = 0; pass < 2; ++pass)
      for (const auto& e : basis) {
        const double d = dot(q, e);
        for (std::size_t i = 0; i < q.size(); ++i) q[i] -= d * e[i];
      }
    const double n = norm2(q);
    for (double& x : q) x /= n;
    basis.push_back(q);
  }
  for (const auto& e : basis) {
    const double d = dot(v, e);
    for (std::size_t i = 0; i < v.size(); ++i) v[i] -= d * e[i];
  }
  return v;
}

TEST(NullSpacePairTest, GaussianColumnsAgainstGramSchmidt) {
  const Matrix cols = random_matrix(30, 24, 27);
  const auto [alpha, beta] = null_space_pair(cols);
  double worst = 0.0;
  for (std::size_t c = 0; c < 24; ++c) {
    const Vector x = cols.column_copy(c);
    worst = std::max({worst, std::abs(dot(x, alpha)), std::abs(dot(x, beta))});
  }
  EXPECT_LE(worst, 1e-10);
  // Projecting out span(X) must leave α and β untouched.
  EXPECT_LE(max_abs_diff(project_out(cols, alpha), alpha), 1e-10);
  EXPECT_LE(max_abs_diff(project_out(cols, beta), beta), 1e-10);
  EXPECT_LE(std::abs(dot(alpha, beta)), 1e-10);
}

TEST(NullSpacePairTest, Errors) {
  try {
    null_space_pair(random_matrix(25, 24, 28));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kComplementTooSmall);
  }
  Matrix dep = random_matrix(30, 3, 29);
  for (std::size_t r = 0; r < 30; ++r) dep(r, 2) = dep(r, 0);
  try {
    null_space_pair(dep);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kRankError);
  }
}

}  // namespace
}  // namespace idlab
