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

// Shared elementwise helpers for the model implementations.

#include <cmath>
#include <cstddef>

#include "idlab/error.hpp"
#include "idlab/numerics/matrix.hpp"

namespace idlab::detail {

inline double sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

// z += bias (column vector) on every row.
inline void add_row_bias(Matrix& z, const Matrix& bias) {
  const std::size_t n = z.cols();
  const auto b = bias.values();
  for (std::size_t r = 0; r < z.rows(); ++r) {
    auto row = z.row(r);
    for (std::size_t c = 0; c < n; ++c) row[c] += b[c];
  }
}

// bias_grad = column sums of dz, summed over rows in increasing order.
inline void column_sums_into(const Matrix& dz, Matrix& bias_grad) {
  auto g = bias_grad.values();
  for (double& v : g) v = 0.0;
  for (std::size_t r = 0; r < dz.rows(); ++r) {
    const auto row = dz.row(r);
    for (std::size_t c = 0; c < dz.cols(); ++c) g[c] += row[c];
  }
}

inline void relu_inplace(Matrix& z) {
  for (double& v : z.values()) v = v > 0.0 ? v : 0.0;
}

// d ⊙ 1[a > 0]: ReLU subgradient at 0 is 0.
inline void relu_backward_inplace(Matrix& d, const Matrix& activated) {
  auto dv = d.values();
  auto av = activated.values();
  for (std::size_t i = 0; i < dv.size(); ++i) dv[i] = av[i] > 0.0 ? dv[i] : 0.0;
}

inline void require_shape(const Matrix& m, std::size_t rows, std::size_t cols, const char* what) {
  require(m.rows() == rows && m.cols() == cols, ErrorKind::kInvalidArgument,
          std::string(what) + " has shape " + std::to_string(m.rows()) + "x" +
              std::to_string(m.cols()) + ", expected " + std::to_string(rows) + "x" +
              std::to_string(cols));
}

}  // namespace idlab::detail
