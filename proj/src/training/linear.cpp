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

#include "idlab/training/linear.hpp"

#include <cmath>
#include <string>

#include "idlab/error.hpp"
#include "idlab/numerics/linalg.hpp"

namespace idlab {

double LinearModel::predict(std::span<const double> w) const {
  require(w.size() == c.size(), ErrorKind::kInvalidArgument, "linear model input size mismatch");
  return dot(c, w) + bias;
}

Vector LinearModel::predict(const Matrix& inputs) const {
  Vector out = matvec(inputs, c);
  for (double& v : out) v += bias;
  return out;
}

LinearModel ols_learner(const LabeledDataset& data) {
  data.validate();
  const std::size_t n = data.size();
  const std::size_t d = data.dimension();
  Matrix design(n, d + 1);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < d; ++j) design(i, j) = data.inputs(i, j);
    design(i, d) = 1.0;
  }
  const std::size_t rank = numerical_rank(design);
  require(rank == d + 1, ErrorKind::kNoUniqueMinimizer,
          "design matrix [X 1] has rank " + std::to_string(rank) + " < " + std::to_string(d + 1) +
              " columns; least squares has no unique minimizer");
  Vector coef = least_squares(design, data.ratings);
  LinearModel model;
  model.bias = coef[d];
  coef.pop_back();
  model.c = std::move(coef);
  return model;
}

LinearModel ridge_learner(const LabeledDataset& data, double lambda) {
  data.validate();
  require(lambda > 0.0, ErrorKind::kInvalidArgument, "ridge needs lambda > 0");
  const std::size_t n = data.size();
  const std::size_t d = data.dimension();
  require(n > 0, ErrorKind::kInvalidArgument, "empty dataset");

  // Centering removes the bias; the penalty enters as √λ·I rows.
  Vector mean_x(d, 0.0);
  double mean_r = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < d; ++j) mean_x[j] += data.inputs(i, j);
    mean_r += data.ratings[i];
  }
  for (double& v : mean_x) v /= static_cast<double>(n);
  mean_r /= static_cast<double>(n);

  const double row_scale = 1.0 / std::sqrt(static_cast<double>(n));
  Matrix a(n + d, d, 0.0);
  Vector b(n + d, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < d; ++j) a(i, j) = (data.inputs(i, j) - mean_x[j]) * row_scale;
    b[i] = (data.ratings[i] - mean_r) * row_scale;
  }
  const double root_lambda = std::sqrt(lambda);
  for (std::size_t j = 0; j < d; ++j) a(n + j, j) = root_lambda;

  LinearModel model;
  model.c = least_squares(a, b);
  model.bias = mean_r - dot(model.c, mean_x);
  return model;
}

double ridge_objective(const LinearModel& model, const LabeledDataset& data, double lambda) {
  const Vector f = model.predict(data.inputs);
  double total = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double e = f[i] - data.ratings[i];
    total += e * e;
  }
  return total / static_cast<double>(f.size()) + lambda * dot(model.c, model.c);
}

Vector ridge_gradient(const LinearModel& model, const LabeledDataset& data, double lambda) {
  const std::size_t n = data.size();
  const std::size_t d = data.dimension();
  const Vector f = model.predict(data.inputs);
  Vector g(d + 1, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const double e = 2.0 * (f[i] - data.ratings[i]) / static_cast<double>(n);
    for (std::size_t j = 0; j < d; ++j) g[j] += e * data.inputs(i, j);
    g[d] += e;
  }
  for (std::size_t j = 0; j < d; ++j) g[j] += 2.0 * lambda * model.c[j];
  return g;
}

nlohmann::json to_json(const LinearModel& model) {
  return {{"c", model.c}, {"bias", model.bias}};
}

}  // namespace idlab
