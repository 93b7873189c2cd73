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

#include "idlab/nn/mlp.hpp"

#include <string>
#include <vector>

#include "idlab/error.hpp"
#include "idlab/numerics/linalg.hpp"
#include "kernels.hpp"

namespace idlab {

using detail::sigmoid;

void validate(const MlpSpec& spec) {
  require(spec.depth >= 1 && spec.depth <= 3, ErrorKind::kInvalidArgument,
          "mlp depth must be 1, 2 or 3");
  require(spec.input_dim >= 1 && spec.width >= 1, ErrorKind::kInvalidArgument,
          "mlp dimensions must be positive");
}

nlohmann::json to_json(const MlpSpec& spec) {
  return {{"model", "mlp"}, {"input_dim", spec.input_dim}, {"depth", spec.depth},
          {"width", spec.width}};
}

SplitParams mlp_zero_params(const MlpSpec& spec) {
  validate(spec);
  SplitParams p;
  p.c_name = "W1";
  p.c = Matrix(spec.width, spec.input_dim);
  p.b.push_back({"b1", Matrix(spec.width, 1)});
  for (std::size_t l = 2; l <= spec.depth; ++l) {
    p.b.push_back({"W" + std::to_string(l), Matrix(spec.width, spec.width)});
    p.b.push_back({"b" + std::to_string(l), Matrix(spec.width, 1)});
  }
  p.b.push_back({"W_out", Matrix(1, spec.width)});
  p.b.push_back({"b_out", Matrix(1, 1)});
  return p;
}

SplitParams mlp_init(const MlpSpec& spec, double mean, double variance, RandomStream& rng) {
  SplitParams p = mlp_zero_params(spec);
  p.for_each([&](const std::string&, Matrix& m) {
    m = gaussian_matrix(m.rows(), m.cols(), mean, variance, rng);
  });
  return p;
}

namespace {

// Layer weights in order: W1, W2, ..., W_out with matching biases.
struct LayerRefs {
  std::vector<const Matrix*> w;
  std::vector<const Matrix*> bias;
};

LayerRefs layers_of(const SplitParams& p, const MlpSpec& spec) {
  validate(spec);
  require(p.b.size() == 2 * spec.depth + 1, ErrorKind::kInvalidArgument,
          "parameter block count does not match mlp depth");
  LayerRefs refs;
  refs.w.push_back(&p.c);
  refs.bias.push_back(&p.b[0].value);
  for (std::size_t l = 1; l < spec.depth; ++l) {
    refs.w.push_back(&p.b[2 * l - 1].value);
    refs.bias.push_back(&p.b[2 * l].value);
  }
  refs.w.push_back(&p.b[2 * spec.depth - 1].value);
  refs.bias.push_back(&p.b[2 * spec.depth].value);

  detail::require_shape(*refs.w[0], spec.width, spec.input_dim, "W1");
  for (std::size_t l = 1; l < spec.depth; ++l)
    detail::require_shape(*refs.w[l], spec.width, spec.width, "hidden weight");
  for (std::size_t l = 0; l < spec.depth; ++l)
    detail::require_shape(*refs.bias[l], spec.width, 1, "hidden bias");
  detail::require_shape(*refs.w.back(), 1, spec.width, "W_out");
  detail::require_shape(*refs.bias.back(), 1, 1, "b_out");
  return refs;
}

// Hidden activations a[0] = x, a[l] = relu(a[l-1] W_lᵀ + b_l); returns ratings.
Vector forward_pass(const LayerRefs& refs, const MlpSpec& spec, const Matrix& x,
                    std::vector<Matrix>& acts) {
  require(x.cols() == spec.input_dim, ErrorKind::kInvalidArgument,
          "input dimension " + std::to_string(x.cols()) + " does not match mlp input " +
              std::to_string(spec.input_dim));
  acts.clear();
  acts.reserve(spec.depth);
  const Matrix* prev = &x;
  for (std::size_t l = 0; l < spec.depth; ++l) {
    Matrix z = matmul_a_bt(*prev, *refs.w[l]);
    detail::add_row_bias(z, *refs.bias[l]);
    detail::relu_inplace(z);
    acts.push_back(std::move(z));
    prev = &acts.back();
  }
  const Matrix& last = acts.back();
  const auto w_out = refs.w.back()->row(0);
  const double b_out = (*refs.bias.back())(0, 0);
  Vector out(x.rows());
  for (std::size_t i = 0; i < x.rows(); ++i) out[i] = sigmoid(dot(last.row(i), w_out) + b_out);
  return out;
}

}  // namespace

Vector mlp_forward_batch(const SplitParams& params, const MlpSpec& spec, const Matrix& x) {
  std::vector<Matrix> acts;
  return forward_pass(layers_of(params, spec), spec, x, acts);
}

double mlp_forward(const SplitParams& params, const MlpSpec& spec, std::span<const double> x) {
  return mlp_forward_batch(params, spec, Matrix::row_vector(x))[0];
}

double mlp_backward(const SplitParams& params, const MlpSpec& spec, const Matrix& x,
                    std::span<const double> targets, LossKind loss, const Regularizer& reg,
                    SplitParams& grad) {
  const LayerRefs refs = layers_of(params, spec);
  const std::size_t n = x.rows();
  require(targets.size() == n && n > 0, ErrorKind::kInvalidArgument,
          "batch needs one target per input row");
  if (!grad.same_shape(params)) grad = params.zeros_like();

  std::vector<Matrix> acts;
  const Vector f = forward_pass(refs, spec, x, acts);

  const double inv_n = 1.0 / static_cast<double>(n);
  double objective = 0.0;
  Matrix dz(n, 1);
  for (std::size_t i = 0; i < n; ++i) {
    objective += loss_value(loss, f[i], targets[i]);
    dz(i, 0) = sigmoid_output_gradient(loss, f[i], targets[i]) * inv_n;
  }
  objective *= inv_n;

  // Gradient slots in the same order as refs.
  std::vector<Matrix*> gw{&grad.c};
  std::vector<Matrix*> gb{&grad.b[0].value};
  for (std::size_t l = 1; l < spec.depth; ++l) {
    gw.push_back(&grad.b[2 * l - 1].value);
    gb.push_back(&grad.b[2 * l].value);
  }
  gw.push_back(&grad.b[grad.b.size() - 2].value);
  gb.push_back(&grad.b[grad.b.size() - 1].value);

  // Output layer.
  *gw.back() = matmul_at_b(dz, acts.back());
  detail::column_sums_into(dz, *gb.back());
  Matrix delta = matmul(dz, *refs.w.back());  // n × width

  for (std::size_t l = spec.depth; l-- > 0;) {
    detail::relu_backward_inplace(delta, acts[l]);
    const Matrix& input = l == 0 ? x : acts[l - 1];
    *gw[l] = matmul_at_b(delta, input);
    detail::column_sums_into(delta, *gb[l]);
    if (l > 0) delta = matmul(delta, *refs.w[l]);
  }

  objective += reg.value(params);
  reg.add_gradient(params, grad);
  return objective;
}

}  // namespace idlab
