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

#include "idlab/nn/lstm.hpp"

#include <cmath>
#include <string>

#include "idlab/error.hpp"
#include "idlab/numerics/linalg.hpp"
#include "kernels.hpp"

namespace idlab {

using detail::sigmoid;

void validate(const LstmSpec& spec) {
  require(spec.layers >= 1 && spec.layers <= 3, ErrorKind::kInvalidArgument,
          "lstm layer count must be 1, 2 or 3");
  require(spec.step_dim >= 1 && spec.units >= 1, ErrorKind::kInvalidArgument,
          "lstm dimensions must be positive");
  require(spec.dropout >= 0.0 && spec.dropout < 1.0, ErrorKind::kInvalidArgument,
          "lstm dropout must be in [0, 1)");
}

nlohmann::json to_json(const LstmSpec& spec) {
  return {{"model", "lstm"}, {"step_dim", spec.step_dim}, {"layers", spec.layers},
          {"units", spec.units}, {"dropout", spec.dropout}};
}

SplitParams lstm_zero_params(const LstmSpec& spec) {
  validate(spec);
  const std::size_t g = 4 * spec.units;
  SplitParams p;
  p.c_name = "W1";
  p.c = Matrix(g, spec.step_dim);
  p.b.push_back({"U1", Matrix(g, spec.units)});
  p.b.push_back({"b1", Matrix(g, 1)});
  for (std::size_t l = 2; l <= spec.layers; ++l) {
    const std::string s = std::to_string(l);
    p.b.push_back({"W" + s, Matrix(g, spec.units)});
    p.b.push_back({"U" + s, Matrix(g, spec.units)});
    p.b.push_back({"b" + s, Matrix(g, 1)});
  }
  p.b.push_back({"w_out", Matrix(1, spec.units)});
  p.b.push_back({"b_out", Matrix(1, 1)});
  return p;
}

namespace {

// 4u × u with orthonormal columns, sign-corrected by diag(R).
Matrix orthogonal_columns(std::size_t rows, std::size_t cols, RandomStream& rng) {
  const QrFactorization qr = householder_qr(gaussian_matrix(rows, cols, 0.0, 1.0, rng));
  Matrix out(rows, cols);
  for (std::size_t j = 0; j < cols; ++j) {
    const double s = qr.r(j, j) < 0.0 ? -1.0 : 1.0;
    for (std::size_t i = 0; i < rows; ++i) out(i, j) = s * qr.q(i, j);
  }
  return out;
}

struct LayerRefs {
  const Matrix* w;
  const Matrix* u;
  const Matrix* bias;
};

struct Refs {
  std::vector<LayerRefs> layers;
  const Matrix* w_out;
  const Matrix* b_out;
};

std::size_t w_index(std::size_t l) { return 2 + 3 * (l - 1); }

Refs refs_of(const SplitParams& p, const LstmSpec& spec) {
  validate(spec);
  require(p.b.size() == 3 * spec.layers + 1, ErrorKind::kInvalidArgument,
          "parameter block count does not match lstm depth");
  const std::size_t g = 4 * spec.units;
  Refs r;
  r.layers.push_back({&p.c, &p.b[0].value, &p.b[1].value});
  for (std::size_t l = 1; l < spec.layers; ++l) {
    const std::size_t k = w_index(l);
    r.layers.push_back({&p.b[k].value, &p.b[k + 1].value, &p.b[k + 2].value});
  }
  r.w_out = &p.b[p.b.size() - 2].value;
  r.b_out = &p.b[p.b.size() - 1].value;
  for (std::size_t l = 0; l < spec.layers; ++l) {
    detail::require_shape(*r.layers[l].w, g, l == 0 ? spec.step_dim : spec.units, "lstm kernel");
    detail::require_shape(*r.layers[l].u, g, spec.units, "lstm recurrent kernel");
    detail::require_shape(*r.layers[l].bias, g, 1, "lstm bias");
  }
  detail::require_shape(*r.w_out, 1, spec.units, "w_out");
  detail::require_shape(*r.b_out, 1, 1, "b_out");
  return r;
}

struct StepCache {
  Matrix gates;  // N × 4u, activated: [i | f | g | o]
  Matrix c;
  Matrix tanh_c;
  Matrix h;      // recurrent state, before dropout
  Matrix out;    // layer output, after dropout
};

struct LayerCache {
  std::array<const Matrix*, 2> input{};
  std::array<StepCache, 2> steps;
};

void check_masks(const LstmMasks* masks, const LstmSpec& spec) {
  if (masks == nullptr) return;
  require(masks->layers.size() == spec.layers, ErrorKind::kInvalidArgument,
          "lstm masks do not match layer count");
}

Vector forward_pass(const Refs& refs, const LstmSpec& spec, const Matrix& x,
                    const LstmMasks* masks, std::array<Matrix, 2>& inputs,
                    std::vector<LayerCache>& cache) {
  require(x.cols() == 2 * spec.step_dim, ErrorKind::kInvalidArgument,
          "lstm input rows must hold two steps of " + std::to_string(spec.step_dim));
  check_masks(masks, spec);
  const std::size_t n = x.rows();
  const std::size_t u = spec.units;
  for (std::size_t t = 0; t < 2; ++t) {
    inputs[t] = Matrix(n, spec.step_dim);
    for (std::size_t i = 0; i < n; ++i) {
      const auto row = x.row(i);
      std::copy_n(row.begin() + static_cast<std::ptrdiff_t>(t * spec.step_dim), spec.step_dim,
                  inputs[t].row(i).begin());
    }
  }

  cache.assign(spec.layers, {});
  for (std::size_t l = 0; l < spec.layers; ++l) {
    const LayerRefs& lr = refs.layers[l];
    LayerCache& lc = cache[l];
    for (std::size_t t = 0; t < 2; ++t) {
      lc.input[t] = l == 0 ? &inputs[t] : &cache[l - 1].steps[t].out;
      StepCache& sc = lc.steps[t];
      sc.gates = matmul_a_bt(*lc.input[t], *lr.w);
      if (t > 0) matmul_into(lc.steps[t - 1].h, lr.u->transposed(), sc.gates, true);
      detail::add_row_bias(sc.gates, *lr.bias);
      sc.c = Matrix(n, u);
      sc.tanh_c = Matrix(n, u);
      sc.h = Matrix(n, u);
      for (std::size_t i = 0; i < n; ++i) {
        auto z = sc.gates.row(i);
        for (std::size_t k = 0; k < u; ++k) {
          const double ig = sigmoid(z[k]);
          const double fg = sigmoid(z[u + k]);
          const double gg = std::tanh(z[2 * u + k]);
          const double og = sigmoid(z[3 * u + k]);
          z[k] = ig;
          z[u + k] = fg;
          z[2 * u + k] = gg;
          z[3 * u + k] = og;
          const double c_prev = t > 0 ? lc.steps[t - 1].c(i, k) : 0.0;
          const double c = fg * c_prev + ig * gg;
          const double tc = std::tanh(c);
          sc.c(i, k) = c;
          sc.tanh_c(i, k) = tc;
          sc.h(i, k) = og * tc;
        }
      }
      sc.out = sc.h;
      if (masks != nullptr) masks->layers[l][t].apply(sc.out);
    }
  }

  const Matrix& top = cache.back().steps[1].out;
  const auto w = refs.w_out->row(0);
  const double b = (*refs.b_out)(0, 0);
  Vector out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = sigmoid(dot(top.row(i), w) + b);
  return out;
}

}  // namespace

SplitParams lstm_init(const LstmSpec& spec, double mean, double variance, RandomStream& rng) {
  SplitParams p = lstm_zero_params(spec);
  p.for_each([&](const std::string& name, Matrix& m) {
    if (name.front() == 'U') {
      m = orthogonal_columns(m.rows(), m.cols(), rng);
    } else {
      m = gaussian_matrix(m.rows(), m.cols(), mean, variance, rng);
    }
  });
  return p;
}

LstmMasks sample_lstm_masks(const LstmSpec& spec, std::size_t batch, RandomStream& rng) {
  validate(spec);
  LstmMasks masks;
  masks.layers.resize(spec.layers);
  for (auto& layer : masks.layers)
    for (auto& m : layer) m = sample_dropout_mask(batch, spec.units, spec.dropout, rng);
  return masks;
}

Vector lstm_forward_batch(const SplitParams& params, const LstmSpec& spec, const Matrix& x,
                          const LstmMasks* masks) {
  std::array<Matrix, 2> inputs;
  std::vector<LayerCache> cache;
  return forward_pass(refs_of(params, spec), spec, x, masks, inputs, cache);
}

double lstm_forward(const SplitParams& params, const LstmSpec& spec, std::span<const double> u,
                    std::span<const double> v, const LstmMasks* masks) {
  require(u.size() == spec.step_dim && v.size() == spec.step_dim, ErrorKind::kInvalidArgument,
          "lstm step vectors have the wrong length");
  Vector row(u.begin(), u.end());
  row.insert(row.end(), v.begin(), v.end());
  return lstm_forward_batch(params, spec, Matrix::row_vector(row), masks)[0];
}

double lstm_backward(const SplitParams& params, const LstmSpec& spec, const Matrix& x,
                     std::span<const double> targets, LossKind loss, const Regularizer& reg,
                     const LstmMasks* masks, SplitParams& grad, LstmStepPartials* partials) {
  const Refs refs = refs_of(params, spec);
  const std::size_t n = x.rows();
  const std::size_t u = spec.units;
  require(targets.size() == n && n > 0, ErrorKind::kInvalidArgument,
          "batch needs one target per input row");
  if (!grad.same_shape(params)) grad = params.zeros_like();

  std::array<Matrix, 2> inputs;
  std::vector<LayerCache> cache;
  const Vector f = forward_pass(refs, spec, x, masks, inputs, cache);

  const double inv_n = 1.0 / static_cast<double>(n);
  double objective = 0.0;
  Matrix dz(n, 1);
  for (std::size_t i = 0; i < n; ++i) {
    objective += loss_value(loss, f[i], targets[i]);
    dz(i, 0) = sigmoid_output_gradient(loss, f[i], targets[i]) * inv_n;
  }
  objective *= inv_n;

  grad.b[grad.b.size() - 2].value = matmul_at_b(dz, cache.back().steps[1].out);
  detail::column_sums_into(dz, grad.b.back().value);

  // Gradient with respect to each step's layer output (after dropout).
  std::array<Matrix, 2> d_out{Matrix(n, u), matmul(dz, *refs.w_out)};

  for (std::size_t l = spec.layers; l-- > 0;) {
    const LayerRefs& lr = refs.layers[l];
    LayerCache& lc = cache[l];
    Matrix& gw = l == 0 ? grad.c : grad.b[w_index(l)].value;
    Matrix& gu = l == 0 ? grad.b[0].value : grad.b[w_index(l) + 1].value;
    Matrix& gb = l == 0 ? grad.b[1].value : grad.b[w_index(l) + 2].value;

    std::array<Matrix, 2> dz_steps;
    Matrix dh_recur(n, u);
    Matrix dc_next(n, u);
    for (std::size_t t = 2; t-- > 0;) {
      Matrix dh = d_out[t];
      if (masks != nullptr) masks->layers[l][t].apply(dh);
      dh += dh_recur;
      const StepCache& sc = lc.steps[t];
      Matrix dzt(n, 4 * u);
      for (std::size_t i = 0; i < n; ++i) {
        const auto gate = sc.gates.row(i);
        auto out = dzt.row(i);
        for (std::size_t k = 0; k < u; ++k) {
          const double ig = gate[k], fg = gate[u + k], gg = gate[2 * u + k], og = gate[3 * u + k];
          const double tc = sc.tanh_c(i, k);
          const double c_prev = t > 0 ? lc.steps[t - 1].c(i, k) : 0.0;
          const double d_h = dh(i, k);
          const double d_c = d_h * og * (1.0 - tc * tc) + dc_next(i, k);
          out[k] = d_c * gg * ig * (1.0 - ig);
          out[u + k] = d_c * c_prev * fg * (1.0 - fg);
          out[2 * u + k] = d_c * ig * (1.0 - gg * gg);
          out[3 * u + k] = d_h * tc * og * (1.0 - og);
          dc_next(i, k) = d_c * fg;
        }
      }
      if (t > 0) dh_recur = matmul(dzt, *lr.u);
      dz_steps[t] = std::move(dzt);
    }

    Matrix w_first = matmul_at_b(dz_steps[0], *lc.input[0]);
    Matrix w_second = matmul_at_b(dz_steps[1], *lc.input[1]);
    gw = w_first + w_second;
    if (l == 0 && partials != nullptr) {
      partials->first = std::move(w_first);
      partials->second = std::move(w_second);
    }
    gu = matmul_at_b(dz_steps[1], lc.steps[0].h);
    Matrix gb0(4 * u, 1), gb1(4 * u, 1);
    detail::column_sums_into(dz_steps[0], gb0);
    detail::column_sums_into(dz_steps[1], gb1);
    gb = gb0 + gb1;

    if (l > 0) {
      d_out[0] = matmul(dz_steps[0], *lr.w);
      d_out[1] = matmul(dz_steps[1], *lr.w);
    }
  }

  objective += reg.value(params);
  reg.add_gradient(params, grad);
  return objective;
}

}  // namespace idlab
