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

#include "idlab/nn/convnet.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "idlab/error.hpp"
#include "idlab/nn/dropout.hpp"
#include "kernels.hpp"

namespace idlab {

void validate(const ConvNetSpec& spec) {
  require(spec.kernel >= 1 && spec.pool >= 1 && spec.filters1 >= 1 && spec.filters2 >= 1 &&
              spec.dense_units >= 1 && spec.classes >= 2,
          ErrorKind::kInvalidArgument, "convnet dimensions must be positive");
  require(spec.image_size >= 2 * spec.kernel - 1 + spec.pool - 1, ErrorKind::kInvalidArgument,
          "image too small for the convnet layers");
  require(spec.pooled_size() >= 1, ErrorKind::kInvalidArgument, "pooled map is empty");
  require(spec.dropout1 >= 0.0 && spec.dropout1 < 1.0 && spec.dropout2 >= 0.0 &&
              spec.dropout2 < 1.0,
          ErrorKind::kInvalidArgument, "dropout must be in [0, 1)");
}

nlohmann::json to_json(const ConvNetSpec& spec) {
  return {{"model", "convnet"},          {"image_size", spec.image_size},
          {"filters1", spec.filters1},   {"filters2", spec.filters2},
          {"kernel", spec.kernel},       {"pool", spec.pool},
          {"dense_units", spec.dense_units}, {"classes", spec.classes},
          {"dropout1", spec.dropout1},   {"dropout2", spec.dropout2}};
}

SplitParams convnet_zero_params(const ConvNetSpec& spec) {
  validate(spec);
  const std::size_t kk = spec.kernel * spec.kernel;
  SplitParams p;
  p.c_name = "conv1_kernel";
  p.c = Matrix(spec.filters1, kk);
  p.b.push_back({"conv1_bias", Matrix(spec.filters1, 1)});
  p.b.push_back({"conv2_kernel", Matrix(spec.filters2, kk * spec.filters1)});
  p.b.push_back({"conv2_bias", Matrix(spec.filters2, 1)});
  p.b.push_back({"dense1_kernel", Matrix(spec.dense_units, spec.flat_size())});
  p.b.push_back({"dense1_bias", Matrix(spec.dense_units, 1)});
  p.b.push_back({"dense2_kernel", Matrix(spec.classes, spec.dense_units)});
  p.b.push_back({"dense2_bias", Matrix(spec.classes, 1)});
  return p;
}

SplitParams convnet_init(const ConvNetSpec& spec, RandomStream& rng) {
  SplitParams p = convnet_zero_params(spec);
  const std::size_t kk = spec.kernel * spec.kernel;
  auto glorot = [&](Matrix& m, std::size_t fan_in, std::size_t fan_out) {
    const double limit = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
    for (double& v : m.values()) v = (2.0 * rng.uniform() - 1.0) * limit;
  };
  glorot(p.c, kk, kk * spec.filters1);
  glorot(p.block("conv2_kernel"), kk * spec.filters1, kk * spec.filters2);
  glorot(p.block("dense1_kernel"), spec.flat_size(), spec.dense_units);
  glorot(p.block("dense2_kernel"), spec.dense_units, spec.classes);
  return p;
}

namespace {

struct Refs {
  const Matrix* k1;
  const Matrix* b1;
  const Matrix* k2;
  const Matrix* b2;
  const Matrix* w1;
  const Matrix* bd1;
  const Matrix* w2;
  const Matrix* bd2;
};

Refs refs_of(const SplitParams& p, const ConvNetSpec& spec) {
  validate(spec);
  require(p.b.size() == 7, ErrorKind::kInvalidArgument, "convnet needs 7 B blocks");
  Refs r{&p.c,         &p.b[0].value, &p.b[1].value, &p.b[2].value,
         &p.b[3].value, &p.b[4].value, &p.b[5].value, &p.b[6].value};
  const std::size_t kk = spec.kernel * spec.kernel;
  detail::require_shape(*r.k1, spec.filters1, kk, "conv1_kernel");
  detail::require_shape(*r.b1, spec.filters1, 1, "conv1_bias");
  detail::require_shape(*r.k2, spec.filters2, kk * spec.filters1, "conv2_kernel");
  detail::require_shape(*r.b2, spec.filters2, 1, "conv2_bias");
  detail::require_shape(*r.w1, spec.dense_units, spec.flat_size(), "dense1_kernel");
  detail::require_shape(*r.bd1, spec.dense_units, 1, "dense1_bias");
  detail::require_shape(*r.w2, spec.classes, spec.dense_units, "dense2_kernel");
  detail::require_shape(*r.bd2, spec.classes, 1, "dense2_bias");
  return r;
}

// patches(p, (ky·k + kx)·ch + c) = input((y+ky)·w + x+kx, c).
void im2col(const double* input, std::size_t width, std::size_t channels, std::size_t k,
            Matrix& patches) {
  const std::size_t out = width - k + 1;
  for (std::size_t y = 0; y < out; ++y) {
    for (std::size_t x = 0; x < out; ++x) {
      double* dst = patches.row(y * out + x).data();
      for (std::size_t ky = 0; ky < k; ++ky) {
        const double* src = input + ((y + ky) * width + x) * channels;
        std::copy_n(src, k * channels, dst + ky * k * channels);
      }
    }
  }
}

void col2im_add(const Matrix& patches, std::size_t width, std::size_t channels, std::size_t k,
                double* grad_input) {
  const std::size_t out = width - k + 1;
  for (std::size_t y = 0; y < out; ++y) {
    for (std::size_t x = 0; x < out; ++x) {
      const double* src = patches.row(y * out + x).data();
      for (std::size_t ky = 0; ky < k; ++ky) {
        double* dst = grad_input + ((y + ky) * width + x) * channels;
        const double* s = src + ky * k * channels;
        for (std::size_t i = 0; i < k * channels; ++i) dst[i] += s[i];
      }
    }
  }
}

// out = patches · kernelᵀ + bias, then ReLU.
void conv_relu(const Matrix& patches, const Matrix& kernel_t, const Matrix& bias, Matrix& out) {
  gemm(patches.rows(), kernel_t.cols(), patches.cols(), patches.values().data(), patches.cols(),
       kernel_t.values().data(), kernel_t.cols(), out.values().data(), out.cols(), false);
  detail::add_row_bias(out, bias);
  detail::relu_inplace(out);
}

// Max over pool×pool windows; ties resolved to the first index in scan order.
void maxpool(const Matrix& a, std::size_t size, std::size_t pool, double* pooled,
             std::uint32_t* argmax) {
  const std::size_t ps = size / pool;
  const std::size_t ch = a.cols();
  for (std::size_t py = 0; py < ps; ++py) {
    for (std::size_t px = 0; px < ps; ++px) {
      for (std::size_t c = 0; c < ch; ++c) {
        std::size_t best = (py * pool) * size + px * pool;
        double best_v = a(best, c);
        for (std::size_t dy = 0; dy < pool; ++dy) {
          for (std::size_t dx = 0; dx < pool; ++dx) {
            const std::size_t pos = (py * pool + dy) * size + px * pool + dx;
            if (a(pos, c) > best_v) {
              best_v = a(pos, c);
              best = pos;
            }
          }
        }
        const std::size_t o = (py * ps + px) * ch + c;
        pooled[o] = best_v;
        argmax[o] = static_cast<std::uint32_t>(best);
      }
    }
  }
}

void softmax_rows(Matrix& logits) {
  for (std::size_t r = 0; r < logits.rows(); ++r) {
    auto row = logits.row(r);
    const double m = *std::max_element(row.begin(), row.end());
    double s = 0.0;
    for (double& v : row) {
      v = std::exp(v - m);
      s += v;
    }
    for (double& v : row) v /= s;
  }
}

struct BatchCache {
  std::vector<Matrix> a1;
  std::vector<Matrix> a2;
  std::vector<std::uint32_t> argmax;  // N × flat
  Matrix flat;                        // N × flat, after dropout
  Matrix dense;                       // N × units, after ReLU
  Matrix dense_out;                   // after dropout
  Matrix probs;
  DropoutMask mask1;
  DropoutMask mask2;
};

void forward_batch(const Refs& r, const ConvNetSpec& spec, const Matrix& images,
                   RandomStream* dropout_rng, BatchCache& cache, bool keep_maps) {
  const std::size_t n = images.rows();
  const std::size_t img = spec.image_size;
  require(images.cols() == img * img, ErrorKind::kInvalidArgument,
          "image rows must hold " + std::to_string(img * img) + " pixels");
  const std::size_t s1 = spec.conv1_size(), s2 = spec.conv2_size();
  const std::size_t k = spec.kernel;
  const Matrix k1t = r.k1->transposed();
  const Matrix k2t = r.k2->transposed();

  Matrix p1(s1 * s1, k * k);
  Matrix p2(s2 * s2, k * k * spec.filters1);
  Matrix a1(s1 * s1, spec.filters1);
  Matrix a2(s2 * s2, spec.filters2);
  const std::size_t flat = spec.flat_size();
  cache.flat = Matrix(n, flat);
  cache.argmax.assign(n * flat, 0);
  if (keep_maps) {
    cache.a1.assign(n, Matrix());
    cache.a2.assign(n, Matrix());
  }
  for (std::size_t b = 0; b < n; ++b) {
    im2col(images.row(b).data(), img, 1, k, p1);
    conv_relu(p1, k1t, *r.b1, a1);
    im2col(a1.values().data(), s1, spec.filters1, k, p2);
    conv_relu(p2, k2t, *r.b2, a2);
    maxpool(a2, s2, spec.pool, cache.flat.row(b).data(), cache.argmax.data() + b * flat);
    if (keep_maps) {
      cache.a1[b] = a1;
      cache.a2[b] = a2;
    }
  }
  cache.mask1 = {};
  cache.mask2 = {};
  if (dropout_rng != nullptr && spec.dropout1 > 0.0) {
    cache.mask1 = sample_dropout_mask(n, flat, spec.dropout1, *dropout_rng);
    cache.mask1.apply(cache.flat);
  }
  cache.dense = matmul_a_bt(cache.flat, *r.w1);
  detail::add_row_bias(cache.dense, *r.bd1);
  detail::relu_inplace(cache.dense);
  cache.dense_out = cache.dense;
  if (dropout_rng != nullptr && spec.dropout2 > 0.0) {
    cache.mask2 = sample_dropout_mask(n, spec.dense_units, spec.dropout2, *dropout_rng);
    cache.mask2.apply(cache.dense_out);
  }
  cache.probs = matmul_a_bt(cache.dense_out, *r.w2);
  detail::add_row_bias(cache.probs, *r.bd2);
  softmax_rows(cache.probs);
}

}  // namespace

ConvActivations convnet_activations(const SplitParams& params, const ConvNetSpec& spec,
                                    std::span<const double> image) {
  const Refs r = refs_of(params, spec);
  BatchCache cache;
  forward_batch(r, spec, Matrix::row_vector(image), nullptr, cache, true);
  ConvActivations out;
  out.conv1 = cache.a1[0];
  out.conv2 = cache.a2[0];
  const std::size_t ps = spec.pooled_size();
  out.pooled = Matrix(ps * ps, spec.filters2,
                      Vector(cache.flat.row(0).begin(), cache.flat.row(0).end()));
  out.flat.assign(cache.flat.row(0).begin(), cache.flat.row(0).end());
  out.dense.assign(cache.dense.row(0).begin(), cache.dense.row(0).end());
  out.probabilities.assign(cache.probs.row(0).begin(), cache.probs.row(0).end());
  return out;
}

Matrix convnet_forward_batch(const SplitParams& params, const ConvNetSpec& spec,
                             const Matrix& images) {
  const Refs r = refs_of(params, spec);
  BatchCache cache;
  forward_batch(r, spec, images, nullptr, cache, false);
  return std::move(cache.probs);
}

Vector convnet_forward(const SplitParams& params, const ConvNetSpec& spec,
                       std::span<const double> image) {
  const Matrix p = convnet_forward_batch(params, spec, Matrix::row_vector(image));
  return Vector(p.row(0).begin(), p.row(0).end());
}

double convnet_backward(const SplitParams& params, const ConvNetSpec& spec, const Matrix& images,
                        std::span<const std::size_t> labels, RandomStream* dropout_rng,
                        SplitParams& grad) {
  const Refs r = refs_of(params, spec);
  const std::size_t n = images.rows();
  require(labels.size() == n && n > 0, ErrorKind::kInvalidArgument,
          "batch needs one label per image");
  if (!grad.same_shape(params)) grad = params.zeros_like();

  BatchCache cache;
  forward_batch(r, spec, images, dropout_rng, cache, true);

  const double inv_n = 1.0 / static_cast<double>(n);
  double objective = 0.0;
  Matrix dlogits = cache.probs;
  for (std::size_t b = 0; b < n; ++b) {
    require(labels[b] < spec.classes, ErrorKind::kInvalidArgument, "class label out of range");
    objective += -std::log(std::max(cache.probs(b, labels[b]), 1e-300));
    dlogits(b, labels[b]) -= 1.0;
  }
  objective *= inv_n;
  dlogits *= inv_n;

  Matrix& g_k1 = grad.c;
  Matrix& g_b1 = grad.b[0].value;
  Matrix& g_k2 = grad.b[1].value;
  Matrix& g_b2 = grad.b[2].value;
  Matrix& g_w1 = grad.b[3].value;
  Matrix& g_bd1 = grad.b[4].value;
  Matrix& g_w2 = grad.b[5].value;
  Matrix& g_bd2 = grad.b[6].value;

  g_w2 = matmul_at_b(dlogits, cache.dense_out);
  detail::column_sums_into(dlogits, g_bd2);
  Matrix d_dense = matmul(dlogits, *r.w2);
  cache.mask2.apply(d_dense);
  detail::relu_backward_inplace(d_dense, cache.dense);
  g_w1 = matmul_at_b(d_dense, cache.flat);
  detail::column_sums_into(d_dense, g_bd1);
  Matrix d_flat = matmul(d_dense, *r.w1);
  cache.mask1.apply(d_flat);

  const std::size_t img = spec.image_size;
  const std::size_t s1 = spec.conv1_size(), s2 = spec.conv2_size();
  const std::size_t k = spec.kernel;
  const std::size_t flat = spec.flat_size();
  Matrix p1(s1 * s1, k * k);
  Matrix p2(s2 * s2, k * k * spec.filters1);
  Matrix d_a2(s2 * s2, spec.filters2);
  Matrix d_a1(s1 * s1, spec.filters1);
  Matrix d_p2(s2 * s2, k * k * spec.filters1);
  g_k1.fill(0.0);
  g_b1.fill(0.0);
  g_k2.fill(0.0);
  g_b2.fill(0.0);
  Matrix bias_tmp2(spec.filters2, 1), bias_tmp1(spec.filters1, 1);
  for (std::size_t b = 0; b < n; ++b) {
    d_a2.fill(0.0);
    const auto df = d_flat.row(b);
    const std::uint32_t* am = cache.argmax.data() + b * flat;
    for (std::size_t o = 0; o < flat; ++o) d_a2(am[o], o % spec.filters2) += df[o];
    detail::relu_backward_inplace(d_a2, cache.a2[b]);

    im2col(cache.a1[b].values().data(), s1, spec.filters1, k, p2);
    const Matrix d_a2t = d_a2.transposed();
    gemm(spec.filters2, p2.cols(), p2.rows(), d_a2t.values().data(), d_a2t.cols(),
         p2.values().data(), p2.cols(), g_k2.values().data(), g_k2.cols(), true);
    detail::column_sums_into(d_a2, bias_tmp2);
    g_b2 += bias_tmp2;

    gemm(d_a2.rows(), r.k2->cols(), d_a2.cols(), d_a2.values().data(), d_a2.cols(),
         r.k2->values().data(), r.k2->cols(), d_p2.values().data(), d_p2.cols(), false);
    d_a1.fill(0.0);
    col2im_add(d_p2, s1, spec.filters1, k, d_a1.values().data());
    detail::relu_backward_inplace(d_a1, cache.a1[b]);

    im2col(images.row(b).data(), img, 1, k, p1);
    const Matrix d_a1t = d_a1.transposed();
    gemm(spec.filters1, p1.cols(), p1.rows(), d_a1t.values().data(), d_a1t.cols(),
         p1.values().data(), p1.cols(), g_k1.values().data(), g_k1.cols(), true);
    detail::column_sums_into(d_a1, bias_tmp1);
    g_b1 += bias_tmp1;
  }
  return objective;
}

}  // namespace idlab
