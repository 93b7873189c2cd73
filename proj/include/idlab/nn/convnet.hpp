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
#include <vector>

#include <json.hpp>

#include "idlab/nn/params.hpp"
#include "idlab/numerics/random.hpp"

namespace idlab {

// conv(k×k, filters1) → ReLU → conv(k×k, filters2) → ReLU → maxpool → dropout
// → flatten → dense → ReLU → dropout → dense → softmax. Valid convolutions,
// stride 1, channels-last flatten order (y, x, channel).
//
// C is the first conv kernel (filters1 × k²). B holds conv1_bias,
// conv2_kernel (filters2 × k²·filters1, column order (ky, kx, channel)),
// conv2_bias, dense1_kernel, dense1_bias, dense2_kernel, dense2_bias.
struct ConvNetSpec {
  std::size_t image_size = 28;
  std::size_t filters1 = 32;
  std::size_t filters2 = 64;
  std::size_t kernel = 3;
  std::size_t pool = 2;
  std::size_t dense_units = 128;
  std::size_t classes = 10;
  double dropout1 = 0.25;
  double dropout2 = 0.5;

  std::size_t conv1_size() const { return image_size - kernel + 1; }
  std::size_t conv2_size() const { return conv1_size() - kernel + 1; }
  std::size_t pooled_size() const { return conv2_size() / pool; }
  std::size_t flat_size() const { return pooled_size() * pooled_size() * filters2; }
};

void validate(const ConvNetSpec& spec);
nlohmann::json to_json(const ConvNetSpec& spec);

SplitParams convnet_zero_params(const ConvNetSpec& spec);
// Glorot-uniform kernels, zero biases.
SplitParams convnet_init(const ConvNetSpec& spec, RandomStream& rng);

// Intermediate tensors for one image, each row-major (position, channel).
struct ConvActivations {
  Matrix conv1;   // conv1_size² × filters1
  Matrix conv2;   // conv2_size² × filters2
  Matrix pooled;  // pooled_size² × filters2
  Vector flat;
  Vector dense;
  Vector probabilities;
};

ConvActivations convnet_activations(const SplitParams& params, const ConvNetSpec& spec,
                                    std::span<const double> image);

// Evaluation mode: probability vector of length `classes`.
Vector convnet_forward(const SplitParams& params, const ConvNetSpec& spec,
                       std::span<const double> image);
// One image per row (image_size² pixels); one probability row per image.
Matrix convnet_forward_batch(const SplitParams& params, const ConvNetSpec& spec,
                             const Matrix& images);

// Mean categorical cross-entropy and its gradient (overwritten into grad).
// Dropout is active iff dropout_rng is non-null.
double convnet_backward(const SplitParams& params, const ConvNetSpec& spec, const Matrix& images,
                        std::span<const std::size_t> labels, RandomStream* dropout_rng,
                        SplitParams& grad);

}  // namespace idlab
