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

#include <json.hpp>

#include "idlab/nn/params.hpp"
#include "idlab/numerics/random.hpp"
#include "idlab/training/objective.hpp"

namespace idlab {

// Feedforward network: depth ReLU layers of `width` units, one sigmoid output.
// C is the first-layer weight W1; B holds b1, W2, b2, ..., W_out, b_out.
struct MlpSpec {
  std::size_t input_dim = 52;
  std::size_t depth = 1;
  std::size_t width = 256;
};

void validate(const MlpSpec& spec);
nlohmann::json to_json(const MlpSpec& spec);

SplitParams mlp_zero_params(const MlpSpec& spec);
// Every weight and bias i.i.d. N(mean, variance).
SplitParams mlp_init(const MlpSpec& spec, double mean, double variance, RandomStream& rng);

double mlp_forward(const SplitParams& params, const MlpSpec& spec, std::span<const double> x);
// One rating per row of x.
Vector mlp_forward_batch(const SplitParams& params, const MlpSpec& spec, const Matrix& x);

// Gradient of mean_i ℓ(f(x_i), r_i) + reg into `grad` (overwritten).
// Returns the objective value.
double mlp_backward(const SplitParams& params, const MlpSpec& spec, const Matrix& x,
                    std::span<const double> targets, LossKind loss, const Regularizer& reg,
                    SplitParams& grad);

}  // namespace idlab
