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

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include <json.hpp>

#include "idlab/nn/dropout.hpp"
#include "idlab/nn/params.hpp"
#include "idlab/numerics/random.hpp"
#include "idlab/training/objective.hpp"

namespace idlab {

// Stacked LSTM over a length-2 sequence (u, v) followed by one sigmoid unit
// reading the last hidden state. Gate rows are ordered i, f, g, o; h and c
// start at zero. C is the first layer's input kernel (4·units × step_dim) and
// multiplies both u and v. B holds U1, b1, then (W_l, U_l, b_l) for deeper
// layers, then w_out, b_out.
struct LstmSpec {
  std::size_t step_dim = 26;
  std::size_t layers = 1;
  std::size_t units = 32;
  double dropout = 0.75;
};

void validate(const LstmSpec& spec);
nlohmann::json to_json(const LstmSpec& spec);

SplitParams lstm_zero_params(const LstmSpec& spec);
// Input kernels and biases N(mean, variance); recurrent kernels orthogonal.
SplitParams lstm_init(const LstmSpec& spec, double mean, double variance, RandomStream& rng);

// Masks on layer outputs, indexed [layer][step]; each is batch × units.
struct LstmMasks {
  std::vector<std::array<DropoutMask, 2>> layers;
};

LstmMasks sample_lstm_masks(const LstmSpec& spec, std::size_t batch, RandomStream& rng);

double lstm_forward(const SplitParams& params, const LstmSpec& spec, std::span<const double> u,
                    std::span<const double> v, const LstmMasks* masks = nullptr);
// Rows of x are [u ; v] (2·step_dim entries).
Vector lstm_forward_batch(const SplitParams& params, const LstmSpec& spec, const Matrix& x,
                          const LstmMasks* masks = nullptr);

// Contributions to ∂F/∂C from the first and second time step; they sum to grad.c.
struct LstmStepPartials {
  Matrix first;
  Matrix second;
};

double lstm_backward(const SplitParams& params, const LstmSpec& spec, const Matrix& x,
                     std::span<const double> targets, LossKind loss, const Regularizer& reg,
                     const LstmMasks* masks, SplitParams& grad,
                     LstmStepPartials* partials = nullptr);

}  // namespace idlab
