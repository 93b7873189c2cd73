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
#include <string_view>

#include "idlab/nn/params.hpp"

namespace idlab {

enum class LossKind { kBinaryCrossEntropy, kCategoricalCrossEntropy, kMeanSquaredError };

std::string_view to_string(LossKind kind);

// BCE predictions are clamped to [kBceClamp, 1 − kBceClamp] before the log.
inline constexpr double kBceClamp = 1e-12;

// Per-example loss for a scalar rating. CCE is not scalar; use categorical_loss.
double loss_value(LossKind kind, double prediction, double target);
double categorical_loss(std::span<const double> probabilities, std::size_t label);

// dℓ/dz where prediction = sigmoid(z). For BCE this is prediction − target.
double sigmoid_output_gradient(LossKind kind, double prediction, double target);

enum class RegKind { kNone, kL2Frobenius, kL1EntrySum };

std::string_view to_string(RegKind kind);

// λ·R(C) + b_lambda·‖B‖² where R is ‖C‖²_F or Σ|C_ij|. The B term is the
// optional R₁ hook and is zero unless b_lambda > 0.
struct Regularizer {
  RegKind kind = RegKind::kNone;
  double lambda = 0.0;
  double b_lambda = 0.0;

  double value(const SplitParams& p) const;
  void add_gradient(const SplitParams& p, SplitParams& grad) const;
  bool touches_c() const { return kind != RegKind::kNone && lambda != 0.0; }
};

}  // namespace idlab
