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

#include "idlab/training/objective.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "idlab/error.hpp"

namespace idlab {

std::string_view to_string(LossKind kind) {
  switch (kind) {
    case LossKind::kBinaryCrossEntropy: return "bce";
    case LossKind::kCategoricalCrossEntropy: return "cce";
    case LossKind::kMeanSquaredError: return "mse";
  }
  return "unknown";
}

std::string_view to_string(RegKind kind) {
  switch (kind) {
    case RegKind::kNone: return "none";
    case RegKind::kL2Frobenius: return "l2";
    case RegKind::kL1EntrySum: return "l1";
  }
  return "unknown";
}

double loss_value(LossKind kind, double prediction, double target) {
  switch (kind) {
    case LossKind::kBinaryCrossEntropy: {
      const double f = std::clamp(prediction, kBceClamp, 1.0 - kBceClamp);
      return -target * std::log(f) - (1.0 - target) * std::log(1.0 - f);
    }
    case LossKind::kMeanSquaredError: {
      const double d = prediction - target;
      return d * d;
    }
    case LossKind::kCategoricalCrossEntropy:
      break;
  }
  fail(ErrorKind::kInvalidArgument, "categorical loss needs a probability vector");
}

double categorical_loss(std::span<const double> probabilities, std::size_t label) {
  require(label < probabilities.size(), ErrorKind::kInvalidArgument, "class label out of range");
  return -std::log(std::max(probabilities[label], kBceClamp));
}

double sigmoid_output_gradient(LossKind kind, double prediction, double target) {
  switch (kind) {
    case LossKind::kBinaryCrossEntropy:
      return prediction - target;
    case LossKind::kMeanSquaredError:
      return 2.0 * (prediction - target) * prediction * (1.0 - prediction);
    case LossKind::kCategoricalCrossEntropy:
      break;
  }
  fail(ErrorKind::kInvalidArgument, "categorical loss has no scalar sigmoid output");
}

double Regularizer::value(const SplitParams& p) const {
  require(lambda >= 0.0 && b_lambda >= 0.0, ErrorKind::kInvalidArgument,
          "regularization weights must be nonnegative");
  double total = 0.0;
  if (touches_c()) {
    double s = 0.0;
    for (double v : p.c.values()) s += kind == RegKind::kL2Frobenius ? v * v : std::abs(v);
    total += lambda * s;
  }
  if (b_lambda != 0.0) {
    double s = 0.0;
    for (const auto& blk : p.b)
      for (double v : blk.value.values()) s += v * v;
    total += b_lambda * s;
  }
  return total;
}

void Regularizer::add_gradient(const SplitParams& p, SplitParams& grad) const {
  if (touches_c()) {
    auto g = grad.c.values();
    auto c = p.c.values();
    for (std::size_t i = 0; i < g.size(); ++i) {
      if (kind == RegKind::kL2Frobenius) {
        g[i] += 2.0 * lambda * c[i];
      } else {
        // Subgradient sign(0) = 0.
        g[i] += lambda * static_cast<double>((c[i] > 0.0) - (c[i] < 0.0));
      }
    }
  }
  if (b_lambda != 0.0) {
    for (std::size_t k = 0; k < p.b.size(); ++k) {
      auto g = grad.b[k].value.values();
      auto v = p.b[k].value.values();
      for (std::size_t i = 0; i < g.size(); ++i) g[i] += 2.0 * b_lambda * v[i];
    }
  }
}

}  // namespace idlab
