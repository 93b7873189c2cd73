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

#include <span>

#include <json.hpp>

#include "idlab/numerics/matrix.hpp"
#include "idlab/tasks/dataset.hpp"

namespace idlab {

// r ≈ c·w + bias.
struct LinearModel {
  Vector c;
  double bias = 0.0;

  double predict(std::span<const double> w) const;
  Vector predict(const Matrix& inputs) const;
};

// Unique least-squares fit; throws no-unique-minimizer when [X 1] is
// rank-deficient.
LinearModel ols_learner(const LabeledDataset& data);

// Minimizer of mean squared error + λ‖c‖² with the bias unpenalized.
LinearModel ridge_learner(const LabeledDataset& data, double lambda);

double ridge_objective(const LinearModel& model, const LabeledDataset& data, double lambda);
// Gradient of ridge_objective; the last entry is the bias component.
Vector ridge_gradient(const LinearModel& model, const LabeledDataset& data, double lambda);

nlohmann::json to_json(const LinearModel& model);

}  // namespace idlab
