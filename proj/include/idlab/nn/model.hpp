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
#include <string>
#include <variant>

#include <json.hpp>

#include "idlab/nn/lstm.hpp"
#include "idlab/nn/mlp.hpp"

namespace idlab {

// The two rating models used on word pairs.
using ModelSpec = std::variant<MlpSpec, LstmSpec>;

enum class ModelKind { kMlp, kLstm };

ModelKind model_kind(const ModelSpec& spec);
std::string_view to_string(ModelKind kind);
ModelKind parse_model_kind(std::string_view name);
std::size_t depth_of(const ModelSpec& spec);
// Word-vector length the model reads.
std::size_t input_dim(const ModelSpec& spec);
nlohmann::json to_json(const ModelSpec& spec);
ModelSpec model_spec_from_json(const nlohmann::json& doc);

// Gaussian init for all weights and biases (LSTM recurrent kernels orthogonal).
SplitParams init_model(const ModelSpec& spec, double mean, double variance, RandomStream& rng);

Vector predict(const ModelSpec& spec, const SplitParams& params, const Matrix& inputs);

// Objective and gradient on one batch. Dropout applies to LSTM layer outputs
// only when dropout_rng is given.
double objective_gradient(const ModelSpec& spec, const SplitParams& params, const Matrix& inputs,
                          std::span<const double> targets, LossKind loss, const Regularizer& reg,
                          RandomStream* dropout_rng, SplitParams& grad);

bool uses_dropout(const ModelSpec& spec);

}  // namespace idlab
