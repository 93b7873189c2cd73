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

#include "idlab/nn/model.hpp"

#include <string>

#include "idlab/error.hpp"

namespace idlab {

ModelKind model_kind(const ModelSpec& spec) {
  return std::holds_alternative<MlpSpec>(spec) ? ModelKind::kMlp : ModelKind::kLstm;
}

std::string_view to_string(ModelKind kind) { return kind == ModelKind::kMlp ? "mlp" : "lstm"; }

ModelKind parse_model_kind(std::string_view name) {
  if (name == "mlp") return ModelKind::kMlp;
  if (name == "lstm") return ModelKind::kLstm;
  fail(ErrorKind::kInvalidArgument, "unknown model '" + std::string(name) + "'");
}

std::size_t depth_of(const ModelSpec& spec) {
  if (const auto* m = std::get_if<MlpSpec>(&spec)) return m->depth;
  return std::get<LstmSpec>(spec).layers;
}

std::size_t input_dim(const ModelSpec& spec) {
  if (const auto* m = std::get_if<MlpSpec>(&spec)) return m->input_dim;
  return 2 * std::get<LstmSpec>(spec).step_dim;
}

nlohmann::json to_json(const ModelSpec& spec) {
  return std::visit([](const auto& s) { return to_json(s); }, spec);
}

ModelSpec model_spec_from_json(const nlohmann::json& doc) {
  try {
    const std::string model = doc.at("model").get<std::string>();
    if (model == "mlp") {
      MlpSpec s;
      s.input_dim = doc.at("input_dim").get<std::size_t>();
      s.depth = doc.at("depth").get<std::size_t>();
      s.width = doc.at("width").get<std::size_t>();
      validate(s);
      return s;
    }
    if (model == "lstm") {
      LstmSpec s;
      s.step_dim = doc.at("step_dim").get<std::size_t>();
      s.layers = doc.at("layers").get<std::size_t>();
      s.units = doc.at("units").get<std::size_t>();
      s.dropout = doc.at("dropout").get<double>();
      validate(s);
      return s;
    }
    fail(ErrorKind::kFormatError, "unknown model descriptor '" + model + "'");
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::kFormatError, std::string("bad model descriptor: ") + e.what());
  }
}

SplitParams init_model(const ModelSpec& spec, double mean, double variance, RandomStream& rng) {
  if (const auto* m = std::get_if<MlpSpec>(&spec)) return mlp_init(*m, mean, variance, rng);
  return lstm_init(std::get<LstmSpec>(spec), mean, variance, rng);
}

Vector predict(const ModelSpec& spec, const SplitParams& params, const Matrix& inputs) {
  if (const auto* m = std::get_if<MlpSpec>(&spec)) return mlp_forward_batch(params, *m, inputs);
  return lstm_forward_batch(params, std::get<LstmSpec>(spec), inputs, nullptr);
}

bool uses_dropout(const ModelSpec& spec) {
  const auto* l = std::get_if<LstmSpec>(&spec);
  return l != nullptr && l->dropout > 0.0;
}

double objective_gradient(const ModelSpec& spec, const SplitParams& params, const Matrix& inputs,
                          std::span<const double> targets, LossKind loss, const Regularizer& reg,
                          RandomStream* dropout_rng, SplitParams& grad) {
  if (const auto* m = std::get_if<MlpSpec>(&spec))
    return mlp_backward(params, *m, inputs, targets, loss, reg, grad);
  const auto& l = std::get<LstmSpec>(spec);
  if (dropout_rng != nullptr && l.dropout > 0.0) {
    const LstmMasks masks = sample_lstm_masks(l, inputs.rows(), *dropout_rng);
    return lstm_backward(params, l, inputs, targets, loss, reg, &masks, grad);
  }
  return lstm_backward(params, l, inputs, targets, loss, reg, nullptr, grad);
}

}  // namespace idlab
