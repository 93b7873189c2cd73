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
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "idlab/encodings/encoding.hpp"
#include "idlab/nn/model.hpp"
#include "idlab/tasks/cv.hpp"
#include "idlab/training/train.hpp"

namespace idlab {

enum class Experiment { kAlphabet, kMnist, kVerify, kAdversarial };

std::string_view to_string(Experiment e);
Experiment parse_experiment(std::string_view name);

struct ExperimentConfig {
  Experiment experiment = Experiment::kAlphabet;
  ModelKind model = ModelKind::kMlp;
  std::size_t depth = 1;
  // Alphabet encodings to run; empty means one-hot, Haar and distributed.
  std::vector<EncodingKind> encodings;
  std::size_t distributed_bits = 3;
  std::size_t trials = 40;
  std::uint64_t seed = 0;
  std::filesystem::path out = "out";

  // Unset fields take the per-model defaults below.
  std::optional<std::size_t> epochs;
  std::optional<double> step_size;
  std::optional<std::size_t> batch_size;
  std::optional<bool> dropout;
  double init_variance = 0.0025;

  // Adam with rho2 = 1; the run then stops at the first step.
  bool faithful_adam = false;
  // Single worker, fixed order.
  bool deterministic = false;
  // 0: hardware concurrency. IDENTITY_LAB_THREADS caps either.
  std::size_t threads = 0;

  // MNIST.
  std::filesystem::path mnist_dir;
  bool deja_vu = false;
  CvTrainConfig cv;
  std::size_t cv_undertrained_epochs = 1;

  // verify / adversarial.
  std::size_t verify_steps = 200;
  std::size_t adam_steps = 100;
  double ridge_lambda = 0.01;

  std::vector<EncodingKind> resolved_encodings() const;
  void validate() const;
};

nlohmann::json to_json(const ExperimentConfig& config);
// Missing keys keep their defaults; unknown keys are errors.
ExperimentConfig config_from_json(const nlohmann::json& doc);
ExperimentConfig load_config(const std::filesystem::path& path);

// Model, optimizer and schedule shape for one learner.
struct LearnerSetup {
  ModelSpec spec;
  TrainConfig train;
  std::size_t epochs = 0;
  std::size_t batch_size = 0;  // 0: full batch
};

// Alphabet: n = 26. MLP: SGD 0.025, 5000 epochs, full batch. LSTM: Adam 0.01,
// 1000 epochs, 32 units, dropout 0.75.
LearnerSetup alphabet_learner(const ExperimentConfig& config);
// Identity-effect model on CV codes: n = 10, Adam 0.01, batch 2400.
LearnerSetup ie_learner(const ExperimentConfig& config);

std::size_t worker_count(const ExperimentConfig& config);

}  // namespace idlab
