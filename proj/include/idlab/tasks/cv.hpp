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

#include "idlab/nn/convnet.hpp"
#include "idlab/numerics/random.hpp"
#include "idlab/tasks/mnist.hpp"
#include "idlab/training/optimizer.hpp"
#include "idlab/training/train.hpp"

namespace idlab {

struct CvTrainConfig {
  ConvNetSpec spec;
  std::size_t subset = 12000;    // training images from the train split; 0 keeps all
  std::size_t held_out = 10000;  // test-split images scored after each epoch; 0 keeps all
  std::size_t epochs = 12;
  std::size_t batch_size = 128;
  double lr = 1.0;
  AdadeltaSettings adadelta{0.95, 1e-7};
  bool keep_snapshots = true;

  nlohmann::json to_json() const;
};

struct CvTrainResult {
  SplitParams params;
  std::vector<SplitParams> snapshots;  // params after epoch e at index e − 1
  std::vector<EpochLoss> losses;       // test = held-out categorical cross-entropy
  std::vector<double> held_out_accuracy;
  std::vector<std::size_t> train_indices;
  std::vector<std::size_t> held_out_indices;

  // 1-based epoch with the lowest held-out loss.
  std::size_t best_epoch() const;
  const SplitParams& params_at(std::size_t epoch) const;
};

// Categorical cross-entropy, Adadelta, shuffled batches, Glorot-uniform
// kernels and zero biases; dropout active during training.
CvTrainResult train_cv_model(const MnistStore& store, const CvTrainConfig& config,
                             const RandomStream& rng);

struct CvScore {
  double loss = 0.0;
  double accuracy = 0.0;
};

CvScore score_cv_model(const SplitParams& params, const ConvNetSpec& spec,
                       const MnistImages& images, std::span<const std::size_t> indices);

// Softmax output of the CV model.
Vector cv_encode(const SplitParams& params, const ConvNetSpec& spec, std::span<const double> image);
Matrix cv_encode(const SplitParams& params, const ConvNetSpec& spec, const MnistImages& images,
                 std::span<const std::size_t> indices);

}  // namespace idlab
