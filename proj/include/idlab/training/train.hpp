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
#include <optional>
#include <vector>

#include "idlab/nn/model.hpp"
#include "idlab/nn/params.hpp"
#include "idlab/numerics/random.hpp"
#include "idlab/tasks/dataset.hpp"
#include "idlab/training/objective.hpp"
#include "idlab/training/optimizer.hpp"
#include "idlab/training/schedule.hpp"

namespace idlab {

struct TrainConfig {
  OptimizerConfig optimizer;
  LossKind loss = LossKind::kBinaryCrossEntropy;
  Regularizer reg;
  double init_mean = 0.0;
  double init_variance = 0.0025;
  // Training-mode dropout for models that have it. Off in verification.
  bool dropout = true;
  // Keep every k-th step's params (0: none). Step 0 is the initialization.
  std::size_t trajectory_stride = 0;
};

struct EpochLoss {
  std::size_t epoch = 0;  // 1-based
  double train = 0.0;     // size-weighted mean of the epoch's batch objectives
  std::optional<double> test;
};

struct TrainResult {
  SplitParams params;
  OptimizerState state;
  std::vector<SplitParams> trajectory;
  std::vector<std::size_t> trajectory_steps;
  std::vector<EpochLoss> losses;
};

// One optimizer step at a time so that coupled runs can advance in lockstep.
class Trainer {
 public:
  Trainer(ModelSpec spec, SplitParams init, const LabeledDataset& data,
          const BatchSchedule& schedule, TrainConfig config, RandomStream dropout_rng);

  bool done() const { return step_ >= schedule_->steps(); }
  std::size_t step_index() const { return step_; }
  // Runs step i; returns the batch objective evaluated before the update.
  // Throws divergence on a non-finite objective or parameter.
  double step();

  const SplitParams& params() const { return params_; }
  const OptimizerState& state() const { return state_; }
  const SplitParams& last_gradient() const { return grad_; }
  const ModelSpec& spec() const { return spec_; }

 private:
  ModelSpec spec_;
  SplitParams params_;
  SplitParams grad_;
  OptimizerState state_;
  const LabeledDataset* data_;
  const BatchSchedule* schedule_;
  TrainConfig config_;
  RandomStream dropout_rng_;
  std::size_t step_ = 0;
};

// Mean loss on a dataset in evaluation mode, no regularizer.
double dataset_loss(const ModelSpec& spec, const SplitParams& params, const LabeledDataset& data,
                    LossKind loss);

// Draws the initialization from rng.split("init") and dropout masks from
// rng.split("dropout").
TrainResult train(const ModelSpec& spec, const RandomStream& rng, const LabeledDataset& data,
                  const BatchSchedule& schedule, const TrainConfig& config,
                  const LabeledDataset* test = nullptr);

TrainResult train_from(const ModelSpec& spec, SplitParams init, const RandomStream& rng,
                       const LabeledDataset& data, const BatchSchedule& schedule,
                       const TrainConfig& config, const LabeledDataset* test = nullptr);

}  // namespace idlab
