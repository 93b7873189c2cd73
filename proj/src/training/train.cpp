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

#include "idlab/training/train.hpp"

#include <cmath>
#include <string>

#include "idlab/error.hpp"

namespace idlab {

Trainer::Trainer(ModelSpec spec, SplitParams init, const LabeledDataset& data,
                 const BatchSchedule& schedule, TrainConfig config, RandomStream dropout_rng)
    : spec_(std::move(spec)),
      params_(std::move(init)),
      data_(&data),
      schedule_(&schedule),
      config_(std::move(config)),
      dropout_rng_(std::move(dropout_rng)) {
  data.validate();
  config_.optimizer.validate();
  require(schedule.examples() == data.size(), ErrorKind::kInvalidArgument,
          "schedule covers " + std::to_string(schedule.examples()) + " examples, dataset has " +
              std::to_string(data.size()));
  require(input_dim(spec_) == data.dimension(), ErrorKind::kInvalidArgument,
          "model input dimension does not match the dataset");
  require(config_.optimizer.step_schedule.empty() ||
              config_.optimizer.step_schedule.size() >= schedule.steps(),
          ErrorKind::kInvalidArgument, "step-size schedule is shorter than the batch schedule");
  grad_ = params_.zeros_like();
  state_ = zero_state(params_);
}

double Trainer::step() {
  require(!done(), ErrorKind::kInvalidArgument, "training schedule is exhausted");
  const auto rows = schedule_->batch(step_);
  RandomStream* rng = config_.dropout && uses_dropout(spec_) ? &dropout_rng_ : nullptr;
  double objective = 0.0;
  if (schedule_->is_full_batch()) {
    objective = objective_gradient(spec_, params_, data_->inputs, data_->ratings, config_.loss,
                                   config_.reg, rng, grad_);
  } else {
    const Matrix x = data_->gather_inputs(rows);
    const Vector r = data_->gather_ratings(rows);
    objective = objective_gradient(spec_, params_, x, r, config_.loss, config_.reg, rng, grad_);
  }
  if (!std::isfinite(objective) || !all_finite(grad_)) {
    fail(ErrorKind::kDivergence, "non-finite objective " + std::to_string(objective) +
                                     " at step " + std::to_string(step_) + " (epoch " +
                                     std::to_string(schedule_->epoch_of(step_) + 1) + ")");
  }
  optimizer_step(params_, grad_, state_, config_.optimizer);
  require(all_finite(params_), ErrorKind::kDivergence,
          "parameters became non-finite at step " + std::to_string(step_));
  ++step_;
  return objective;
}

double dataset_loss(const ModelSpec& spec, const SplitParams& params, const LabeledDataset& data,
                    LossKind loss) {
  require(data.size() > 0, ErrorKind::kInvalidArgument, "empty dataset");
  const Vector f = predict(spec, params, data.inputs);
  double total = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) total += loss_value(loss, f[i], data.ratings[i]);
  return total / static_cast<double>(f.size());
}

TrainResult train(const ModelSpec& spec, const RandomStream& rng, const LabeledDataset& data,
                  const BatchSchedule& schedule, const TrainConfig& config,
                  const LabeledDataset* test) {
  RandomStream init_rng = rng.split("init");
  SplitParams init = init_model(spec, config.init_mean, config.init_variance, init_rng);
  return train_from(spec, std::move(init), rng, data, schedule, config, test);
}

TrainResult train_from(const ModelSpec& spec, SplitParams init, const RandomStream& rng,
                       const LabeledDataset& data, const BatchSchedule& schedule,
                       const TrainConfig& config, const LabeledDataset* test) {
  TrainResult result;
  if (config.trajectory_stride > 0) {
    result.trajectory.push_back(init);
    result.trajectory_steps.push_back(0);
  }
  Trainer trainer(spec, std::move(init), data, schedule, config, rng.split("dropout"));
  double epoch_sum = 0.0;
  std::size_t epoch_count = 0;
  while (!trainer.done()) {
    const std::size_t i = trainer.step_index();
    const std::size_t batch = schedule.batch(i).size();
    epoch_sum += trainer.step() * static_cast<double>(batch);
    epoch_count += batch;
    if (config.trajectory_stride > 0 && (i + 1) % config.trajectory_stride == 0) {
      result.trajectory.push_back(trainer.params());
      result.trajectory_steps.push_back(i + 1);
    }
    if (schedule.ends_epoch(i)) {
      EpochLoss row;
      row.epoch = schedule.epoch_of(i) + 1;
      row.train = epoch_sum / static_cast<double>(epoch_count);
      if (test != nullptr) row.test = dataset_loss(spec, trainer.params(), *test, config.loss);
      result.losses.push_back(row);
      epoch_sum = 0.0;
      epoch_count = 0;
    }
  }
  result.params = trainer.params();
  result.state = trainer.state();
  return result;
}

}  // namespace idlab
