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

#include "idlab/training/schedule.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "idlab/error.hpp"

namespace idlab {

BatchSchedule BatchSchedule::full_batch(std::size_t examples, std::size_t epochs) {
  require(examples > 0, ErrorKind::kInvalidArgument, "schedule needs at least one example");
  BatchSchedule s;
  s.mode_ = ScheduleMode::kFullBatch;
  s.examples_ = examples;
  s.epochs_ = epochs;
  s.batch_size_ = examples;
  s.steps_per_epoch_ = 1;
  s.all_.resize(examples);
  std::iota(s.all_.begin(), s.all_.end(), std::size_t{0});
  return s;
}

BatchSchedule BatchSchedule::shuffled(std::size_t examples, std::size_t batch_size,
                                      std::size_t epochs, RandomStream rng) {
  require(examples > 0 && batch_size > 0, ErrorKind::kInvalidArgument,
          "schedule needs examples and a positive batch size");
  BatchSchedule s;
  s.mode_ = ScheduleMode::kShuffledEpochs;
  s.examples_ = examples;
  s.epochs_ = epochs;
  s.batch_size_ = std::min(batch_size, examples);
  s.steps_per_epoch_ = (examples + s.batch_size_ - 1) / s.batch_size_;
  s.orders_.reserve(epochs);
  for (std::size_t e = 0; e < epochs; ++e) {
    std::vector<std::size_t> order(examples);
    std::iota(order.begin(), order.end(), std::size_t{0});
    RandomStream epoch_rng = rng.split("epoch", e);
    epoch_rng.shuffle(std::span<std::size_t>(order));
    s.orders_.push_back(std::move(order));
  }
  return s;
}

std::span<const std::size_t> BatchSchedule::batch(std::size_t step) const {
  require(step < steps(), ErrorKind::kInvalidArgument,
          "step " + std::to_string(step) + " is past the schedule");
  if (mode_ == ScheduleMode::kFullBatch) return all_;
  const auto& order = orders_[epoch_of(step)];
  const std::size_t begin = (step % steps_per_epoch_) * batch_size_;
  const std::size_t end = std::min(begin + batch_size_, examples_);
  return std::span<const std::size_t>(order).subspan(begin, end - begin);
}

}  // namespace idlab
