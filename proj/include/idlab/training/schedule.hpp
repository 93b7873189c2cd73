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

#include "idlab/numerics/random.hpp"

namespace idlab {

enum class ScheduleMode { kFullBatch, kShuffledEpochs };

// Index subsets Dᵢ, one per step, fixed before training starts.
class BatchSchedule {
 public:
  static BatchSchedule full_batch(std::size_t examples, std::size_t epochs);
  // Each epoch is a fresh permutation cut into batches of batch_size; the
  // last batch of an epoch may be shorter.
  static BatchSchedule shuffled(std::size_t examples, std::size_t batch_size, std::size_t epochs,
                                RandomStream rng);

  ScheduleMode mode() const noexcept { return mode_; }
  std::size_t examples() const noexcept { return examples_; }
  std::size_t epochs() const noexcept { return epochs_; }
  std::size_t batch_size() const noexcept { return batch_size_; }
  std::size_t steps_per_epoch() const noexcept { return steps_per_epoch_; }
  std::size_t steps() const noexcept { return epochs_ * steps_per_epoch_; }
  bool is_full_batch() const noexcept { return mode_ == ScheduleMode::kFullBatch; }

  std::span<const std::size_t> batch(std::size_t step) const;
  std::size_t epoch_of(std::size_t step) const { return step / steps_per_epoch_; }
  bool ends_epoch(std::size_t step) const { return (step + 1) % steps_per_epoch_ == 0; }

 private:
  BatchSchedule() = default;

  ScheduleMode mode_ = ScheduleMode::kFullBatch;
  std::size_t examples_ = 0;
  std::size_t epochs_ = 0;
  std::size_t batch_size_ = 0;
  std::size_t steps_per_epoch_ = 1;
  std::vector<std::size_t> all_;
  std::vector<std::vector<std::size_t>> orders_;  // one permutation per epoch
};

}  // namespace idlab
