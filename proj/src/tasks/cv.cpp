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

#include "idlab/tasks/cv.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "idlab/error.hpp"
#include "idlab/training/objective.hpp"

namespace idlab {

nlohmann::json CvTrainConfig::to_json() const {
  return {{"spec", idlab::to_json(spec)},  {"subset", subset},
          {"held_out", held_out},          {"epochs", epochs},
          {"batch_size", batch_size},      {"lr", lr},
          {"rho", adadelta.rho},           {"eps", adadelta.eps}};
}

std::size_t CvTrainResult::best_epoch() const {
  require(!losses.empty(), ErrorKind::kInvalidArgument, "no epochs recorded");
  std::size_t best = 0;
  for (std::size_t e = 1; e < losses.size(); ++e)
    if (*losses[e].test < *losses[best].test) best = e;
  return best + 1;
}

const SplitParams& CvTrainResult::params_at(std::size_t epoch) const {
  require(epoch >= 1 && epoch <= snapshots.size(), ErrorKind::kInvalidArgument,
          "no snapshot for epoch " + std::to_string(epoch));
  return snapshots[epoch - 1];
}

namespace {

std::vector<std::size_t> pick(std::size_t total, std::size_t want, RandomStream rng) {
  if (want == 0 || want >= total) {
    std::vector<std::size_t> all(total);
    std::iota(all.begin(), all.end(), std::size_t{0});
    return all;
  }
  std::vector<std::size_t> out = rng.sample_without_replacement(total, want);
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

CvScore score_cv_model(const SplitParams& params, const ConvNetSpec& spec,
                       const MnistImages& images, std::span<const std::size_t> indices) {
  require(!indices.empty(), ErrorKind::kInvalidArgument, "nothing to score");
  CvScore score;
  constexpr std::size_t kChunk = 500;
  std::size_t correct = 0;
  for (std::size_t begin = 0; begin < indices.size(); begin += kChunk) {
    const auto part = indices.subspan(begin, std::min(kChunk, indices.size() - begin));
    const Matrix probs = convnet_forward_batch(params, spec, images.images(part));
    for (std::size_t i = 0; i < part.size(); ++i) {
      const auto p = probs.row(i);
      const std::size_t label = images.labels[part[i]];
      score.loss += categorical_loss(p, label);
      const auto top = static_cast<std::size_t>(std::max_element(p.begin(), p.end()) - p.begin());
      correct += top == label ? 1 : 0;
    }
  }
  score.loss /= static_cast<double>(indices.size());
  score.accuracy = static_cast<double>(correct) / static_cast<double>(indices.size());
  return score;
}

CvTrainResult train_cv_model(const MnistStore& store, const CvTrainConfig& config,
                             const RandomStream& rng) {
  require(config.epochs >= 1, ErrorKind::kInvalidArgument, "CV training needs at least one epoch");
  validate(config.spec);
  require(store.train.image_size() == config.spec.image_size * config.spec.image_size,
          ErrorKind::kInvalidArgument, "image size does not match the CV model");

  CvTrainResult result;
  result.train_indices = pick(store.train.count(), config.subset, rng.split("cv-subset"));
  result.held_out_indices = pick(store.test.count(), config.held_out, rng.split("cv-held-out"));

  RandomStream init_rng = rng.split("cv-init");
  SplitParams params = convnet_init(config.spec, init_rng);
  SplitParams grad = params.zeros_like();
  OptimizerState state = zero_state(params);
  RandomStream dropout_rng = rng.split("cv-dropout");

  const BatchSchedule schedule =
      BatchSchedule::shuffled(result.train_indices.size(), config.batch_size, config.epochs,
                              rng.split("cv-batches"));
  double epoch_sum = 0.0;
  std::size_t epoch_count = 0;
  std::vector<std::size_t> rows;
  for (std::size_t step = 0; step < schedule.steps(); ++step) {
    rows.clear();
    for (std::size_t k : schedule.batch(step)) rows.push_back(result.train_indices[k]);
    const Matrix x = store.train.images(rows);
    const std::vector<std::size_t> labels = store.train.labels_of(rows);
    const double loss = convnet_backward(params, config.spec, x, labels, &dropout_rng, grad);
    if (!std::isfinite(loss) || !all_finite(grad)) {
      fail(ErrorKind::kDivergence, "CV training diverged at step " + std::to_string(step) +
                                       " (epoch " + std::to_string(schedule.epoch_of(step) + 1) +
                                       ")");
    }
    adadelta_step(params, grad, state, config.lr, config.adadelta);
    epoch_sum += loss * static_cast<double>(rows.size());
    epoch_count += rows.size();
    if (schedule.ends_epoch(step)) {
      const CvScore held = score_cv_model(params, config.spec, store.test, result.held_out_indices);
      EpochLoss row;
      row.epoch = schedule.epoch_of(step) + 1;
      row.train = epoch_sum / static_cast<double>(epoch_count);
      row.test = held.loss;
      result.losses.push_back(row);
      result.held_out_accuracy.push_back(held.accuracy);
      if (config.keep_snapshots) result.snapshots.push_back(params);
      epoch_sum = 0.0;
      epoch_count = 0;
    }
  }
  result.params = std::move(params);
  return result;
}

Vector cv_encode(const SplitParams& params, const ConvNetSpec& spec, std::span<const double> image) {
  return convnet_forward(params, spec, image);
}

Matrix cv_encode(const SplitParams& params, const ConvNetSpec& spec, const MnistImages& images,
                 std::span<const std::size_t> indices) {
  return convnet_forward_batch(params, spec, images.images(indices));
}

}  // namespace idlab
