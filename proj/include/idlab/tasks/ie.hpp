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

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "idlab/nn/convnet.hpp"
#include "idlab/numerics/random.hpp"
#include "idlab/tasks/dataset.hpp"
#include "idlab/tasks/mnist.hpp"

namespace idlab {

inline const std::array<std::string, 10> kIeTestPairs = {"XX", "XY", "X'X'", "X'Y'", "88",
                                                         "89", "98", "99",   "X'8",  "X'9"};
inline constexpr std::array<double, 10> kIeTestRatings = {1, 0, 1, 0, 1, 0, 0, 1, 0, 0};
inline constexpr std::size_t kIePoolPerDigit = 10;
inline constexpr std::size_t kIePoolDigits = 8;  // 0..7
inline constexpr std::size_t kIeNonidentical = 1600;

// Which images form the pairs. Indices refer to `source`.
struct IeSelection {
  MnistSplit source = MnistSplit::kTest;
  std::vector<std::size_t> pool;  // 10 per digit, digit-major
  std::vector<std::pair<std::size_t, std::size_t>> train_pairs;
  std::vector<double> train_ratings;
  // X, Y, X′, Y′, 8, 9.
  std::array<std::size_t, 6> test_images{};

  std::vector<std::pair<std::size_t, std::size_t>> test_pairs() const;
  nlohmann::json manifest() const;
};

// Pool of 80 images (digits 0..7) from the test split; all 800 identical
// ordered pairs; 1600 of the 5600 nonidentical ordered pairs drawn uniformly
// without replacement. With deja_vu, images come from `deja_vu_candidates`
// in the train split instead.
IeSelection select_ie_images(const MnistStore& store, RandomStream& rng, bool deja_vu = false,
                             std::span<const std::size_t> deja_vu_candidates = {});

struct IeSplits {
  LabeledDataset train;  // 2400 × 20
  LabeledDataset test;   // 10 named pairs
};

// Each pair becomes [E_cv(a); E_cv(b)].
IeSplits encode_ie_splits(const IeSelection& selection, const SplitParams& cv_params,
                          const ConvNetSpec& spec, const MnistStore& store);

IeSplits build_ie_splits(const SplitParams& cv_params, const ConvNetSpec& spec,
                         const MnistStore& store, RandomStream& rng, bool deja_vu = false,
                         std::span<const std::size_t> deja_vu_candidates = {});

// Hex FNV-1a digest of an index list.
std::string index_digest(std::span<const std::size_t> indices);

}  // namespace idlab
