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
#include <span>
#include <vector>

#include "idlab/numerics/matrix.hpp"

namespace idlab {

enum class MnistSplit { kTrain, kTest };

struct MnistImages {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<std::uint8_t> pixels;  // count × rows × cols
  std::vector<std::uint8_t> labels;

  std::size_t count() const { return labels.size(); }
  std::size_t image_size() const { return rows * cols; }
  // Pixels divided by 255, one image per row.
  Matrix images(std::span<const std::size_t> indices) const;
  Vector image(std::size_t index) const;
  std::vector<std::size_t> labels_of(std::span<const std::size_t> indices) const;
};

struct MnistStore {
  MnistImages train;
  MnistImages test;

  const MnistImages& split(MnistSplit s) const { return s == MnistSplit::kTrain ? train : test; }
};

// Raw IDX readers; magic 0x00000803 for images and 0x00000801 for labels.
MnistImages read_idx_pair(const std::filesystem::path& images, const std::filesystem::path& labels);
MnistStore load_mnist(const std::filesystem::path& dir);

// IDENTITY_LAB_MNIST_DIR, then the configured build default, then data/mnist.
std::filesystem::path default_mnist_dir();

}  // namespace idlab
