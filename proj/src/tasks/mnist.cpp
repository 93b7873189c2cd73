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

#include "idlab/tasks/mnist.hpp"

#include <cstdlib>
#include <fstream>
#include <string>

#include "idlab/error.hpp"

#ifndef IDLAB_DEFAULT_MNIST_DIR
#define IDLAB_DEFAULT_MNIST_DIR "data/mnist"
#endif

namespace idlab {

namespace {

std::vector<std::uint8_t> read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  require(static_cast<bool>(in), ErrorKind::kIoError, "cannot open " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  return bytes;
}

std::uint32_t be32(const std::vector<std::uint8_t>& b, std::size_t at, const std::string& what) {
  require(b.size() >= at + 4, ErrorKind::kIoError, what + ": truncated header");
  return (std::uint32_t{b[at]} << 24) | (std::uint32_t{b[at + 1]} << 16) |
         (std::uint32_t{b[at + 2]} << 8) | std::uint32_t{b[at + 3]};
}

}  // namespace

Matrix MnistImages::images(std::span<const std::size_t> indices) const {
  const std::size_t d = image_size();
  Matrix out(indices.size(), d);
  for (std::size_t i = 0; i < indices.size(); ++i) {
    require(indices[i] < count(), ErrorKind::kInvalidArgument, "image index out of range");
    const std::uint8_t* src = pixels.data() + indices[i] * d;
    auto dst = out.row(i);
    for (std::size_t j = 0; j < d; ++j) dst[j] = static_cast<double>(src[j]) / 255.0;
  }
  return out;
}

Vector MnistImages::image(std::size_t index) const {
  const std::size_t idx[] = {index};
  const Matrix m = images(idx);
  return Vector(m.values().begin(), m.values().end());
}

std::vector<std::size_t> MnistImages::labels_of(std::span<const std::size_t> indices) const {
  std::vector<std::size_t> out;
  out.reserve(indices.size());
  for (std::size_t i : indices) out.push_back(labels.at(i));
  return out;
}

MnistImages read_idx_pair(const std::filesystem::path& images, const std::filesystem::path& labels) {
  const auto img = read_file(images);
  const auto lab = read_file(labels);
  const std::string iname = images.filename().string();
  const std::string lname = labels.filename().string();

  const std::uint32_t img_magic = be32(img, 0, iname);
  require(img_magic == 0x00000803, ErrorKind::kFormatError,
          iname + ": bad image magic " + std::to_string(img_magic));
  const std::uint32_t lab_magic = be32(lab, 0, lname);
  require(lab_magic == 0x00000801, ErrorKind::kFormatError,
          lname + ": bad label magic " + std::to_string(lab_magic));

  const std::size_t n = be32(img, 4, iname);
  MnistImages out;
  out.rows = be32(img, 8, iname);
  out.cols = be32(img, 12, iname);
  const std::size_t n_labels = be32(lab, 4, lname);
  require(n == n_labels, ErrorKind::kFormatError,
          iname + " and " + lname + " disagree on the image count");
  const std::size_t want_img = 16 + n * out.rows * out.cols;
  require(img.size() >= want_img, ErrorKind::kIoError,
          iname + ": truncated, " + std::to_string(img.size()) + " of " +
              std::to_string(want_img) + " bytes");
  require(lab.size() >= 8 + n, ErrorKind::kIoError, lname + ": truncated");

  out.pixels.assign(img.begin() + 16, img.begin() + static_cast<std::ptrdiff_t>(want_img));
  out.labels.assign(lab.begin() + 8, lab.begin() + static_cast<std::ptrdiff_t>(8 + n));
  for (std::uint8_t l : out.labels)
    require(l <= 9, ErrorKind::kFormatError, lname + ": label out of range");
  return out;
}

MnistStore load_mnist(const std::filesystem::path& dir) {
  require(std::filesystem::is_directory(dir), ErrorKind::kIoError,
          "MNIST directory " + dir.string() + " does not exist");
  MnistStore store;
  store.train = read_idx_pair(dir / "train-images-idx3-ubyte", dir / "train-labels-idx1-ubyte");
  store.test = read_idx_pair(dir / "t10k-images-idx3-ubyte", dir / "t10k-labels-idx1-ubyte");
  return store;
}

std::filesystem::path default_mnist_dir() {
  if (const char* env = std::getenv("IDENTITY_LAB_MNIST_DIR"); env != nullptr && *env != '\0')
    return env;
  const std::filesystem::path configured = IDLAB_DEFAULT_MNIST_DIR;
  if (std::filesystem::is_directory(configured)) return configured;
  return "data/mnist";
}

}  // namespace idlab
