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

#include "idlab/tasks/dataset.hpp"

#include <algorithm>

#include "idlab/error.hpp"

namespace idlab {

void LabeledDataset::validate() const {
  require(ratings.size() == inputs.rows(), ErrorKind::kInvalidArgument,
          "dataset needs one rating per input row");
  require(names.empty() || names.size() == inputs.rows(), ErrorKind::kInvalidArgument,
          "dataset names must be empty or one per example");
  require(all_finite(inputs), ErrorKind::kInvalidArgument, "dataset inputs must be finite");
}

Matrix LabeledDataset::gather_inputs(std::span<const std::size_t> rows) const {
  Matrix out(rows.size(), inputs.cols());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    require(rows[i] < inputs.rows(), ErrorKind::kInvalidArgument, "batch index out of range");
    const auto src = inputs.row(rows[i]);
    std::copy(src.begin(), src.end(), out.row(i).begin());
  }
  return out;
}

Vector LabeledDataset::gather_ratings(std::span<const std::size_t> rows) const {
  Vector out(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) out[i] = ratings.at(rows[i]);
  return out;
}

std::size_t LabeledDataset::index_of(const std::string& name) const {
  const auto it = std::find(names.begin(), names.end(), name);
  require(it != names.end(), ErrorKind::kInvalidArgument, "no example named '" + name + "'");
  return static_cast<std::size_t>(it - names.begin());
}

}  // namespace idlab
