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
#include <string>
#include <vector>

#include <json.hpp>

#include "idlab/numerics/matrix.hpp"

namespace idlab {

// Examples (w, r): one input per row of `inputs`, one rating per row.
struct LabeledDataset {
  Matrix inputs;
  Vector ratings;
  std::vector<std::string> names;  // optional, one per example
  nlohmann::json metadata = nlohmann::json::object();

  std::size_t size() const { return inputs.rows(); }
  std::size_t dimension() const { return inputs.cols(); }

  void validate() const;
  Matrix gather_inputs(std::span<const std::size_t> rows) const;
  Vector gather_ratings(std::span<const std::size_t> rows) const;
  // Index of the example called `name`; throws if absent.
  std::size_t index_of(const std::string& name) const;
};

}  // namespace idlab
