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
#include <functional>
#include <string>
#include <vector>

#include "idlab/numerics/matrix.hpp"

namespace idlab {

struct ParamBlock {
  std::string name;
  Matrix value;

  friend bool operator==(const ParamBlock&, const ParamBlock&) = default;
};

// Parameters split into the input weights C and everything else (B).
struct SplitParams {
  std::string c_name = "C";
  Matrix c;
  std::vector<ParamBlock> b;

  std::size_t scalar_count() const;
  // Same shapes and names, all entries zero.
  SplitParams zeros_like() const;
  // Flat concatenation in declared order: C first, then each B block.
  Vector flatten() const;
  void unflatten(std::span<const double> values);

  Matrix& block(const std::string& name);
  const Matrix& block(const std::string& name) const;

  // this += scale * other, blockwise.
  void axpy(double scale, const SplitParams& other);
  void scale(double factor);
  bool same_shape(const SplitParams& other) const;

  // Visits C then each B block: fn(name, matrix).
  void for_each(const std::function<void(const std::string&, Matrix&)>& fn);
  void for_each(const std::function<void(const std::string&, const Matrix&)>& fn) const;

  friend bool operator==(const SplitParams&, const SplitParams&) = default;
};

// Largest |a − b| over B blocks only.
double max_abs_diff_b(const SplitParams& a, const SplitParams& b);
double max_abs_diff(const SplitParams& a, const SplitParams& b);
bool all_finite(const SplitParams& p);

}  // namespace idlab
