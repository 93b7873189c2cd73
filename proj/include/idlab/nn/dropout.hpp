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

#include "idlab/numerics/matrix.hpp"
#include "idlab/numerics/random.hpp"

namespace idlab {

enum class DropoutMode { kTrain, kEval };

// Inverted dropout. keep holds 0/1 per entry; survivors are multiplied by
// scale = 1/(1−p). An empty keep matrix means the identity mask.
struct DropoutMask {
  Matrix keep;
  double p = 0.0;
  double scale = 1.0;

  bool is_identity() const { return keep.empty(); }
  // x ⊙ keep · scale, in place. No-op for the identity mask.
  void apply(Matrix& x) const;
};

struct DropoutResult {
  Matrix output;
  DropoutMask mask;
};

DropoutMask sample_dropout_mask(std::size_t rows, std::size_t cols, double p, RandomStream& rng);

// Eval, or p = 0, returns the input unchanged and an all-ones mask.
DropoutResult apply_dropout(const Matrix& layer_output, double p, RandomStream& rng,
                            DropoutMode mode);

}  // namespace idlab
