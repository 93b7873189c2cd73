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

#include "idlab/nn/dropout.hpp"

#include "idlab/error.hpp"

namespace idlab {

void DropoutMask::apply(Matrix& x) const {
  if (is_identity()) return;
  require(x.rows() == keep.rows() && x.cols() == keep.cols(), ErrorKind::kInvalidArgument,
          "dropout mask shape mismatch");
  auto v = x.values();
  auto k = keep.values();
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = k[i] != 0.0 ? v[i] * scale : 0.0;
}

DropoutMask sample_dropout_mask(std::size_t rows, std::size_t cols, double p, RandomStream& rng) {
  require(p >= 0.0 && p < 1.0, ErrorKind::kInvalidArgument, "dropout probability must be in [0, 1)");
  DropoutMask mask;
  mask.p = p;
  mask.scale = 1.0 / (1.0 - p);
  mask.keep = Matrix(rows, cols, 1.0);
  if (p == 0.0) return mask;
  for (double& v : mask.keep.values()) v = rng.uniform() < p ? 0.0 : 1.0;
  return mask;
}

DropoutResult apply_dropout(const Matrix& layer_output, double p, RandomStream& rng,
                            DropoutMode mode) {
  require(p >= 0.0 && p < 1.0, ErrorKind::kInvalidArgument, "dropout probability must be in [0, 1)");
  DropoutResult result{layer_output, {}};
  if (mode == DropoutMode::kEval || p == 0.0) {
    result.mask.keep = Matrix(layer_output.rows(), layer_output.cols(), 1.0);
    result.mask.p = p;
    return result;
  }
  result.mask = sample_dropout_mask(layer_output.rows(), layer_output.cols(), p, rng);
  result.mask.apply(result.output);
  return result;
}

}  // namespace idlab
