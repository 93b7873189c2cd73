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

#include <json.hpp>

#include "idlab/encodings/transform.hpp"
#include "idlab/invariance/invariance.hpp"
#include "idlab/numerics/matrix.hpp"
#include "idlab/numerics/random.hpp"
#include "idlab/tasks/dataset.hpp"

namespace idlab {

inline constexpr double kAdversarialTolerance = 1e-10;

struct AdversarialResiduals {
  double orthonormality = 0.0;  // α, β unit and mutually orthogonal
  double complement = 0.0;      // max |xᵢ·α|, |xᵢ·β|
  double fixes_basis = 0.0;     // max |T xᵢ − xᵢ|
  double swaps_pair = 0.0;      // max(|Tα − β|, |Tβ − α|)
  double orthogonality = 0.0;   // ‖TᵀT − I‖
  double symmetry = 0.0;        // ‖T − Tᵀ‖

  double max() const;
};

struct AdversarialInstance {
  Matrix basis;  // m × k, one training-letter code per column
  Vector alpha;
  Vector beta;
  Matrix t;       // letter-level m × m
  Vector w_same;  // (α, α)
  Vector w_diff;  // (α, β)
  AdversarialResiduals residuals;

  std::size_t dimension() const { return alpha.size(); }
  TransformSpec letter_transform() const;
  // T on the second-letter block, identity on the first.
  TransformSpec word_transform() const;
};

// α, β orthonormal and orthogonal to the columns of `encodings`;
// T = I − ααᵀ − ββᵀ + αβᵀ + βαᵀ.
AdversarialInstance build_adversarial(const Matrix& encodings);

// Alphabet-style training set over the basis letters: every identical pair
// plus `nonidentical` distinct ordered pairs drawn without replacement.
LabeledDataset adversarial_dataset(const AdversarialInstance& instance, RandomStream& rng,
                                   std::size_t nonidentical);

struct AdversarialVerification {
  double rating_same = 0.0;
  double rating_diff = 0.0;
  double deviation = 0.0;
  double data_residual = 0.0;
  CouplingReport report;
};

AdversarialVerification verify_adversarial_ridge(const AdversarialInstance& instance,
                                                 const LabeledDataset& data, double lambda);
// Coupled SGD check with the word transform; deviation is across the pair.
AdversarialVerification verify_adversarial_sgd(const AdversarialInstance& instance,
                                               const LabeledDataset& data, const MlpSpec& spec,
                                               const CouplingConfig& config);

// Random Gaussian codes, m × k, full column rank.
Matrix random_encodings(std::size_t m, std::size_t k, RandomStream& rng);

nlohmann::json to_json(const AdversarialInstance& instance);
nlohmann::json to_json(const AdversarialVerification& v);

}  // namespace idlab
