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

#include <string_view>

#include "idlab/encodings/encoding.hpp"
#include "idlab/numerics/matrix.hpp"

namespace idlab {

enum class TransformClass {
  kPermutation,
  kSignedPermutation,
  kOrthogonalSymmetric,
  kOrthogonal,
  kGeneralInvertible,
};

enum class ActsOn { kLetter, kWord };
enum class WordPosition { kFirst, kSecond };

std::string_view to_string(TransformClass c);

inline constexpr double kOrthogonalityTolerance = 1e-10;
inline constexpr double kActionTolerance = 1e-8;

// Numerically measured structure of a transform matrix.
struct TransformProperties {
  double orthogonality_residual = 0.0;  // ‖TᵀT − I‖_max
  double symmetry_residual = 0.0;       // ‖T − Tᵀ‖_max
  bool signed_permutation = false;      // one ±1 per row and column, zeros elsewhere
  bool permutation = false;

  bool orthogonal() const { return orthogonality_residual <= kOrthogonalityTolerance; }
  bool symmetric_orthogonal() const {
    return orthogonal() && symmetry_residual <= kOrthogonalityTolerance;
  }
};

TransformProperties measure_transform(const Matrix& t);

// Linear map T implementing τ, with a declared class that is checked against
// the measured properties at construction.
class TransformSpec {
 public:
  TransformSpec(Matrix t, TransformClass declared, ActsOn acts_on);

  const Matrix& matrix() const noexcept { return t_; }
  TransformClass transform_class() const noexcept { return class_; }
  ActsOn acts_on() const noexcept { return acts_on_; }
  std::size_t dimension() const noexcept { return t_.rows(); }
  const TransformProperties& properties() const noexcept { return props_; }

  // Tᵀ when T is orthogonal, otherwise an LU inverse.
  Matrix inverse_matrix() const;

 private:
  Matrix t_;
  TransformClass class_;
  ActsOn acts_on_;
  TransformProperties props_;
};

// T = E·P_ab·E⁻¹ swapping the codes of symbols a and b.
TransformSpec letter_swap_transform(const EncodingScheme& scheme, Symbol a, Symbol b);

// Block-diagonal word transform acting on one letter block.
TransformSpec lift_to_word(const TransformSpec& letter_t, WordPosition position);

}  // namespace idlab
