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

#include "idlab/encodings/transform.hpp"

#include <cmath>
#include <string>

#include "idlab/error.hpp"
#include "idlab/numerics/linalg.hpp"

namespace idlab {

std::string_view to_string(TransformClass c) {
  switch (c) {
    case TransformClass::kPermutation: return "permutation";
    case TransformClass::kSignedPermutation: return "signed-permutation";
    case TransformClass::kOrthogonalSymmetric: return "orthogonal-symmetric";
    case TransformClass::kOrthogonal: return "orthogonal";
    case TransformClass::kGeneralInvertible: return "general-invertible";
  }
  return "unknown";
}

TransformProperties measure_transform(const Matrix& t) {
  TransformProperties p;
  const std::size_t n = t.rows();
  p.orthogonality_residual = max_abs_diff(matmul_at_b(t, t), Matrix::identity(n));
  p.symmetry_residual = max_abs_diff(t, t.transposed());
  bool signed_perm = true;
  bool all_positive = true;
  for (std::size_t r = 0; r < n && signed_perm; ++r) {
    std::size_t nonzero = 0;
    for (std::size_t c = 0; c < n; ++c) {
      const double v = t(r, c);
      if (v == 0.0) continue;
      if (v != 1.0 && v != -1.0) signed_perm = false;
      if (v < 0.0) all_positive = false;
      ++nonzero;
    }
    if (nonzero != 1) signed_perm = false;
  }
  for (std::size_t c = 0; c < n && signed_perm; ++c) {
    std::size_t nonzero = 0;
    for (std::size_t r = 0; r < n; ++r) nonzero += t(r, c) != 0.0 ? 1 : 0;
    if (nonzero != 1) signed_perm = false;
  }
  p.signed_permutation = signed_perm;
  p.permutation = signed_perm && all_positive;
  return p;
}

TransformSpec::TransformSpec(Matrix t, TransformClass declared, ActsOn acts_on)
    : t_(std::move(t)), class_(declared), acts_on_(acts_on) {
  require(t_.rows() == t_.cols() && t_.rows() > 0, ErrorKind::kInvalidArgument,
          "transform must be square");
  props_ = measure_transform(t_);
  const auto claim_fails = [&](const char* what) {
    fail(ErrorKind::kInvalidArgument,
         std::string("transform declared ") + std::string(to_string(declared)) + " but " + what);
  };
  switch (declared) {
    case TransformClass::kPermutation:
      if (!props_.permutation) claim_fails("is not a permutation matrix");
      break;
    case TransformClass::kSignedPermutation:
      if (!props_.signed_permutation) claim_fails("is not a signed permutation matrix");
      break;
    case TransformClass::kOrthogonalSymmetric:
      if (!props_.symmetric_orthogonal()) claim_fails("is not symmetric orthogonal");
      break;
    case TransformClass::kOrthogonal:
      if (!props_.orthogonal()) claim_fails("is not orthogonal");
      break;
    case TransformClass::kGeneralInvertible:
      break;
  }
  require(numerical_rank(t_, 1e-12) == t_.rows(), ErrorKind::kRankError,
          "transform is not invertible");
}

Matrix TransformSpec::inverse_matrix() const {
  if (props_.orthogonal()) return t_.transposed();
  return inverse(t_);
}

TransformSpec letter_swap_transform(const EncodingScheme& scheme, Symbol a, Symbol b) {
  const std::size_t n = scheme.alphabet_size();
  require(a != b, ErrorKind::kInvalidArgument, "swap needs two distinct symbols");
  require(a < n && b < n, ErrorKind::kInvalidArgument, "swap symbol outside alphabet");
  const Matrix& code = scheme.code();
  require(code.rows() == n, ErrorKind::kInvalidArgument, "letter swap needs a square code");

  Matrix swapped = code;  // E·P_ab
  for (std::size_t r = 0; r < n; ++r) std::swap(swapped(r, a), swapped(r, b));
  const Matrix t = matmul(swapped, inverse(code));

  for (Symbol s = 0; s < n; ++s) {
    const Symbol image = s == a ? b : (s == b ? a : s);
    const double residual = max_abs_diff(matvec(t, code.column_copy(s)), code.column_copy(image));
    require(residual <= kActionTolerance, ErrorKind::kRankError,
            "letter swap residual " + std::to_string(residual) + " exceeds tolerance");
  }

  TransformClass declared = TransformClass::kGeneralInvertible;
  if (scheme.kind() == EncodingKind::kOneHot) declared = TransformClass::kPermutation;
  if (scheme.kind() == EncodingKind::kHaar) declared = TransformClass::kOrthogonalSymmetric;
  return TransformSpec(t, declared, ActsOn::kLetter);
}

TransformSpec lift_to_word(const TransformSpec& letter_t, WordPosition position) {
  require(letter_t.acts_on() == ActsOn::kLetter, ErrorKind::kInvalidArgument,
          "lift_to_word needs a letter-space transform");
  const Matrix id = Matrix::identity(letter_t.dimension());
  Matrix word = position == WordPosition::kFirst ? block_diagonal(letter_t.matrix(), id)
                                                 : block_diagonal(id, letter_t.matrix());
  return TransformSpec(std::move(word), letter_t.transform_class(), ActsOn::kWord);
}

}  // namespace idlab
