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
#include <optional>
#include <string>
#include <string_view>

#include <json.hpp>

#include "idlab/numerics/matrix.hpp"
#include "idlab/numerics/random.hpp"

namespace idlab {

using Symbol = std::size_t;

// 'A' -> 0 ... 'Z' -> 25.
constexpr Symbol letter(char c) { return static_cast<Symbol>(c - 'A'); }
inline char letter_name(Symbol s) { return static_cast<char>('A' + s); }

enum class EncodingKind { kOneHot, kHaar, kDistributed, kCvSoftmax };

std::string_view to_string(EncodingKind kind);
EncodingKind parse_encoding_kind(std::string_view name);

// Code table for an alphabet: column i of code() encodes symbol i.
class EncodingScheme {
 public:
  // Validates the kind invariants; throws invalid-argument on violation.
  static EncodingScheme from_matrix(EncodingKind kind, Matrix code,
                                    std::optional<std::size_t> active_bits = std::nullopt);

  EncodingKind kind() const noexcept { return kind_; }
  std::size_t alphabet_size() const noexcept { return code_.cols(); }
  std::size_t dimension() const noexcept { return code_.rows(); }
  std::optional<std::size_t> active_bits() const noexcept { return active_bits_; }
  const Matrix& code() const noexcept { return code_; }

  Vector encode(Symbol s) const;

 private:
  EncodingScheme(EncodingKind kind, Matrix code, std::optional<std::size_t> active_bits)
      : kind_(kind), code_(std::move(code)), active_bits_(active_bits) {}

  EncodingKind kind_;
  Matrix code_;
  std::optional<std::size_t> active_bits_;
};

// OneHot: identity. Haar: rows of a Haar-sampled orthogonal matrix become the
// columns of the code. Distributed(j): distinct j-of-n binary patterns drawn by
// rejection sampling. CvSoftmax codes are learned and built via from_matrix.
EncodingScheme make_scheme(EncodingKind kind, std::size_t n, std::optional<std::size_t> active_bits,
                           RandomStream& rng);

// [E·e_first ; E·e_second], length 2n.
Vector encode_word(const EncodingScheme& scheme, Symbol first, Symbol second);

nlohmann::json to_json(const EncodingScheme& scheme);
EncodingScheme scheme_from_json(const nlohmann::json& doc);

}  // namespace idlab
