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

#include "idlab/encodings/encoding.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>
#include <vector>

#include "idlab/error.hpp"
#include "idlab/numerics/linalg.hpp"

namespace idlab {

std::string_view to_string(EncodingKind kind) {
  switch (kind) {
    case EncodingKind::kOneHot: return "onehot";
    case EncodingKind::kHaar: return "haar";
    case EncodingKind::kDistributed: return "distributed";
    case EncodingKind::kCvSoftmax: return "cv-softmax";
  }
  return "unknown";
}

EncodingKind parse_encoding_kind(std::string_view name) {
  if (name == "onehot" || name == "one-hot") return EncodingKind::kOneHot;
  if (name == "haar") return EncodingKind::kHaar;
  if (name == "distributed") return EncodingKind::kDistributed;
  if (name == "cv-softmax" || name == "cv") return EncodingKind::kCvSoftmax;
  fail(ErrorKind::kInvalidArgument, "unknown encoding '" + std::string(name) + "'");
}

namespace {

// Saturating binomial coefficient; only compared against small alphabet sizes.
std::size_t binomial_at_least(std::size_t n, std::size_t k, std::size_t cap) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  double value = 1.0;
  for (std::size_t i = 1; i <= k; ++i) {
    value = value * static_cast<double>(n - k + i) / static_cast<double>(i);
    if (value >= static_cast<double>(cap)) return cap;
  }
  return static_cast<std::size_t>(std::llround(value));
}

void validate(EncodingKind kind, const Matrix& code, std::optional<std::size_t> active_bits) {
  require(code.rows() > 0 && code.cols() > 0, ErrorKind::kInvalidArgument, "empty code matrix");
  require(all_finite(code), ErrorKind::kInvalidArgument, "code matrix has non-finite entries");
  switch (kind) {
    case EncodingKind::kOneHot:
      require(code == Matrix::identity(code.rows()), ErrorKind::kInvalidArgument,
              "one-hot code must be the identity");
      break;
    case EncodingKind::kHaar: {
      const double residual = max_abs_diff(matmul_at_b(code, code), Matrix::identity(code.cols()));
      require(code.rows() == code.cols() && residual <= 1e-10, ErrorKind::kInvalidArgument,
              "haar code columns are not orthonormal");
      break;
    }
    case EncodingKind::kDistributed: {
      require(active_bits.has_value(), ErrorKind::kInvalidArgument,
              "distributed code needs an active-bit count");
      std::set<std::vector<double>> seen;
      for (std::size_t c = 0; c < code.cols(); ++c) {
        const Vector col = code.column_copy(c);
        std::size_t ones = 0;
        for (double v : col) {
          require(v == 0.0 || v == 1.0, ErrorKind::kInvalidArgument, "distributed code is not binary");
          ones += v == 1.0 ? 1 : 0;
        }
        require(ones == *active_bits, ErrorKind::kInvalidArgument,
                "distributed code column has the wrong number of active bits");
        require(seen.insert(col).second, ErrorKind::kInvalidArgument,
                "distributed code columns are not distinct");
      }
      break;
    }
    case EncodingKind::kCvSoftmax:
      break;
  }
  require(numerical_rank(code) == code.cols(), ErrorKind::kRankError,
          "code columns are linearly dependent");
}

Matrix distributed_code(std::size_t n, std::size_t j, RandomStream& rng) {
  Matrix code(n, n);
  std::set<std::vector<std::size_t>> used;
  for (std::size_t symbol = 0; symbol < n; ++symbol) {
    std::vector<std::size_t> bits;
    do {
      bits = rng.sample_without_replacement(n, j);
      std::sort(bits.begin(), bits.end());
    } while (used.contains(bits));
    used.insert(bits);
    for (std::size_t b : bits) code(b, symbol) = 1.0;
  }
  return code;
}

}  // namespace

EncodingScheme EncodingScheme::from_matrix(EncodingKind kind, Matrix code,
                                           std::optional<std::size_t> active_bits) {
  validate(kind, code, active_bits);
  return EncodingScheme(kind, std::move(code),
                        kind == EncodingKind::kDistributed ? active_bits : std::nullopt);
}

Vector EncodingScheme::encode(Symbol s) const {
  require(s < alphabet_size(), ErrorKind::kInvalidArgument,
          "symbol " + std::to_string(s) + " outside alphabet of size " +
              std::to_string(alphabet_size()));
  return code_.column_copy(s);
}

EncodingScheme make_scheme(EncodingKind kind, std::size_t n, std::optional<std::size_t> active_bits,
                           RandomStream& rng) {
  require(n >= 1, ErrorKind::kInvalidArgument, "alphabet size must be positive");
  switch (kind) {
    case EncodingKind::kOneHot:
      return EncodingScheme::from_matrix(kind, Matrix::identity(n));
    case EncodingKind::kHaar:
      return EncodingScheme::from_matrix(kind, haar_orthogonal(n, rng).transposed());
    case EncodingKind::kDistributed: {
      require(active_bits.has_value() && *active_bits >= 1 && *active_bits <= n,
              ErrorKind::kInvalidArgument, "distributed encoding needs 1 <= j <= n");
      const std::size_t j = *active_bits;
      require(binomial_at_least(n, j, n) >= n, ErrorKind::kNotEnoughPatterns,
              "C(" + std::to_string(n) + "," + std::to_string(j) + ") < " + std::to_string(n));
      // Distinct patterns can still be linearly dependent; redraw the table
      // until it is invertible so that every letter swap is a linear map.
      constexpr int kMaxTables = 1000;
      for (int attempt = 0; attempt < kMaxTables; ++attempt) {
        Matrix code = distributed_code(n, j, rng);
        if (numerical_rank(code) == n) return EncodingScheme::from_matrix(kind, std::move(code), j);
      }
      fail(ErrorKind::kRankError, "no invertible distributed code found");
    }
    case EncodingKind::kCvSoftmax:
      fail(ErrorKind::kInvalidArgument, "cv-softmax codes are learned; use from_matrix");
  }
  fail(ErrorKind::kInvalidArgument, "unknown encoding kind");
}

Vector encode_word(const EncodingScheme& scheme, Symbol first, Symbol second) {
  Vector out = scheme.encode(first);
  const Vector tail = scheme.encode(second);
  out.insert(out.end(), tail.begin(), tail.end());
  return out;
}

nlohmann::json to_json(const EncodingScheme& scheme) {
  nlohmann::json doc;
  doc["kind"] = std::string(to_string(scheme.kind()));
  doc["n"] = scheme.alphabet_size();
  if (scheme.active_bits()) doc["j"] = *scheme.active_bits();
  nlohmann::json rows = nlohmann::json::array();
  for (std::size_t r = 0; r < scheme.code().rows(); ++r) {
    const auto row = scheme.code().row(r);
    rows.push_back(std::vector<double>(row.begin(), row.end()));
  }
  doc["matrix"] = std::move(rows);
  return doc;
}

EncodingScheme scheme_from_json(const nlohmann::json& doc) {
  try {
    const auto kind = parse_encoding_kind(doc.at("kind").get<std::string>());
    const auto rows = doc.at("matrix").get<std::vector<std::vector<double>>>();
    require(!rows.empty(), ErrorKind::kFormatError, "empty matrix in scheme document");
    std::vector<double> values;
    for (const auto& r : rows) {
      require(r.size() == rows.front().size(), ErrorKind::kFormatError, "ragged scheme matrix");
      values.insert(values.end(), r.begin(), r.end());
    }
    std::optional<std::size_t> j;
    if (doc.contains("j")) j = doc.at("j").get<std::size_t>();
    Matrix code(rows.size(), rows.front().size(), std::move(values));
    require(code.cols() == doc.at("n").get<std::size_t>(), ErrorKind::kFormatError,
            "scheme 'n' does not match matrix");
    return EncodingScheme::from_matrix(kind, std::move(code), j);
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::kFormatError, std::string("bad scheme document: ") + e.what());
  }
}

}  // namespace idlab
