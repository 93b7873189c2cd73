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

#include "idlab/nn/params.hpp"

#include <algorithm>
#include <cmath>

#include "idlab/error.hpp"

namespace idlab {

std::size_t SplitParams::scalar_count() const {
  std::size_t n = c.size();
  for (const auto& blk : b) n += blk.value.size();
  return n;
}

SplitParams SplitParams::zeros_like() const {
  SplitParams out;
  out.c_name = c_name;
  out.c = Matrix(c.rows(), c.cols());
  out.b.reserve(b.size());
  for (const auto& blk : b) out.b.push_back({blk.name, Matrix(blk.value.rows(), blk.value.cols())});
  return out;
}

Vector SplitParams::flatten() const {
  Vector out;
  out.reserve(scalar_count());
  for_each([&](const std::string&, const Matrix& m) {
    out.insert(out.end(), m.values().begin(), m.values().end());
  });
  return out;
}

void SplitParams::unflatten(std::span<const double> values) {
  require(values.size() == scalar_count(), ErrorKind::kInvalidArgument,
          "flat parameter vector has the wrong length");
  std::size_t offset = 0;
  for_each([&](const std::string&, Matrix& m) {
    std::copy_n(values.begin() + static_cast<std::ptrdiff_t>(offset), m.size(), m.values().begin());
    offset += m.size();
  });
}

Matrix& SplitParams::block(const std::string& name) {
  if (name == c_name) return c;
  for (auto& blk : b)
    if (blk.name == name) return blk.value;
  fail(ErrorKind::kInvalidArgument, "no parameter block named '" + name + "'");
}

const Matrix& SplitParams::block(const std::string& name) const {
  return const_cast<SplitParams*>(this)->block(name);
}

void SplitParams::axpy(double scale, const SplitParams& other) {
  require(same_shape(other), ErrorKind::kInvalidArgument, "axpy on mismatched parameters");
  auto apply = [scale](Matrix& dst, const Matrix& src) {
    auto d = dst.values();
    auto s = src.values();
    for (std::size_t i = 0; i < d.size(); ++i) d[i] += scale * s[i];
  };
  apply(c, other.c);
  for (std::size_t i = 0; i < b.size(); ++i) apply(b[i].value, other.b[i].value);
}

void SplitParams::scale(double factor) {
  for_each([factor](const std::string&, Matrix& m) { m *= factor; });
}

bool SplitParams::same_shape(const SplitParams& other) const {
  if (c.rows() != other.c.rows() || c.cols() != other.c.cols() || b.size() != other.b.size())
    return false;
  for (std::size_t i = 0; i < b.size(); ++i) {
    if (b[i].value.rows() != other.b[i].value.rows() || b[i].value.cols() != other.b[i].value.cols())
      return false;
  }
  return true;
}

void SplitParams::for_each(const std::function<void(const std::string&, Matrix&)>& fn) {
  fn(c_name, c);
  for (auto& blk : b) fn(blk.name, blk.value);
}

void SplitParams::for_each(
    const std::function<void(const std::string&, const Matrix&)>& fn) const {
  fn(c_name, c);
  for (const auto& blk : b) fn(blk.name, blk.value);
}

double max_abs_diff_b(const SplitParams& a, const SplitParams& b) {
  require(a.same_shape(b), ErrorKind::kInvalidArgument, "comparing mismatched parameters");
  double worst = 0.0;
  for (std::size_t i = 0; i < a.b.size(); ++i)
    worst = std::max(worst, max_abs_diff(a.b[i].value, b.b[i].value));
  return worst;
}

double max_abs_diff(const SplitParams& a, const SplitParams& b) {
  return std::max(max_abs_diff_b(a, b), max_abs_diff(a.c, b.c));
}

bool all_finite(const SplitParams& p) {
  bool ok = true;
  p.for_each([&](const std::string&, const Matrix& m) { ok = ok && all_finite(m); });
  return ok;
}

}  // namespace idlab
