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

#include <algorithm>
#include <cmath>
#include <functional>

#include "idlab/nn/params.hpp"

namespace idlab::testing {

struct GradCheckResult {
  double max_relative_error = 0.0;
  std::string worst_block;
  std::size_t checked = 0;
  double worst_analytic = 0.0;
  double worst_numeric = 0.0;
};

// |a − n| / max(|a|, |n|, floor), maximized over every scalar parameter.
// Central differences carry ~1e-11 absolute roundoff at this step, so the
// denominator floor keeps tiny entries from reporting pure noise.
// n is the central difference (f(p + h e) − f(p − h e)) / 2h.
inline GradCheckResult check_gradient(const SplitParams& params, const SplitParams& analytic,
                                      const std::function<double(const SplitParams&)>& objective,
                                      double step = 1e-5, double floor = 1e-5) {
  GradCheckResult result;
  SplitParams probe = params;
  const Vector flat_grad = analytic.flatten();
  Vector flat = probe.flatten();
  std::vector<std::string> owner;
  params.for_each([&](const std::string& name, const Matrix& m) {
    owner.insert(owner.end(), m.size(), name);
  });
  for (std::size_t i = 0; i < flat.size(); ++i) {
    const double saved = flat[i];
    flat[i] = saved + step;
    probe.unflatten(flat);
    const double up = objective(probe);
    flat[i] = saved - step;
    probe.unflatten(flat);
    const double down = objective(probe);
    flat[i] = saved;
    const double numeric = (up - down) / (2.0 * step);
    const double a = flat_grad[i];
    const double rel =
        std::abs(a - numeric) / std::max({std::abs(a), std::abs(numeric), floor});
    if (rel > result.max_relative_error) {
      result.max_relative_error = rel;
      result.worst_block = owner[i];
      result.worst_analytic = a;
      result.worst_numeric = numeric;
    }
    ++result.checked;
  }
  return result;
}

}  // namespace idlab::testing
