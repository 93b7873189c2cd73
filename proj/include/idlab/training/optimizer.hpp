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
#include <string_view>
#include <vector>

#include "idlab/nn/params.hpp"

namespace idlab {

enum class OptimizerKind { kSgd, kAdam, kAdadelta };

std::string_view to_string(OptimizerKind kind);

// Moment recursions M¹ ← ρ₁M¹ + (1−ρ₁)g, M² ← ρ₂M² + (1−ρ₂)g⊙g, then
// Θ ← Θ − θ·M̂¹ ⊘ ((M̂²)^½ + ε). Without bias correction M̂ = M; with it,
// M̂ʲ = Mʲ/(1 − ρⱼᵗ).
struct AdamSettings {
  double rho1 = 0.9;
  double rho2 = 0.999;
  double eps = 1e-8;
  bool bias_correction = true;
};

// The uncorrected, ε-free form used when verifying the coupling identities.
AdamSettings faithful_adam(double rho1 = 0.9, double rho2 = 0.999);

struct AdadeltaSettings {
  double rho = 0.95;
  double eps = 1e-7;
};

struct OptimizerConfig {
  OptimizerKind kind = OptimizerKind::kSgd;
  // θᵢ: the SGD rate, Adam step size, or Adadelta final scale.
  double step_size = 0.025;
  // Optional per-step sizes; when non-empty, step i uses step_schedule[i].
  std::vector<double> step_schedule;
  AdamSettings adam;
  AdadeltaSettings adadelta;

  double step_at(std::size_t i) const;
  void validate() const;
};

// Adam: first = M¹, second = M². Adadelta: first = E[g²], second = E[Δ²].
struct OptimizerState {
  SplitParams first;
  SplitParams second;
  std::size_t steps = 0;
};

OptimizerState zero_state(const SplitParams& like);

void sgd_step(SplitParams& params, const SplitParams& grads, double theta);

// Throws division-by-zero, leaving params untouched, when ε = 0 and an
// updated second-moment entry is exactly zero.
void adam_step(SplitParams& params, const SplitParams& grads, OptimizerState& state, double theta,
               const AdamSettings& settings);

void adadelta_step(SplitParams& params, const SplitParams& grads, OptimizerState& state,
                   double lr, const AdadeltaSettings& settings);

void optimizer_step(SplitParams& params, const SplitParams& grads, OptimizerState& state,
                    const OptimizerConfig& config);

}  // namespace idlab
