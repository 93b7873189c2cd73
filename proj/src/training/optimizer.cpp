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

#include "idlab/training/optimizer.hpp"

#include <cmath>
#include <string>

#include "idlab/error.hpp"

namespace idlab {

std::string_view to_string(OptimizerKind kind) {
  switch (kind) {
    case OptimizerKind::kSgd: return "sgd";
    case OptimizerKind::kAdam: return "adam";
    case OptimizerKind::kAdadelta: return "adadelta";
  }
  return "unknown";
}

AdamSettings faithful_adam(double rho1, double rho2) {
  return AdamSettings{rho1, rho2, 0.0, false};
}

double OptimizerConfig::step_at(std::size_t i) const {
  if (step_schedule.empty()) return step_size;
  require(i < step_schedule.size(), ErrorKind::kInvalidArgument,
          "step " + std::to_string(i) + " is past the step-size schedule");
  return step_schedule[i];
}

void OptimizerConfig::validate() const {
  require(step_size >= 0.0, ErrorKind::kInvalidArgument, "step size must be nonnegative");
  for (double s : step_schedule)
    require(s >= 0.0, ErrorKind::kInvalidArgument, "step sizes must be nonnegative");
  require(adam.rho1 >= 0.0 && adam.rho1 <= 1.0 && adam.rho2 >= 0.0 && adam.rho2 <= 1.0,
          ErrorKind::kInvalidArgument, "adam rates must lie in [0, 1]");
  require(adam.eps >= 0.0, ErrorKind::kInvalidArgument, "adam epsilon must be nonnegative");
  require(adadelta.rho >= 0.0 && adadelta.rho < 1.0, ErrorKind::kInvalidArgument,
          "adadelta rho must lie in [0, 1)");
}

OptimizerState zero_state(const SplitParams& like) {
  return OptimizerState{like.zeros_like(), like.zeros_like(), 0};
}

void sgd_step(SplitParams& params, const SplitParams& grads, double theta) {
  require(theta >= 0.0, ErrorKind::kInvalidArgument, "step size must be nonnegative");
  params.axpy(-theta, grads);
}

namespace {

// Applies fn(param, grad, first, second) to every scalar in declared order.
template <typename Fn>
void for_each_scalar(SplitParams& params, const SplitParams& grads, OptimizerState& state,
                     Fn&& fn) {
  require(params.same_shape(grads) && params.same_shape(state.first) &&
              params.same_shape(state.second),
          ErrorKind::kInvalidArgument, "optimizer shapes do not match");
  auto run = [&](Matrix& p, const Matrix& g, Matrix& m1, Matrix& m2) {
    auto pv = p.values();
    auto gv = g.values();
    auto a = m1.values();
    auto b = m2.values();
    for (std::size_t i = 0; i < pv.size(); ++i) fn(pv[i], gv[i], a[i], b[i]);
  };
  run(params.c, grads.c, state.first.c, state.second.c);
  for (std::size_t k = 0; k < params.b.size(); ++k)
    run(params.b[k].value, grads.b[k].value, state.first.b[k].value, state.second.b[k].value);
}

}  // namespace

void adam_step(SplitParams& params, const SplitParams& grads, OptimizerState& state, double theta,
               const AdamSettings& s) {
  require(theta >= 0.0, ErrorKind::kInvalidArgument, "step size must be nonnegative");
  if (state.first.c.empty() && state.first.b.empty()) state = zero_state(params);

  OptimizerState next = state;
  SplitParams dummy = params;
  for_each_scalar(dummy, grads, next, [&](double&, double g, double& m1, double& m2) {
    m1 = s.rho1 * m1 + (1.0 - s.rho1) * g;
    m2 = s.rho2 * m2 + (1.0 - s.rho2) * (g * g);
  });
  next.steps = state.steps + 1;

  double c1 = 1.0, c2 = 1.0;
  if (s.bias_correction) {
    c1 = 1.0 - std::pow(s.rho1, static_cast<double>(next.steps));
    c2 = 1.0 - std::pow(s.rho2, static_cast<double>(next.steps));
    require(c1 > 0.0 && c2 > 0.0, ErrorKind::kDivisionByZero,
            "adam bias correction vanishes (rho = 1)");
  }
  if (s.eps == 0.0) {
    std::size_t zero_entries = 0;
    next.second.for_each([&](const std::string&, const Matrix& m) {
      for (double v : m.values()) zero_entries += v == 0.0 ? 1 : 0;
    });
    require(zero_entries == 0, ErrorKind::kDivisionByZero,
            "adam second moment has " + std::to_string(zero_entries) +
                " zero entries at step " + std::to_string(next.steps) + " with epsilon = 0");
  }
  for_each_scalar(params, grads, next, [&](double& p, double, double& m1, double& m2) {
    p -= theta * (m1 / c1) / (std::sqrt(m2 / c2) + s.eps);
  });
  state = std::move(next);
}

void adadelta_step(SplitParams& params, const SplitParams& grads, OptimizerState& state,
                   double lr, const AdadeltaSettings& s) {
  require(lr >= 0.0, ErrorKind::kInvalidArgument, "learning rate must be nonnegative");
  require(s.rho >= 0.0 && s.rho < 1.0, ErrorKind::kInvalidArgument, "adadelta rho must be in [0,1)");
  if (state.first.c.empty() && state.first.b.empty()) state = zero_state(params);
  for_each_scalar(params, grads, state, [&](double& p, double g, double& acc_g, double& acc_d) {
    acc_g = s.rho * acc_g + (1.0 - s.rho) * g * g;
    const double update = g * std::sqrt(acc_d + s.eps) / std::sqrt(acc_g + s.eps);
    p -= lr * update;
    acc_d = s.rho * acc_d + (1.0 - s.rho) * update * update;
  });
  ++state.steps;
}

void optimizer_step(SplitParams& params, const SplitParams& grads, OptimizerState& state,
                    const OptimizerConfig& config) {
  const double theta = config.step_at(state.steps);
  switch (config.kind) {
    case OptimizerKind::kSgd:
      sgd_step(params, grads, theta);
      ++state.steps;
      return;
    case OptimizerKind::kAdam:
      adam_step(params, grads, state, theta, config.adam);
      return;
    case OptimizerKind::kAdadelta:
      adadelta_step(params, grads, state, theta, config.adadelta);
      return;
  }
}

}  // namespace idlab
