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

#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <numeric>
#include <set>

#include "idlab/error.hpp"
#include "idlab/numerics/linalg.hpp"
#include "idlab/training/linear.hpp"
#include "idlab/training/objective.hpp"
#include "idlab/training/optimizer.hpp"
#include "idlab/training/schedule.hpp"
#include "idlab/training/train.hpp"

namespace idlab {
namespace {

SplitParams scalar_params(double c, double b) {
  SplitParams p;
  p.c = Matrix(1, 1, c);
  p.b.push_back({"b", Matrix(1, 1, b)});
  return p;
}

LabeledDataset gaussian_dataset(std::size_t n, std::size_t d, std::uint64_t seed) {
  RandomStream rng(seed);
  LabeledDataset data;
  data.inputs = gaussian_matrix(n, d, 0.0, 1.0, rng);
  for (std::size_t i = 0; i < n; ++i) data.ratings.push_back(rng.normal());
  return data;
}

LabeledDataset transformed(const LabeledDataset& d, const Matrix& t) {
  LabeledDataset out = d;
  out.inputs = matmul_a_bt(d.inputs, t);
  return out;
}

TEST(LossTest, AnalyticValues) {
  EXPECT_NEAR(loss_value(LossKind::kBinaryCrossEntropy, 0.5, 1.0), std::log(2.0), 1e-15);
  EXPECT_NEAR(loss_value(LossKind::kBinaryCrossEntropy, 0.5, 0.0), 0.693147, 1e-6);
  EXPECT_NEAR(loss_value(LossKind::kBinaryCrossEntropy, 0.9, 1.0), 0.105361, 1e-6);
  EXPECT_EQ(loss_value(LossKind::kMeanSquaredError, 0.3, 0.3), 0.0);
  EXPECT_TRUE(std::isfinite(loss_value(LossKind::kBinaryCrossEntropy, 1.0, 0.0)));
}

TEST(SgdTest, ZeroStepLeavesParams) {
  SplitParams p = scalar_params(1.5, -2.0);
  const SplitParams before = p;
  sgd_step(p, scalar_params(3.0, 4.0), 0.0);
  EXPECT_EQ(p, before);
}

TEST(SgdTest, ScalarArithmetic) {
  SplitParams p = scalar_params(1.0, 1.0);
  sgd_step(p, scalar_params(2.0, 2.0), 0.5);
  EXPECT_EQ(p.c(0, 0), 0.0);
  EXPECT_EQ(p.b[0].value(0, 0), 0.0);
  EXPECT_THROW(sgd_step(p, p, -1.0), Error);
}

TEST(SgdTest, LinearLossStepsAdd) {
  // Gradient of a linear loss does not depend on the params.
  const SplitParams g = scalar_params(0.75, -1.25);
  SplitParams two = scalar_params(0.5, 0.5);
  sgd_step(two, g, 0.1);
  sgd_step(two, g, 0.3);
  SplitParams one = scalar_params(0.5, 0.5);
  sgd_step(one, g, 0.4);
  EXPECT_NEAR(two.c(0, 0), one.c(0, 0), 1e-15);
  EXPECT_NEAR(two.b[0].value(0, 0), one.b[0].value(0, 0), 1e-15);
}

TEST(AdamTest, FirstStepFromZeroMoments) {
  const double theta = 0.01;
  for (double g : {0.3, -2.0, 1e-4}) {
    SplitParams p = scalar_params(0.0, 0.0);
    OptimizerState state = zero_state(p);
    adam_step(p, scalar_params(g, g), state, theta, faithful_adam(0.9, 0.999));
    const double expected = -theta * 3.16228 * (g > 0 ? 1.0 : -1.0);
    EXPECT_NEAR(p.c(0, 0), expected, theta * 1e-5);
    EXPECT_NEAR(p.c(0, 0), -theta * 0.1 / std::sqrt(0.001) * (g > 0 ? 1.0 : -1.0), 1e-15);
    EXPECT_EQ(state.steps, 1u);
  }
}

TEST(AdamTest, MemorylessIsSignDescent) {
  SplitParams p = scalar_params(1.0, 1.0);
  OptimizerState state = zero_state(p);
  for (int i = 0; i < 3; ++i) {
    adam_step(p, scalar_params(5.0, -0.2), state, 0.25, faithful_adam(0.0, 0.0));
  }
  EXPECT_DOUBLE_EQ(p.c(0, 0), 1.0 - 0.75);
  EXPECT_DOUBLE_EQ(p.b[0].value(0, 0), 1.0 + 0.75);
}

TEST(AdamTest, ZeroGradientWithEpsilon) {
  SplitParams p = scalar_params(0.7, -0.3);
  const SplitParams before = p;
  OptimizerState state = zero_state(p);
  adam_step(p, scalar_params(0.0, 0.0), state, 0.1, AdamSettings{});
  EXPECT_EQ(p, before);
  AdamSettings raw = faithful_adam();
  raw.eps = 1e-8;
  adam_step(p, scalar_params(0.0, 0.0), state, 0.1, raw);
  EXPECT_EQ(p, before);
}

TEST(AdamTest, ZeroSecondMomentRefuses) {
  SplitParams p = scalar_params(0.7, -0.3);
  const SplitParams before = p;
  OptimizerState state = zero_state(p);
  try {
    adam_step(p, scalar_params(1.0, 0.0), state, 0.1, faithful_adam());
    FAIL() << "expected division by zero";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kDivisionByZero);
  }
  EXPECT_EQ(p, before);
  EXPECT_EQ(state.steps, 0u);
}

TEST(AdamTest, FrozenSecondMomentRefuses) {
  // ρ₂ = 1 keeps M² at zero.
  SplitParams p = scalar_params(0.7, -0.3);
  OptimizerState state = zero_state(p);
  try {
    adam_step(p, scalar_params(1.0, 2.0), state, 0.01, faithful_adam(0.9, 1.0));
    FAIL() << "expected division by zero";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kDivisionByZero);
  }
  AdamSettings corrected{0.9, 1.0, 1e-8, true};
  EXPECT_THROW(adam_step(p, scalar_params(1.0, 2.0), state, 0.01, corrected), Error);
}

TEST(AdamTest, BiasCorrectedFirstStep) {
  SplitParams p = scalar_params(0.0, 0.0);
  OptimizerState state = zero_state(p);
  adam_step(p, scalar_params(0.4, -0.4), state, 0.01, AdamSettings{0.9, 0.999, 0.0, true});
  EXPECT_NEAR(p.c(0, 0), -0.01, 1e-15);
  EXPECT_NEAR(p.b[0].value(0, 0), 0.01, 1e-15);
}

TEST(AdadeltaTest, ZeroGradientOnlyDecays) {
  SplitParams p = scalar_params(0.7, -0.3);
  OptimizerState state = zero_state(p);
  state.first.c(0, 0) = 2.0;
  state.second.c(0, 0) = 4.0;
  const SplitParams before = p;
  adadelta_step(p, scalar_params(0.0, 0.0), state, 1.0, AdadeltaSettings{0.95, 1e-7});
  EXPECT_EQ(p, before);
  EXPECT_DOUBLE_EQ(state.first.c(0, 0), 0.95 * 2.0);
  EXPECT_DOUBLE_EQ(state.second.c(0, 0), 0.95 * 4.0);
}

TEST(AdadeltaTest, FirstStepMagnitude) {
  const double lr = 0.001, rho = 0.95, eps = 1e-7;
  for (double g : {1.0, -0.02, 3e-4}) {
    SplitParams p = scalar_params(0.0, 0.0);
    OptimizerState state = zero_state(p);
    adadelta_step(p, scalar_params(g, g), state, lr, AdadeltaSettings{rho, eps});
    const double expected = lr * std::sqrt(eps) / std::sqrt((1 - rho) * g * g + eps) * std::abs(g);
    EXPECT_NEAR(std::abs(p.c(0, 0)), expected, expected * 1e-12);
    EXPECT_LT(p.c(0, 0) * g, 0.0);
  }
}

TEST(AdadeltaTest, Deterministic) {
  SplitParams p1 = scalar_params(0.2, 0.1), p2 = p1;
  OptimizerState s1 = zero_state(p1), s2 = s1;
  const SplitParams g = scalar_params(0.3, -0.6);
  for (int i = 0; i < 5; ++i) {
    adadelta_step(p1, g, s1, 1.0, AdadeltaSettings{});
    adadelta_step(p2, g, s2, 1.0, AdadeltaSettings{});
  }
  EXPECT_EQ(p1, p2);
  EXPECT_EQ(s1.first, s2.first);
  EXPECT_EQ(s1.second, s2.second);
}

TEST(ScheduleTest, FullBatchCoversEverything) {
  const BatchSchedule s = BatchSchedule::full_batch(72, 3);
  EXPECT_EQ(s.steps(), 3u);
  EXPECT_EQ(s.batch(2).size(), 72u);
  EXPECT_TRUE(s.ends_epoch(0));
  EXPECT_THROW(s.batch(3), Error);
}

TEST(ScheduleTest, ShuffledEpochsPartition) {
  const BatchSchedule s = BatchSchedule::shuffled(10, 4, 2, RandomStream(3));
  EXPECT_EQ(s.steps_per_epoch(), 3u);
  EXPECT_EQ(s.steps(), 6u);
  for (std::size_t e = 0; e < 2; ++e) {
    std::multiset<std::size_t> seen;
    for (std::size_t k = 0; k < 3; ++k)
      for (std::size_t i : s.batch(e * 3 + k)) seen.insert(i);
    EXPECT_EQ(seen.size(), 10u);
    EXPECT_EQ(std::set<std::size_t>(seen.begin(), seen.end()).size(), 10u);
  }
  EXPECT_EQ(s.batch(5).size(), 2u);
  const BatchSchedule again = BatchSchedule::shuffled(10, 4, 2, RandomStream(3));
  for (std::size_t i = 0; i < s.steps(); ++i) {
    const auto a = s.batch(i), b = again.batch(i);
    EXPECT_TRUE(std::equal(a.begin(), a.end(), b.begin(), b.end()));
  }
}

LabeledDataset small_binary_dataset() {
  RandomStream rng(11);
  LabeledDataset data;
  data.inputs = gaussian_matrix(12, 6, 0.0, 1.0, rng);
  for (std::size_t i = 0; i < 12; ++i) data.ratings.push_back(i % 2 == 0 ? 1.0 : 0.0);
  return data;
}

TEST(TrainTest, ZeroStepsReturnsInitialization) {
  const ModelSpec spec = MlpSpec{6, 2, 8};
  const LabeledDataset data = small_binary_dataset();
  TrainConfig config;
  const RandomStream rng(5);
  const TrainResult r = train(spec, rng, data, BatchSchedule::full_batch(12, 0), config);
  RandomStream init_rng = rng.split("init");
  EXPECT_EQ(r.params, init_model(spec, 0.0, 0.0025, init_rng));
  EXPECT_TRUE(r.losses.empty());
}

TEST(TrainTest, ReplayIsBitwise) {
  const LabeledDataset data = small_binary_dataset();
  TrainConfig config;
  config.optimizer.step_size = 0.1;
  for (const ModelSpec& spec : {ModelSpec{MlpSpec{6, 2, 8}}, ModelSpec{LstmSpec{3, 2, 4, 0.5}}}) {
    const BatchSchedule s = BatchSchedule::shuffled(12, 5, 4, RandomStream(9));
    const TrainResult a = train(spec, RandomStream(21), data, s, config, &data);
    const TrainResult b = train(spec, RandomStream(21), data, s, config, &data);
    EXPECT_EQ(a.params, b.params);
    ASSERT_EQ(a.losses.size(), 4u);
    for (std::size_t e = 0; e < 4; ++e) {
      EXPECT_EQ(a.losses[e].train, b.losses[e].train);
      EXPECT_EQ(a.losses[e].test, b.losses[e].test);
    }
  }
}

TEST(TrainTest, FitsSmallProblemAndRecordsTrajectory) {
  const ModelSpec spec = MlpSpec{6, 1, 16};
  const LabeledDataset data = small_binary_dataset();
  TrainConfig config;
  config.optimizer.kind = OptimizerKind::kAdam;
  config.optimizer.step_size = 0.01;
  config.init_variance = 0.1;
  config.trajectory_stride = 100;
  const TrainResult r = train(spec, RandomStream(2), data, BatchSchedule::full_batch(12, 500),
                              config, &data);
  EXPECT_EQ(r.trajectory.size(), 6u);
  EXPECT_EQ(r.trajectory_steps.back(), 500u);
  EXPECT_LT(r.losses.back().train, 0.5 * r.losses.front().train);
  EXPECT_LT(*r.losses.back().test, 0.05);
}

TEST(TrainTest, DivergenceIsReported) {
  const ModelSpec spec = MlpSpec{6, 1, 8};
  LabeledDataset data = small_binary_dataset();
  TrainConfig config;
  config.optimizer.step_size = 1e306;
  config.init_variance = 1.0;
  config.loss = LossKind::kMeanSquaredError;
  try {
    train(spec, RandomStream(1), data, BatchSchedule::full_batch(12, 50), config);
    FAIL() << "expected divergence";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kDivergence);
  }
}

TEST(OlsTest, ExactFitOnLine) {
  LabeledDataset data;
  data.inputs = Matrix{{1.0}, {2.0}};
  data.ratings = {1.0, 2.0};
  const LinearModel m = ols_learner(data);
  EXPECT_NEAR(m.c[0], 1.0, 1e-14);
  EXPECT_NEAR(m.bias, 0.0, 1e-14);
}

TEST(OlsTest, InvariantToInvertibleTransform) {
  const LabeledDataset data = gaussian_dataset(40, 8, 17);
  RandomStream rng(4);
  const Matrix t = gaussian_matrix(8, 8, 0.0, 1.0, rng);
  ASSERT_GT(std::abs(determinant(t)), 1e-3);
  const LinearModel base = ols_learner(data);
  const LinearModel moved = ols_learner(transformed(data, t));
  for (int k = 0; k < 5; ++k) {
    Vector w(8);
    for (double& v : w) v = rng.normal();
    EXPECT_NEAR(moved.predict(matvec(t, w)), base.predict(w), 1e-8);
  }
}

TEST(OlsTest, RankDeficientDesign) {
  LabeledDataset data = gaussian_dataset(20, 4, 2);
  for (std::size_t i = 0; i < 20; ++i) data.inputs(i, 3) = 0.0;
  try {
    ols_learner(data);
    FAIL() << "expected no unique minimizer";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kNoUniqueMinimizer);
  }
}

TEST(RidgeTest, HandSolvedNormalEquations) {
  LabeledDataset one;
  one.inputs = Matrix{{2.0}};
  one.ratings = {3.0};
  const LinearModel a = ridge_learner(one, 1.0);
  EXPECT_NEAR(a.c[0], 0.0, 1e-14);
  EXPECT_NEAR(a.bias, 3.0, 1e-14);

  // ½[b² + (1−C−b)²] + C²: 2b + C = 1 and 3C + b = 1.
  LabeledDataset two;
  two.inputs = Matrix{{0.0}, {1.0}};
  two.ratings = {0.0, 1.0};
  const LinearModel b = ridge_learner(two, 1.0);
  EXPECT_NEAR(b.c[0], 0.2, 1e-14);
  EXPECT_NEAR(b.bias, 0.4, 1e-14);
  EXPECT_THROW(ridge_learner(two, 0.0), Error);
}

TEST(RidgeTest, LargePenaltyShrinks) {
  const LabeledDataset data = gaussian_dataset(30, 5, 8);
  const LinearModel m = ridge_learner(data, 1e6);
  EXPECT_LE(std::sqrt(dot(m.c, m.c)), 1e-3);
}

TEST(RidgeTest, FirstOrderCondition) {
  for (std::uint64_t seed : {1, 2, 3}) {
    const LabeledDataset data = gaussian_dataset(25, 30, seed);
    for (double lambda : {1e-3, 0.1, 10.0}) {
      const LinearModel m = ridge_learner(data, lambda);
      EXPECT_LE(max_abs(ridge_gradient(m, data, lambda)), 1e-8);
    }
  }
}

TEST(RidgeTest, OrthogonalTransformInvariance) {
  const LabeledDataset data = gaussian_dataset(20, 10, 5);
  RandomStream rng(6);
  const Matrix t = haar_orthogonal(10, rng);
  const LinearModel base = ridge_learner(data, 0.05);
  const LinearModel moved = ridge_learner(transformed(data, t), 0.05);
  for (int k = 0; k < 5; ++k) {
    Vector w(10);
    for (double& v : w) v = rng.normal();
    EXPECT_NEAR(moved.predict(matvec(t, w)), base.predict(w), 1e-8);
  }
}

}  // namespace
}  // namespace idlab
