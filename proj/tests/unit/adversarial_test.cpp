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

#include "idlab/adversarial/adversarial.hpp"
#include "idlab/error.hpp"
#include "idlab/numerics/linalg.hpp"

namespace idlab {
namespace {

TEST(AdversarialTest, OneHotCanonicalCase) {
  Matrix x(26, 24, 0.0);
  for (std::size_t i = 0; i < 24; ++i) x(i, i) = 1.0;
  const AdversarialInstance inst = build_adversarial(x);
  for (std::size_t i = 0; i < 24; ++i) {
    EXPECT_NEAR(inst.alpha[i], 0.0, 1e-12);
    EXPECT_NEAR(inst.beta[i], 0.0, 1e-12);
  }
  EXPECT_LE(inst.residuals.max(), 1e-12);
  // T fixes e1..e24 and acts only on the last two coordinates.
  for (std::size_t i = 0; i < 24; ++i)
    for (std::size_t j = 0; j < 26; ++j) EXPECT_NEAR(inst.t(i, j), i == j ? 1.0 : 0.0, 1e-12);
  EXPECT_EQ(inst.w_same.size(), 52u);
}

TEST(AdversarialTest, GaussianEncodingsAtThirty) {
  RandomStream rng(4);
  const AdversarialInstance inst = build_adversarial(random_encodings(30, 24, rng));
  EXPECT_LE(inst.residuals.fixes_basis, 1e-9);
  EXPECT_LE(inst.residuals.symmetry, 1e-10);
  EXPECT_LE(inst.residuals.orthogonality, 1e-10);
  const TransformSpec t = inst.letter_transform();
  EXPECT_EQ(t.transform_class(), TransformClass::kOrthogonalSymmetric);
  EXPECT_EQ(inst.word_transform().dimension(), 60u);
}

TEST(AdversarialTest, ConstructionHoldsAcrossSeeds) {
  for (std::size_t m : {26, 30, 40}) {
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
      RandomStream rng(seed);
      const AdversarialInstance inst = build_adversarial(random_encodings(m, 24, rng));
      ASSERT_LE(inst.residuals.max(), 1e-9) << "m=" << m << " seed=" << seed;
    }
  }
}

TEST(AdversarialTest, TooSmallComplementFails) {
  RandomStream rng(1);
  EXPECT_THROW(build_adversarial(random_encodings(25, 24, rng)), Error);
}

TEST(AdversarialTest, RidgeCannotTellSameFromDifferent) {
  RandomStream rng(9);
  const AdversarialInstance inst = build_adversarial(random_encodings(26, 24, rng));
  RandomStream data_rng(10);
  const LabeledDataset d = adversarial_dataset(inst, data_rng, 48);
  EXPECT_EQ(d.size(), 72u);
  EXPECT_LE(d.metadata["letters"].get<std::size_t>(), 24u);
  for (double lambda : {1e-3, 0.1, 1.0}) {
    const AdversarialVerification v = verify_adversarial_ridge(inst, d, lambda);
    EXPECT_LE(v.deviation, 1e-10);
    EXPECT_LE(v.data_residual, 1e-12);
    EXPECT_EQ(v.report.verdict, Verdict::kPass) << v.report.diagnostic;
  }
}

TEST(AdversarialTest, CoupledSgdCannotTellSameFromDifferent) {
  RandomStream rng(11);
  const AdversarialInstance inst = build_adversarial(random_encodings(30, 24, rng));
  RandomStream data_rng(12);
  const LabeledDataset d = adversarial_dataset(inst, data_rng, 48);
  CouplingConfig cfg;
  cfg.train.optimizer.step_size = 0.025;
  cfg.train.reg = Regularizer{RegKind::kL2Frobenius, 0.01, 0.0};
  cfg.train.dropout = false;
  cfg.steps = 200;
  const AdversarialVerification v = verify_adversarial_sgd(inst, d, MlpSpec{60, 2, 256}, cfg);
  EXPECT_EQ(v.report.verdict, Verdict::kPass) << v.report.diagnostic;
  EXPECT_LE(v.deviation, 1e-6);
  const nlohmann::json doc = to_json(v);
  EXPECT_EQ(doc["report"]["verdict"], "PASS");
  EXPECT_EQ(to_json(inst)["alpha"].size(), 30u);
}

}  // namespace
}  // namespace idlab
