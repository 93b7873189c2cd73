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

#include "idlab/encodings/encoding.hpp"
#include "idlab/encodings/transform.hpp"
#include "idlab/error.hpp"
#include "idlab/invariance/invariance.hpp"
#include "idlab/numerics/linalg.hpp"
#include "idlab/tasks/alphabet.hpp"

namespace idlab {
namespace {

struct AlphabetCase {
  EncodingScheme scheme;
  AlphabetSplits splits;
  TransformSpec letter_t;
  TransformSpec word_t;
};

AlphabetCase make_case(EncodingKind kind, std::uint64_t seed) {
  RandomStream root(seed);
  RandomStream enc_rng = root.split("encoding");
  RandomStream data_rng = root.split("data");
  EncodingScheme scheme = make_scheme(
      kind, 26, kind == EncodingKind::kDistributed ? std::optional<std::size_t>(3) : std::nullopt,
      enc_rng);
  AlphabetSplits splits = alphabet_dataset(scheme, data_rng);
  TransformSpec letter_t = letter_swap_transform(scheme, letter('Y'), letter('Z'));
  TransformSpec word_t = lift_to_word(letter_t, WordPosition::kSecond);
  return {std::move(scheme), std::move(splits), std::move(letter_t), std::move(word_t)};
}

std::vector<ProbeWord> probes(const AlphabetCase& c) {
  std::vector<ProbeWord> out;
  for (const char* name : {"AA", "YY", "ZZ", "EY"}) {
    const std::size_t i = c.splits.test.index_of(name);
    const auto row = c.splits.test.inputs.row(i);
    out.push_back({name, Vector(row.begin(), row.end())});
  }
  return out;
}

CouplingConfig sgd_config(double lambda) {
  CouplingConfig cfg;
  cfg.train.optimizer.step_size = 0.025;
  cfg.train.reg = Regularizer{lambda > 0 ? RegKind::kL2Frobenius : RegKind::kNone, lambda, 0.0};
  cfg.train.dropout = false;
  cfg.steps = 200;
  cfg.seed = 3;
  return cfg;
}

TEST(TransformDatasetTest, IdentityAndInvolution) {
  const AlphabetCase c = make_case(EncodingKind::kHaar, 1);
  const LabeledDataset& d = c.splits.train;
  EXPECT_EQ(transform_dataset(d, Matrix::identity(52)).inputs, d.inputs);
  const LabeledDataset twice = transform_dataset(transform_dataset(d, c.word_t), c.word_t);
  EXPECT_LE(max_abs_diff(twice.inputs, d.inputs), 1e-12);
  EXPECT_EQ(twice.ratings, d.ratings);
  EXPECT_THROW(transform_dataset(d, Matrix::identity(26)), Error);
}

TEST(TransformDatasetTest, OneHotTrainSetIsFixedExactly) {
  const AlphabetCase c = make_case(EncodingKind::kOneHot, 2);
  EXPECT_EQ(transform_dataset(c.splits.train, c.word_t).inputs, c.splits.train.inputs);
  EXPECT_EQ(data_invariance_residual(c.splits.train, c.word_t), 0.0);
}

TEST(DataInvarianceTest, ResidualsOnAlphabet) {
  for (EncodingKind kind : {EncodingKind::kOneHot, EncodingKind::kHaar, EncodingKind::kDistributed}) {
    const AlphabetCase c = make_case(kind, 4);
    EXPECT_LE(data_invariance_residual(c.splits.train, c.word_t), 1e-12) << to_string(kind);
    EXPECT_LE(pair_invariance_residual(c.splits.train, c.letter_t), 1e-12) << to_string(kind);
    // AY moves to AZ.
    LabeledDataset ay = encode_words(c.scheme, {{letter('A'), letter('Y')}}, std::vector<double>{0});
    EXPECT_GT(data_invariance_residual(ay, c.word_t), 0.1) << to_string(kind);
  }
}

TEST(CoupledSgdTest, OneHotAndHaarCouple) {
  for (EncodingKind kind : {EncodingKind::kOneHot, EncodingKind::kHaar}) {
    const AlphabetCase c = make_case(kind, 5);
    CouplingConfig cfg = sgd_config(0.01);
    cfg.probes = probes(c);
    const CouplingReport r = coupled_sgd_check(MlpSpec{52, 2, 256}, c.splits.train, c.word_t, cfg);
    EXPECT_EQ(r.verdict, Verdict::kPass) << to_string(kind) << " " << r.diagnostic;
    EXPECT_EQ(r.param_deviation.size(), 201u);
    EXPECT_LE(r.max_param_deviation, 1e-8);
    EXPECT_LE(r.max_rating_deviation, 1e-6);
    EXPECT_TRUE(r.audit.passed());
  }
}

TEST(CoupledSgdTest, ShuffledBatchesCouple) {
  const AlphabetCase c = make_case(EncodingKind::kHaar, 6);
  CouplingConfig cfg = sgd_config(0.0);
  cfg.batch_size = 16;
  cfg.steps = 50;
  const CouplingReport r = coupled_sgd_check(MlpSpec{52, 1, 32}, c.splits.train, c.word_t, cfg);
  EXPECT_EQ(r.verdict, Verdict::kPass) << r.diagnostic;
}

TEST(CoupledSgdTest, DistributedIsPreconditionFailure) {
  const AlphabetCase c = make_case(EncodingKind::kDistributed, 7);
  CouplingConfig cfg = sgd_config(0.01);
  cfg.steps = 20;
  const CouplingReport r = coupled_sgd_check(MlpSpec{52, 2, 64}, c.splits.train, c.word_t, cfg);
  EXPECT_EQ(r.verdict, Verdict::kPreconditionFailure);
  EXPECT_FALSE(r.audit.passed());
  EXPECT_GT(r.max_param_deviation, 0.0);
}

TEST(CoupledRnnTest, OneHotAndHaarCouple) {
  for (EncodingKind kind : {EncodingKind::kOneHot, EncodingKind::kHaar}) {
    const AlphabetCase c = make_case(kind, 8);
    CouplingConfig cfg = sgd_config(0.0);
    cfg.probes = probes(c);
    const CouplingReport r = coupled_rnn_check(LstmSpec{26, 1, 32, 0.75}, c.splits.train,
                                               c.letter_t, cfg);
    EXPECT_EQ(r.verdict, Verdict::kPass) << to_string(kind) << " " << r.diagnostic;
    EXPECT_LE(r.max_param_deviation, 1e-8);
    EXPECT_FALSE(r.audit.extrapolated);
  }
}

TEST(CoupledRnnTest, DataWithYFailsHypothesis) {
  AlphabetCase c = make_case(EncodingKind::kOneHot, 9);
  const LabeledDataset extra =
      encode_words(c.scheme, {{letter('Y'), letter('A')}}, std::vector<double>{0});
  LabeledDataset& d = c.splits.train;
  Matrix grown(d.size() + 1, d.dimension());
  for (std::size_t i = 0; i < d.size(); ++i)
    std::copy(d.inputs.row(i).begin(), d.inputs.row(i).end(), grown.row(i).begin());
  std::copy(extra.inputs.row(0).begin(), extra.inputs.row(0).end(), grown.row(d.size()).begin());
  d.inputs = grown;
  d.ratings.push_back(0.0);
  d.names.push_back("YA");
  CouplingConfig cfg = sgd_config(0.0);
  cfg.steps = 10;
  const CouplingReport r = coupled_rnn_check(LstmSpec{26, 1, 8, 0.0}, d, c.letter_t, cfg);
  EXPECT_EQ(r.verdict, Verdict::kPreconditionFailure);
}

TEST(CoupledRnnTest, DeepStackIsMarkedExtrapolated) {
  const AlphabetCase c = make_case(EncodingKind::kOneHot, 10);
  CouplingConfig cfg = sgd_config(0.0);
  cfg.steps = 20;
  const CouplingReport r = coupled_rnn_check(LstmSpec{26, 2, 8, 0.75}, c.splits.train,
                                             c.letter_t, cfg);
  EXPECT_TRUE(r.audit.extrapolated);
  EXPECT_LE(r.max_param_deviation, 1e-8);
}

CouplingConfig adam_config() {
  CouplingConfig cfg;
  cfg.train.optimizer.kind = OptimizerKind::kAdam;
  cfg.train.optimizer.step_size = 0.01;
  cfg.train.optimizer.adam = faithful_adam(0.9, 0.999);
  cfg.train.reg = Regularizer{RegKind::kL2Frobenius, 0.01, 0.01};
  cfg.train.dropout = false;
  cfg.steps = 100;
  cfg.seed = 11;
  return cfg;
}

TEST(CoupledAdamTest, SignedPermutationCouples) {
  const AlphabetCase c = make_case(EncodingKind::kOneHot, 12);
  CouplingConfig cfg = adam_config();
  cfg.probes = probes(c);
  const CouplingReport r = coupled_adam_check(MlpSpec{52, 2, 256}, c.splits.train, c.word_t, cfg);
  EXPECT_EQ(r.verdict, Verdict::kPass) << r.diagnostic;
  EXPECT_EQ(r.moment1_residual.size(), 101u);
  EXPECT_LE(r.max_param_deviation, 1e-8);
  EXPECT_LE(r.max_moment1_residual, 1e-8);
  EXPECT_LE(r.max_moment2_residual, 1e-8);
}

TEST(CoupledAdamTest, HaarIsPreconditionFailure) {
  const AlphabetCase c = make_case(EncodingKind::kHaar, 13);
  CouplingConfig cfg = adam_config();
  cfg.steps = 20;
  const CouplingReport r = coupled_adam_check(MlpSpec{52, 1, 32}, c.splits.train, c.word_t, cfg);
  EXPECT_EQ(r.verdict, Verdict::kPreconditionFailure);
  EXPECT_GT(r.max_param_deviation, 1e-8);
}

TEST(CoupledAdamTest, FrozenSecondMomentIsDiagnosed) {
  const AlphabetCase c = make_case(EncodingKind::kOneHot, 14);
  CouplingConfig cfg = adam_config();
  cfg.train.optimizer.adam = faithful_adam(0.9, 1.0);
  cfg.steps = 5;
  const CouplingReport r = coupled_adam_check(MlpSpec{52, 1, 16}, c.splits.train, c.word_t, cfg);
  EXPECT_EQ(r.verdict, Verdict::kDivisionByZero);
  EXPECT_NE(r.diagnostic.find("zero"), std::string::npos);
}

TEST(AuditTest, EachViolatedHypothesisBlocksPass) {
  const AlphabetCase onehot = make_case(EncodingKind::kOneHot, 15);
  const AlphabetCase haar = make_case(EncodingKind::kHaar, 15);
  const ModelSpec mlp = MlpSpec{52, 1, 16};
  const ModelSpec lstm = LstmSpec{26, 1, 8, 0.5};
  const LabeledDataset& d = onehot.splits.train;

  CouplingConfig l1 = sgd_config(0.0);
  l1.train.reg = Regularizer{RegKind::kL1EntrySum, 0.01, 0.0};
  EXPECT_FALSE(audit_case(TheoremCase::kSgd, &mlp, haar.splits.train, haar.word_t, l1).passed());
  EXPECT_TRUE(audit_case(TheoremCase::kSgd, &mlp, d, onehot.word_t, l1).passed());

  CouplingConfig adam = sgd_config(0.0);
  adam.train.optimizer.kind = OptimizerKind::kAdam;
  EXPECT_FALSE(audit_case(TheoremCase::kSgd, &mlp, d, onehot.word_t, adam).passed());
  EXPECT_FALSE(audit_case(TheoremCase::kSgd, &lstm, d, onehot.word_t, sgd_config(0.0)).passed());

  EXPECT_TRUE(audit_case(TheoremCase::kRnn, &lstm, d, onehot.letter_t, sgd_config(0.0)).passed());
  EXPECT_FALSE(audit_case(TheoremCase::kRnn, &lstm, d, onehot.letter_t, sgd_config(0.01)).passed());
  CouplingConfig dropout = sgd_config(0.0);
  dropout.train.dropout = true;
  EXPECT_FALSE(audit_case(TheoremCase::kRnn, &lstm, d, onehot.letter_t, dropout).passed());
  CouplingConfig b_only = sgd_config(0.0);
  b_only.train.reg = Regularizer{RegKind::kL2Frobenius, 0.0, 0.01};
  EXPECT_TRUE(audit_case(TheoremCase::kRnn, &lstm, d, onehot.letter_t, b_only).passed());

  CouplingConfig practical = adam_config();
  practical.train.optimizer.adam = AdamSettings{};
  EXPECT_FALSE(audit_case(TheoremCase::kAdam, &mlp, d, onehot.word_t, practical).passed());
  EXPECT_TRUE(audit_case(TheoremCase::kAdam, &mlp, d, onehot.word_t, adam_config()).passed());
}

TEST(RatingImpossibilityTest, FixedWordHasZeroDeviation) {
  const AlphabetCase c = make_case(EncodingKind::kOneHot, 16);
  const ModelSpec spec = MlpSpec{52, 1, 32};
  TrainConfig cfg;
  const TrainResult r = train(spec, RandomStream(1), c.splits.train,
                              BatchSchedule::full_batch(72, 50), cfg);
  const auto aa = c.splits.test.inputs.row(c.splits.test.index_of("AA"));
  const RatingImpossibility out = rating_impossibility_check(spec, r.params, aa, c.word_t,
                                                             c.splits.train);
  EXPECT_EQ(out.deviation, 0.0);
  EXPECT_EQ(out.data_residual, 0.0);
}

TEST(CoupledLinearTest, OlsOnSyntheticAndRankFailure) {
  RandomStream rng(17);
  LabeledDataset d;
  d.inputs = gaussian_matrix(60, 12, 0.0, 1.0, rng);
  for (std::size_t i = 0; i < 60; ++i) d.ratings.push_back(rng.normal());
  const TransformSpec t(gaussian_matrix(12, 12, 0.0, 1.0, rng), TransformClass::kGeneralInvertible,
                        ActsOn::kWord);
  std::vector<ProbeWord> p;
  for (int k = 0; k < 4; ++k) {
    Vector w(12);
    for (double& v : w) v = rng.normal();
    p.push_back({"w" + std::to_string(k), w});
  }
  const CouplingReport r = coupled_linear_check(TheoremCase::kOls, d, t, 0.0, p);
  EXPECT_EQ(r.verdict, Verdict::kPass) << r.diagnostic;
  EXPECT_LE(r.max_rating_deviation, 1e-8);

  const AlphabetCase c = make_case(EncodingKind::kOneHot, 18);
  const CouplingReport rank = coupled_linear_check(TheoremCase::kOls, c.splits.train, c.word_t, 0.0, {});
  EXPECT_EQ(rank.verdict, Verdict::kPreconditionFailure);
  EXPECT_NE(rank.diagnostic.find("rank"), std::string::npos);
}

TEST(CoupledLinearTest, RidgeOnAlphabet) {
  for (EncodingKind kind : {EncodingKind::kOneHot, EncodingKind::kHaar}) {
    const AlphabetCase c = make_case(kind, 19);
    const CouplingReport r = coupled_linear_check(TheoremCase::kRidge, c.splits.train, c.word_t,
                                                  0.01, probes(c));
    EXPECT_EQ(r.verdict, Verdict::kPass) << r.diagnostic;
    EXPECT_LE(r.max_rating_deviation, 1e-8);
  }
  const AlphabetCase d = make_case(EncodingKind::kDistributed, 19);
  EXPECT_EQ(coupled_linear_check(TheoremCase::kRidge, d.splits.train, d.word_t, 0.01, {}).verdict,
            Verdict::kPreconditionFailure);
}

}  // namespace
}  // namespace idlab
