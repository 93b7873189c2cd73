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

#include "idlab/adversarial/adversarial.hpp"

#include <algorithm>
#include <cmath>

#include "idlab/error.hpp"
#include "idlab/numerics/linalg.hpp"
#include "idlab/training/linear.hpp"

namespace idlab {

double AdversarialResiduals::max() const {
  return std::max({orthonormality, complement, fixes_basis, swaps_pair, orthogonality, symmetry});
}

TransformSpec AdversarialInstance::letter_transform() const {
  return TransformSpec(t, TransformClass::kOrthogonalSymmetric, ActsOn::kLetter);
}

TransformSpec AdversarialInstance::word_transform() const {
  return lift_to_word(letter_transform(), WordPosition::kSecond);
}

AdversarialInstance build_adversarial(const Matrix& encodings) {
  AdversarialInstance inst;
  inst.basis = encodings;
  auto [alpha, beta] = null_space_pair(encodings);
  inst.alpha = std::move(alpha);
  inst.beta = std::move(beta);
  const std::size_t m = inst.alpha.size();

  inst.t = Matrix::identity(m);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      const double a = inst.alpha[i], b = inst.beta[i];
      const double aj = inst.alpha[j], bj = inst.beta[j];
      inst.t(i, j) += -a * aj - b * bj + a * bj + b * aj;
    }
  }

  inst.w_same = inst.alpha;
  inst.w_same.insert(inst.w_same.end(), inst.alpha.begin(), inst.alpha.end());
  inst.w_diff = inst.alpha;
  inst.w_diff.insert(inst.w_diff.end(), inst.beta.begin(), inst.beta.end());

  AdversarialResiduals& r = inst.residuals;
  r.orthonormality = std::max({std::abs(dot(inst.alpha, inst.alpha) - 1.0),
                               std::abs(dot(inst.beta, inst.beta) - 1.0),
                               std::abs(dot(inst.alpha, inst.beta))});
  for (std::size_t k = 0; k < encodings.cols(); ++k) {
    const Vector x = encodings.column_copy(k);
    r.complement = std::max({r.complement, std::abs(dot(x, inst.alpha)), std::abs(dot(x, inst.beta))});
    const Vector tx = matvec(inst.t, x);
    for (std::size_t i = 0; i < m; ++i) r.fixes_basis = std::max(r.fixes_basis, std::abs(tx[i] - x[i]));
  }
  const Vector ta = matvec(inst.t, inst.alpha);
  const Vector tb = matvec(inst.t, inst.beta);
  for (std::size_t i = 0; i < m; ++i) {
    r.swaps_pair = std::max({r.swaps_pair, std::abs(ta[i] - inst.beta[i]),
                             std::abs(tb[i] - inst.alpha[i])});
  }
  const TransformProperties props = measure_transform(inst.t);
  r.orthogonality = props.orthogonality_residual;
  r.symmetry = props.symmetry_residual;
  return inst;
}

LabeledDataset adversarial_dataset(const AdversarialInstance& instance, RandomStream& rng,
                                   std::size_t nonidentical) {
  const std::size_t k = instance.basis.cols();
  const std::size_t m = instance.basis.rows();
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t a = 0; a < k; ++a) pairs.emplace_back(a, a);
  std::vector<std::pair<std::size_t, std::size_t>> mixed;
  for (std::size_t a = 0; a < k; ++a)
    for (std::size_t b = 0; b < k; ++b)
      if (a != b) mixed.emplace_back(a, b);
  require(nonidentical <= mixed.size(), ErrorKind::kInvalidArgument,
          "too many nonidentical pairs requested");
  for (std::size_t i : rng.sample_without_replacement(mixed.size(), nonidentical))
    pairs.push_back(mixed[i]);

  LabeledDataset data;
  data.inputs = Matrix(pairs.size(), 2 * m);
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    auto row = data.inputs.row(i);
    for (std::size_t j = 0; j < m; ++j) {
      row[j] = instance.basis(j, pairs[i].first);
      row[m + j] = instance.basis(j, pairs[i].second);
    }
    data.ratings.push_back(pairs[i].first == pairs[i].second ? 1.0 : 0.0);
    data.names.push_back(std::to_string(pairs[i].first) + "-" + std::to_string(pairs[i].second));
  }
  data.metadata = {{"task", "adversarial"}, {"letters", k}, {"dimension", m}};
  return data;
}

AdversarialVerification verify_adversarial_ridge(const AdversarialInstance& instance,
                                                 const LabeledDataset& data, double lambda) {
  AdversarialVerification v;
  const TransformSpec word_t = instance.word_transform();
  v.data_residual = data_invariance_residual(data, word_t);
  v.report = coupled_linear_check(TheoremCase::kRidge, data, word_t, lambda,
                                  {{"same", instance.w_same}}, kAdversarialTolerance);
  // The closed form is deterministic, so a single fit carries the claim.
  const LinearModel model = ridge_learner(data, lambda);
  v.rating_same = model.predict(instance.w_same);
  v.rating_diff = model.predict(instance.w_diff);
  v.deviation = std::abs(v.rating_same - v.rating_diff);
  return v;
}

AdversarialVerification verify_adversarial_sgd(const AdversarialInstance& instance,
                                               const LabeledDataset& data, const MlpSpec& spec,
                                               const CouplingConfig& config) {
  AdversarialVerification v;
  const TransformSpec word_t = instance.word_transform();
  v.data_residual = data_invariance_residual(data, word_t);
  CouplingConfig cfg = config;
  cfg.probes = {{"same", instance.w_same}};
  v.report = coupled_sgd_check(ModelSpec{spec}, data, word_t, cfg);
  const ProbeRating& r = v.report.ratings.front();
  v.rating_same = r.original;
  v.rating_diff = r.transformed;
  v.deviation = r.deviation;
  return v;
}

Matrix random_encodings(std::size_t m, std::size_t k, RandomStream& rng) {
  require(m >= k, ErrorKind::kInvalidArgument, "need at least as many rows as codes");
  for (int attempt = 0; attempt < 100; ++attempt) {
    Matrix x = gaussian_matrix(m, k, 0.0, 1.0, rng);
    if (numerical_rank(x) == k) return x;
  }
  fail(ErrorKind::kRankError, "could not draw linearly independent encodings");
}

nlohmann::json to_json(const AdversarialInstance& inst) {
  const auto& r = inst.residuals;
  return {{"dimension", inst.dimension()},
          {"letters", inst.basis.cols()},
          {"alpha", inst.alpha},
          {"beta", inst.beta},
          {"residuals",
           {{"orthonormality", r.orthonormality},
            {"complement", r.complement},
            {"fixes_basis", r.fixes_basis},
            {"swaps_pair", r.swaps_pair},
            {"orthogonality", r.orthogonality},
            {"symmetry", r.symmetry},
            {"max", r.max()}}}};
}

nlohmann::json to_json(const AdversarialVerification& v) {
  return {{"rating_same", v.rating_same},
          {"rating_diff", v.rating_diff},
          {"deviation", v.deviation},
          {"data_residual", v.data_residual},
          {"report", to_json(v.report)}};
}

}  // namespace idlab
