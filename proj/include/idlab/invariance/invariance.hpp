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
#include <vector>

#include <json.hpp>

#include "idlab/encodings/transform.hpp"
#include "idlab/nn/model.hpp"
#include "idlab/tasks/dataset.hpp"
#include "idlab/training/linear.hpp"
#include "idlab/training/train.hpp"

namespace idlab {

enum class TheoremCase { kOls, kRidge, kSgd, kRnn, kAdam };
enum class Verdict { kPass, kFail, kPreconditionFailure, kDivisionByZero };

std::string_view to_string(TheoremCase c);
std::string_view to_string(Verdict v);

inline constexpr double kCouplingTolerance = 1e-8;
inline constexpr double kRatingTolerance = 1e-6;
inline constexpr double kPairInvarianceTolerance = 1e-12;

// Inputs become T·w; ratings and names are kept.
LabeledDataset transform_dataset(const LabeledDataset& data, const Matrix& t);
LabeledDataset transform_dataset(const LabeledDataset& data, const TransformSpec& t);

// max |w − T·w| over the dataset.
double data_invariance_residual(const LabeledDataset& data, const Matrix& t);
double data_invariance_residual(const LabeledDataset& data, const TransformSpec& t);
// Residual under T₂ applied to both letters of every pair.
double pair_invariance_residual(const LabeledDataset& data, const TransformSpec& letter_t);

struct AuditItem {
  std::string predicate;
  bool ok = true;
  std::string detail;
};

struct PreconditionAudit {
  TransformClass transform_class = TransformClass::kGeneralInvertible;
  TransformProperties properties;
  double data_residual = 0.0;
  bool dropout_off = true;
  bool regularizer_compatible = true;
  // Set when the case runs outside the setting the theorem states.
  bool extrapolated = false;
  std::vector<AuditItem> items;

  bool passed() const;
  std::string failures() const;
};

struct ProbeWord {
  std::string name;
  Vector w;
};

struct ProbeRating {
  std::string name;
  double original = 0.0;     // run on D, evaluated at w
  double transformed = 0.0;  // coupled run on τ(D), evaluated at τ(w)
  double deviation = 0.0;
};

struct CouplingReport {
  TheoremCase theorem = TheoremCase::kSgd;
  // Index 0 compares the initializations; index i the params after step i.
  std::vector<double> param_deviation;
  std::vector<double> moment1_residual;  // Adam only
  std::vector<double> moment2_residual;  // Adam only
  std::vector<ProbeRating> ratings;
  double max_param_deviation = 0.0;
  double max_moment1_residual = 0.0;
  double max_moment2_residual = 0.0;
  double max_rating_deviation = 0.0;
  PreconditionAudit audit;
  Verdict verdict = Verdict::kFail;
  std::string diagnostic;
  double tolerance = kCouplingTolerance;
  double rating_tolerance = kRatingTolerance;
};

nlohmann::json to_json(const CouplingReport& report);

struct CouplingConfig {
  TrainConfig train;
  std::size_t steps = 200;
  // 0 selects full-batch steps; otherwise shuffled batches of this size.
  std::size_t batch_size = 0;
  std::uint64_t seed = 0;
  std::vector<ProbeWord> probes;
  double tolerance = kCouplingTolerance;
  double rating_tolerance = kRatingTolerance;
};

// Hypothesis predicates for each case, evaluated without training.
PreconditionAudit audit_case(TheoremCase theorem, const ModelSpec* spec, const LabeledDataset& data,
                             const TransformSpec& t, const CouplingConfig& config);

// SGD on D from (B₀, C₀) and on τ(D) from (B₀, C₀T⁻¹); deviation of
// (B′ᵢ, C′ᵢT) from (Bᵢ, Cᵢ).
CouplingReport coupled_sgd_check(const ModelSpec& spec, const LabeledDataset& data,
                                 const TransformSpec& t, const CouplingConfig& config);

// Shared-kernel recurrent model; the second run starts from C₀T₂ and trains
// on the data moved by T₂ on both letters. Ratings compare f(w) with
// f′((τ₂⊗τ₂)w).
CouplingReport coupled_rnn_check(const LstmSpec& spec, const LabeledDataset& data,
                                 const TransformSpec& letter_t, const CouplingConfig& config);

// Adam version, with M′¹ᶜ = M¹ᶜTᵀ and M′²ᶜ = M²ᶜ|Tᵀ| tracked per step.
CouplingReport coupled_adam_check(const ModelSpec& spec, const LabeledDataset& data,
                                  const TransformSpec& t, const CouplingConfig& config);

// Closed-form learners: OLS (any invertible T) and ridge (orthogonal T).
CouplingReport coupled_linear_check(TheoremCase theorem, const LabeledDataset& data,
                                    const TransformSpec& t, double lambda,
                                    const std::vector<ProbeWord>& probes,
                                    double tolerance = kCouplingTolerance);

struct RatingImpossibility {
  double rating_w = 0.0;
  double rating_tw = 0.0;
  double deviation = 0.0;
  double data_residual = 0.0;
};

// Single-run view: ratings of one trained learner at w and at τ(w).
RatingImpossibility rating_impossibility_check(const ModelSpec& spec, const SplitParams& params,
                                               std::span<const double> w, const TransformSpec& t,
                                               const LabeledDataset& data);

}  // namespace idlab
