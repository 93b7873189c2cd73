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

#include "idlab/invariance/invariance.hpp"

#include <cmath>
#include <sstream>
#include <utility>

#include "idlab/error.hpp"
#include "idlab/numerics/linalg.hpp"

namespace idlab {

std::string_view to_string(TheoremCase c) {
  switch (c) {
    case TheoremCase::kOls: return "ols";
    case TheoremCase::kRidge: return "ridge";
    case TheoremCase::kSgd: return "sgd";
    case TheoremCase::kRnn: return "rnn";
    case TheoremCase::kAdam: return "adam";
  }
  return "unknown";
}

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::kPass: return "PASS";
    case Verdict::kFail: return "FAIL";
    case Verdict::kPreconditionFailure: return "PRECONDITION_FAILURE";
    case Verdict::kDivisionByZero: return "DIVISION_BY_ZERO";
  }
  return "unknown";
}

LabeledDataset transform_dataset(const LabeledDataset& data, const Matrix& t) {
  require(t.rows() == t.cols() && t.cols() == data.dimension(), ErrorKind::kInvalidArgument,
          "transform is " + std::to_string(t.rows()) + "x" + std::to_string(t.cols()) +
              " but inputs have dimension " + std::to_string(data.dimension()));
  LabeledDataset out = data;
  out.inputs = matmul_a_bt(data.inputs, t);
  return out;
}

LabeledDataset transform_dataset(const LabeledDataset& data, const TransformSpec& t) {
  return transform_dataset(data, t.matrix());
}

double data_invariance_residual(const LabeledDataset& data, const Matrix& t) {
  return max_abs_diff(data.inputs, transform_dataset(data, t).inputs);
}

double data_invariance_residual(const LabeledDataset& data, const TransformSpec& t) {
  return data_invariance_residual(data, t.matrix());
}

double pair_invariance_residual(const LabeledDataset& data, const TransformSpec& letter_t) {
  return data_invariance_residual(data, block_diagonal(letter_t.matrix(), letter_t.matrix()));
}

bool PreconditionAudit::passed() const {
  for (const auto& item : items)
    if (!item.ok) return false;
  return true;
}

std::string PreconditionAudit::failures() const {
  std::string out;
  for (const auto& item : items) {
    if (item.ok) continue;
    if (!out.empty()) out += "; ";
    out += item.predicate + " (" + item.detail + ")";
  }
  return out;
}

namespace {

std::string fmt(double v) {
  std::ostringstream s;
  s.precision(3);
  s << std::scientific << v;
  return s.str();
}

void add(PreconditionAudit& audit, std::string predicate, bool ok, std::string detail) {
  audit.items.push_back({std::move(predicate), ok, std::move(detail)});
}

bool is_sgd(const TrainConfig& c) { return c.optimizer.kind == OptimizerKind::kSgd; }

bool dropout_inactive(const ModelSpec* spec, const TrainConfig& c) {
  return spec == nullptr || !c.dropout || !uses_dropout(*spec);
}

void audit_transform_for_reg(PreconditionAudit& audit, const Regularizer& reg) {
  const auto& p = audit.properties;
  if (reg.kind == RegKind::kL1EntrySum && reg.lambda != 0.0) {
    audit.regularizer_compatible = p.signed_permutation;
    add(audit, "l1 penalty needs signed-permutation T", p.signed_permutation,
        std::string(to_string(audit.transform_class)));
  } else {
    add(audit, "T orthogonal", p.orthogonal(), "residual " + fmt(p.orthogonality_residual));
  }
}

}  // namespace

PreconditionAudit audit_case(TheoremCase theorem, const ModelSpec* spec, const LabeledDataset& data,
                             const TransformSpec& t, const CouplingConfig& config) {
  PreconditionAudit audit;
  audit.transform_class = t.transform_class();
  audit.properties = t.properties();
  audit.dropout_off = dropout_inactive(spec, config.train);
  const Regularizer& reg = config.train.reg;
  const bool on_letters = theorem == TheoremCase::kRnn;
  const std::size_t want = on_letters ? 2 * t.dimension() : t.dimension();
  add(audit, "T matches input dimension", want == data.dimension(),
      std::to_string(want) + " vs " + std::to_string(data.dimension()));
  if (want != data.dimension()) return audit;
  audit.data_residual = on_letters ? pair_invariance_residual(data, t)
                                   : data_invariance_residual(data, t);

  switch (theorem) {
    case TheoremCase::kOls:
      add(audit, "T invertible", std::abs(determinant(t.matrix())) > 0.0, "");
      break;
    case TheoremCase::kRidge:
      add(audit, "T orthogonal", t.properties().orthogonal(),
          "residual " + fmt(t.properties().orthogonality_residual));
      break;
    case TheoremCase::kSgd: {
      const bool feedforward = spec != nullptr && model_kind(*spec) == ModelKind::kMlp;
      add(audit, "model has the form f(B, Cw)", feedforward, "");
      add(audit, "optimizer is SGD", is_sgd(config.train),
          std::string(to_string(config.train.optimizer.kind)));
      audit_transform_for_reg(audit, reg);
      add(audit, "dropout off", audit.dropout_off, "");
      break;
    }
    case TheoremCase::kRnn: {
      const bool recurrent = spec != nullptr && model_kind(*spec) == ModelKind::kLstm;
      add(audit, "model is the shared-kernel recurrent model", recurrent, "");
      add(audit, "optimizer is SGD", is_sgd(config.train),
          std::string(to_string(config.train.optimizer.kind)));
      add(audit, "T2 symmetric orthogonal", t.properties().symmetric_orthogonal(),
          "orthogonality " + fmt(t.properties().orthogonality_residual) + ", symmetry " +
              fmt(t.properties().symmetry_residual));
      add(audit, "data invariant under T2 on both letters",
          audit.data_residual <= kPairInvarianceTolerance, "residual " + fmt(audit.data_residual));
      audit.regularizer_compatible = !reg.touches_c();
      add(audit, "no penalty on the input kernel", audit.regularizer_compatible, "");
      add(audit, "dropout off", audit.dropout_off, "");
      if (recurrent && depth_of(*spec) > 1) audit.extrapolated = true;
      break;
    }
    case TheoremCase::kAdam: {
      const bool feedforward = spec != nullptr && model_kind(*spec) == ModelKind::kMlp;
      add(audit, "model has the form f(B, Cw)", feedforward, "");
      const auto& opt = config.train.optimizer;
      add(audit, "optimizer is Adam", opt.kind == OptimizerKind::kAdam,
          std::string(to_string(opt.kind)));
      add(audit, "faithful Adam (eps = 0, no bias correction)",
          opt.adam.eps == 0.0 && !opt.adam.bias_correction, "eps " + fmt(opt.adam.eps));
      add(audit, "T signed permutation", t.properties().signed_permutation,
          std::string(to_string(t.transform_class())));
      add(audit, "dropout off", audit.dropout_off, "");
      break;
    }
  }
  return audit;
}

namespace {

double rating(const ModelSpec& spec, const SplitParams& params, std::span<const double> w) {
  return predict(spec, params, Matrix::row_vector(w))[0];
}

double param_gap(const SplitParams& a, const SplitParams& b, const Matrix& t) {
  return std::max(max_abs_diff_b(a, b), max_abs_diff(a.c, matmul(b.c, t)));
}

void finish(CouplingReport& report) {
  for (double d : report.param_deviation)
    report.max_param_deviation = std::max(report.max_param_deviation, d);
  for (double d : report.moment1_residual)
    report.max_moment1_residual = std::max(report.max_moment1_residual, d);
  for (double d : report.moment2_residual)
    report.max_moment2_residual = std::max(report.max_moment2_residual, d);
  for (const auto& r : report.ratings)
    report.max_rating_deviation = std::max(report.max_rating_deviation, r.deviation);

  if (!report.audit.passed()) {
    report.verdict = Verdict::kPreconditionFailure;
    if (report.diagnostic.empty()) report.diagnostic = report.audit.failures();
    return;
  }
  if (report.verdict == Verdict::kDivisionByZero) return;
  const bool ok = report.max_param_deviation <= report.tolerance &&
                  report.max_moment1_residual <= report.tolerance &&
                  report.max_moment2_residual <= report.tolerance &&
                  report.max_rating_deviation <= report.rating_tolerance;
  report.verdict = ok ? Verdict::kPass : Verdict::kFail;
  if (!ok && report.diagnostic.empty()) {
    report.diagnostic = "max param deviation " + fmt(report.max_param_deviation) +
                        ", max rating deviation " + fmt(report.max_rating_deviation);
  }
}

// Runs the two trainings in lockstep. `word_t` moves the data and the probes;
// `c_t` maps C′ back onto C; `c_init` maps C₀ to C′₀.
CouplingReport run_coupled(TheoremCase theorem, const ModelSpec& spec, const LabeledDataset& data,
                           const Matrix& word_t, const Matrix& c_t, const Matrix& c_init,
                           PreconditionAudit audit, const CouplingConfig& config, bool track_moments) {
  CouplingReport report;
  report.theorem = theorem;
  report.audit = std::move(audit);
  report.tolerance = config.tolerance;
  report.rating_tolerance = config.rating_tolerance;

  const LabeledDataset moved = transform_dataset(data, word_t);
  const BatchSchedule schedule =
      config.batch_size == 0
          ? BatchSchedule::full_batch(data.size(), config.steps)
          : BatchSchedule::shuffled(data.size(), config.batch_size,
                                    (config.steps * config.batch_size + data.size() - 1) /
                                        data.size(),
                                    RandomStream(config.seed).split("batches"));
  require(schedule.steps() >= config.steps, ErrorKind::kInvalidArgument, "schedule too short");

  const RandomStream root(config.seed);
  RandomStream init_rng = root.split("init");
  SplitParams init_a =
      init_model(spec, config.train.init_mean, config.train.init_variance, init_rng);
  SplitParams init_b = init_a;
  init_b.c = matmul(init_a.c, c_init);

  // Identical dropout streams give identical masks when dropout is on.
  Trainer a(spec, std::move(init_a), data, schedule, config.train, root.split("dropout"));
  Trainer b(spec, std::move(init_b), moved, schedule, config.train, root.split("dropout"));

  Matrix abs_t;
  Matrix t_transposed;
  if (track_moments) {
    t_transposed = c_t.transposed();
    abs_t = abs(t_transposed);
  }
  report.param_deviation.push_back(param_gap(a.params(), b.params(), c_t));
  if (track_moments) {
    report.moment1_residual.push_back(0.0);
    report.moment2_residual.push_back(0.0);
  }
  try {
    for (std::size_t i = 0; i < config.steps; ++i) {
      a.step();
      b.step();
      report.param_deviation.push_back(param_gap(a.params(), b.params(), c_t));
      if (track_moments) {
        const auto& sa = a.state();
        const auto& sb = b.state();
        report.moment1_residual.push_back(
            std::max(max_abs_diff_b(sa.first, sb.first),
                     max_abs_diff(sb.first.c, matmul(sa.first.c, t_transposed))));
        report.moment2_residual.push_back(
            std::max(max_abs_diff_b(sa.second, sb.second),
                     max_abs_diff(sb.second.c, matmul(sa.second.c, abs_t))));
      }
    }
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::kDivisionByZero) throw;
    report.verdict = Verdict::kDivisionByZero;
    report.diagnostic = e.what();
  }

  for (const auto& probe : config.probes) {
    require(probe.w.size() == data.dimension(), ErrorKind::kInvalidArgument,
            "probe '" + probe.name + "' has the wrong dimension");
    ProbeRating r;
    r.name = probe.name;
    r.original = rating(spec, a.params(), probe.w);
    r.transformed = rating(spec, b.params(), matvec(word_t, probe.w));
    r.deviation = std::abs(r.original - r.transformed);
    report.ratings.push_back(r);
  }
  finish(report);
  return report;
}

}  // namespace

CouplingReport coupled_sgd_check(const ModelSpec& spec, const LabeledDataset& data,
                                 const TransformSpec& t, const CouplingConfig& config) {
  PreconditionAudit audit = audit_case(TheoremCase::kSgd, &spec, data, t, config);
  require(t.dimension() == data.dimension(), ErrorKind::kInvalidArgument,
          "transform dimension does not match the data");
  return run_coupled(TheoremCase::kSgd, spec, data, t.matrix(), t.matrix(), t.inverse_matrix(),
                     std::move(audit), config, false);
}

CouplingReport coupled_rnn_check(const LstmSpec& spec, const LabeledDataset& data,
                                 const TransformSpec& letter_t, const CouplingConfig& config) {
  const ModelSpec model = spec;
  PreconditionAudit audit = audit_case(TheoremCase::kRnn, &model, data, letter_t, config);
  require(2 * letter_t.dimension() == data.dimension(), ErrorKind::kInvalidArgument,
          "letter transform dimension does not match the data");
  const Matrix t2 = letter_t.matrix();
  const Matrix word_t = block_diagonal(t2, t2);
  // T₂ symmetric orthogonal is its own inverse; otherwise fall back to T₂⁻¹.
  const Matrix c_init = letter_t.properties().symmetric_orthogonal() ? t2 : letter_t.inverse_matrix();
  return run_coupled(TheoremCase::kRnn, model, data, word_t, t2, c_init, std::move(audit), config,
                     false);
}

CouplingReport coupled_adam_check(const ModelSpec& spec, const LabeledDataset& data,
                                  const TransformSpec& t, const CouplingConfig& config) {
  PreconditionAudit audit = audit_case(TheoremCase::kAdam, &spec, data, t, config);
  require(t.dimension() == data.dimension(), ErrorKind::kInvalidArgument,
          "transform dimension does not match the data");
  return run_coupled(TheoremCase::kAdam, spec, data, t.matrix(), t.matrix(), t.inverse_matrix(),
                     std::move(audit), config, true);
}

CouplingReport coupled_linear_check(TheoremCase theorem, const LabeledDataset& data,
                                    const TransformSpec& t, double lambda,
                                    const std::vector<ProbeWord>& probes, double tolerance) {
  require(theorem == TheoremCase::kOls || theorem == TheoremCase::kRidge,
          ErrorKind::kInvalidArgument, "linear check covers the OLS and ridge cases");
  CouplingConfig config;
  CouplingReport report;
  report.theorem = theorem;
  report.tolerance = tolerance;
  report.audit = audit_case(theorem, nullptr, data, t, config);
  if (theorem == TheoremCase::kRidge)
    add(report.audit, "lambda > 0", lambda > 0.0, fmt(lambda));
  if (!report.audit.passed() && t.dimension() != data.dimension()) {
    finish(report);
    return report;
  }
  const LabeledDataset moved = transform_dataset(data, t);
  auto learn = [&](const LabeledDataset& d) {
    return theorem == TheoremCase::kOls ? ols_learner(d) : ridge_learner(d, lambda);
  };
  LinearModel a, b;
  try {
    a = learn(data);
    b = learn(moved);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::kNoUniqueMinimizer && e.kind() != ErrorKind::kInvalidArgument)
      throw;
    add(report.audit, "unique minimizer exists", false, e.what());
    finish(report);
    return report;
  }
  // r = c′·(Tw) + b′ = (Tᵀc′)·w + b′.
  const Vector pulled = matvec(t.matrix().transposed(), b.c);
  double gap = std::abs(a.bias - b.bias);
  for (std::size_t j = 0; j < pulled.size(); ++j) gap = std::max(gap, std::abs(pulled[j] - a.c[j]));
  report.param_deviation.push_back(gap);
  for (const auto& probe : probes) {
    ProbeRating r;
    r.name = probe.name;
    r.original = a.predict(probe.w);
    r.transformed = b.predict(matvec(t.matrix(), probe.w));
    r.deviation = std::abs(r.original - r.transformed);
    report.ratings.push_back(r);
  }
  report.rating_tolerance = tolerance;
  finish(report);
  return report;
}

RatingImpossibility rating_impossibility_check(const ModelSpec& spec, const SplitParams& params,
                                               std::span<const double> w, const TransformSpec& t,
                                               const LabeledDataset& data) {
  RatingImpossibility out;
  out.rating_w = rating(spec, params, w);
  out.rating_tw = rating(spec, params, matvec(t.matrix(), w));
  out.deviation = std::abs(out.rating_w - out.rating_tw);
  out.data_residual = data_invariance_residual(data, t);
  return out;
}

nlohmann::json to_json(const CouplingReport& report) {
  nlohmann::json audit_items = nlohmann::json::array();
  for (const auto& item : report.audit.items)
    audit_items.push_back({{"predicate", item.predicate}, {"ok", item.ok}, {"detail", item.detail}});
  nlohmann::json ratings = nlohmann::json::array();
  for (const auto& r : report.ratings) {
    ratings.push_back({{"word", r.name},
                       {"original", r.original},
                       {"transformed", r.transformed},
                       {"deviation", r.deviation}});
  }
  return {{"case", to_string(report.theorem)},
          {"verdict", to_string(report.verdict)},
          {"diagnostic", report.diagnostic},
          {"steps", report.param_deviation.empty() ? 0 : report.param_deviation.size() - 1},
          {"max_param_deviation", report.max_param_deviation},
          {"max_moment1_residual", report.max_moment1_residual},
          {"max_moment2_residual", report.max_moment2_residual},
          {"max_rating_deviation", report.max_rating_deviation},
          {"tolerance", report.tolerance},
          {"rating_tolerance", report.rating_tolerance},
          {"audit",
           {{"transform_class", to_string(report.audit.transform_class)},
            {"orthogonality_residual", report.audit.properties.orthogonality_residual},
            {"symmetry_residual", report.audit.properties.symmetry_residual},
            {"data_residual", report.audit.data_residual},
            {"dropout_off", report.audit.dropout_off},
            {"regularizer_compatible", report.audit.regularizer_compatible},
            {"extrapolated", report.audit.extrapolated},
            {"passed", report.audit.passed()},
            {"items", audit_items}}},
          {"ratings", ratings}};
}

}  // namespace idlab
