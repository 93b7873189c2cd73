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

#include "idlab/cli/experiment.hpp"

#include <atomic>
#include <exception>
#include <fstream>
#include <functional>
#include <mutex>
#include <optional>
#include <thread>

#include "idlab/adversarial/adversarial.hpp"
#include "idlab/encodings/transform.hpp"
#include "idlab/error.hpp"
#include "idlab/numerics/linalg.hpp"
#include "idlab/tasks/alphabet.hpp"
#include "idlab/tasks/ie.hpp"

namespace idlab {

namespace {

// Runs fn(0..n-1) on up to `workers` threads. The first failure by index is
// rethrown after every worker has stopped.
void parallel_for(std::size_t n, std::size_t workers, const std::function<void(std::size_t)>& fn) {
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        fn(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  workers = std::max<std::size_t>(1, std::min(workers, n));
  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& th : pool) th.join();
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

template <typename F>
auto with_trial(std::size_t trial, F&& f) {
  try {
    return f();
  } catch (const Error& e) {
    fail(e.kind(), "trial " + std::to_string(trial) + ": " + e.message());
  }
}

std::string hex_digest(std::string_view text) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(fnv1a64(text)));
  return buf;
}

BatchSchedule make_schedule(const LearnerSetup& l, std::size_t n, const RandomStream& trial) {
  if (l.batch_size == 0) return BatchSchedule::full_batch(n, l.epochs);
  RandomStream rng = trial.split("batches");
  return BatchSchedule::shuffled(n, l.batch_size, l.epochs, rng);
}

struct TrialOutput {
  std::vector<RatingRow> ratings;
  std::vector<LossRow> losses;
  nlohmann::json manifest;
};

void collect(const std::string& experiment, const std::string& series, const LearnerSetup& l,
             std::size_t trial, const LabeledDataset& test, const TrainResult& r,
             TrialOutput& out) {
  const Vector f = predict(l.spec, r.params, test.inputs);
  const std::string model(to_string(model_kind(l.spec)));
  for (std::size_t i = 0; i < test.size(); ++i)
    out.ratings.push_back({trial, experiment, series, model, depth_of(l.spec), test.names[i], f[i]});
  for (const EpochLoss& e : r.losses) {
    out.losses.push_back({trial, e.epoch, "train", e.train, series});
    if (e.test) out.losses.push_back({trial, e.epoch, "test", *e.test, series});
  }
}

TrialReport assemble(const ExperimentConfig& c, std::vector<std::string> words,
                     std::vector<std::string> series, std::vector<TrialOutput>& trials,
                     nlohmann::json manifest) {
  TrialReport report;
  report.experiment = std::string(to_string(c.experiment));
  report.words = std::move(words);
  report.series = std::move(series);
  nlohmann::json per_trial = nlohmann::json::array();
  for (TrialOutput& t : trials) {
    report.ratings.insert(report.ratings.end(), t.ratings.begin(), t.ratings.end());
    report.losses.insert(report.losses.end(), t.losses.begin(), t.losses.end());
    per_trial.push_back(std::move(t.manifest));
  }
  manifest["config"] = to_json(c);
  manifest["trials"] = std::move(per_trial);
  report.manifest = std::move(manifest);
  return report;
}

TrialReport run_alphabet(const ExperimentConfig& c) {
  const LearnerSetup learner = alphabet_learner(c);
  const auto kinds = c.resolved_encodings();
  std::vector<TrialOutput> trials(c.trials);
  parallel_for(c.trials, worker_count(c), [&](std::size_t t) {
    with_trial(t, [&] {
      const RandomStream trial = RandomStream(c.seed).split("trial", t);
      RandomStream data_rng = trial.split("data");
      const std::vector<Word> words = alphabet_train_words(data_rng);
      std::string joined;
      for (const Word& w : words) joined += word_name(w) + " ";
      TrialOutput& out = trials[t];
      out.manifest = {{"trial", t},
                      {"stream", trial.path_string()},
                      {"train_words_digest", hex_digest(joined)},
                      {"encodings", nlohmann::json::object()}};
      for (EncodingKind kind : kinds) {
        RandomStream enc_rng = trial.split("encoding", static_cast<std::uint64_t>(kind));
        const EncodingScheme scheme = make_scheme(
            kind, 26,
            kind == EncodingKind::kDistributed ? std::optional<std::size_t>(c.distributed_bits)
                                               : std::nullopt,
            enc_rng);
        const AlphabetSplits splits = alphabet_splits(scheme, words);
        const BatchSchedule schedule = make_schedule(learner, splits.train.size(), trial);
        const std::string series(to_string(kind));
        TrainResult r;
        try {
          r = train(learner.spec, trial.split("train"), splits.train, schedule, learner.train,
                    &splits.test);
        } catch (const Error& e) {
          fail(e.kind(), series + ": " + e.message());
        }
        collect("alphabet", series, learner, t, splits.test, r, out);
        std::string code;
        for (double v : scheme.code().values()) code += format_number(v) + " ";
        out.manifest["encodings"][series] = {{"xy", word_name(splits.xy)},
                                             {"code_digest", hex_digest(code)}};
      }
    });
  });
  std::vector<std::string> words(kAlphabetTestWords.begin(), kAlphabetTestWords.end());
  std::vector<std::string> series;
  for (EncodingKind k : kinds) series.emplace_back(to_string(k));
  nlohmann::json manifest = {{"learner", {{"spec", to_json(learner.spec)},
                                          {"optimizer", std::string(to_string(learner.train.optimizer.kind))},
                                          {"step_size", learner.train.optimizer.step_size},
                                          {"epochs", learner.epochs},
                                          {"batch_size", learner.batch_size == 0 ? 72 : learner.batch_size}}}};
  return assemble(c, std::move(words), std::move(series), trials, std::move(manifest));
}

void write_cv_loss(const std::filesystem::path& path, const CvTrainResult& cv) {
  std::ofstream out(path);
  require(out.good(), ErrorKind::kIoError, "cannot write " + path.string());
  out << "epoch,train_loss,held_out_loss,held_out_accuracy\n";
  for (std::size_t e = 0; e < cv.losses.size(); ++e)
    out << cv.losses[e].epoch << ',' << format_number(cv.losses[e].train) << ','
        << format_number(*cv.losses[e].test) << ',' << format_number(cv.held_out_accuracy[e])
        << '\n';
}

void prepare_out(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  require(!ec, ErrorKind::kIoError, "cannot create " + dir.string() + ": " + ec.message());
}

}  // namespace

CvTrainResult train_experiment_cv(const ExperimentConfig& c, const MnistStore& store) {
  CvTrainConfig cv_cfg = c.cv;
  cv_cfg.keep_snapshots = true;
  return train_cv_model(store, cv_cfg, RandomStream(c.seed).split("cv"));
}

TrialReport run_mnist_experiment(const ExperimentConfig& c, const MnistStore& store,
                                 const CvTrainResult* shared_cv) {
  c.validate();
  const LearnerSetup learner = ie_learner(c);
  std::optional<CvTrainResult> own;
  if (shared_cv == nullptr) own = train_experiment_cv(c, store);
  const CvTrainResult& cv = shared_cv != nullptr ? *shared_cv : *own;
  require(cv.snapshots.size() >= c.cv_undertrained_epochs, ErrorKind::kInvalidArgument,
          "CV model has fewer snapshots than the undertrained epoch");
  const std::size_t optimal = cv.best_epoch();
  const std::array<std::pair<std::string, std::size_t>, 2> regimes = {
      std::pair<std::string, std::size_t>{"cv-undertrained", c.cv_undertrained_epochs},
      std::pair<std::string, std::size_t>{"cv-optimal", optimal}};

  std::vector<TrialOutput> trials(c.trials);
  parallel_for(c.trials, worker_count(c), [&](std::size_t t) {
    with_trial(t, [&] {
      const RandomStream trial = RandomStream(c.seed).split("trial", t);
      RandomStream data_rng = trial.split("data");
      const IeSelection sel = select_ie_images(store, data_rng, c.deja_vu, cv.train_indices);
      TrialOutput& out = trials[t];
      out.manifest = {{"trial", t}, {"stream", trial.path_string()}, {"selection", sel.manifest()}};
      for (const auto& [series, epoch] : regimes) {
        const IeSplits splits = encode_ie_splits(sel, cv.params_at(epoch), c.cv.spec, store);
        const BatchSchedule schedule = make_schedule(learner, splits.train.size(), trial);
        TrainResult r;
        try {
          r = train(learner.spec, trial.split("train"), splits.train, schedule, learner.train,
                    &splits.test);
        } catch (const Error& e) {
          fail(e.kind(), series + ": " + e.message());
        }
        collect("mnist", series, learner, t, splits.test, r, out);
      }
    });
  });

  nlohmann::json cv_doc = c.cv.to_json();
  cv_doc["undertrained_epoch"] = c.cv_undertrained_epochs;
  cv_doc["optimal_epoch"] = optimal;
  cv_doc["train_indices_digest"] = index_digest(cv.train_indices);
  cv_doc["held_out_indices_digest"] = index_digest(cv.held_out_indices);
  nlohmann::json curve = nlohmann::json::array();
  for (std::size_t e = 0; e < cv.losses.size(); ++e)
    curve.push_back({{"epoch", cv.losses[e].epoch},
                     {"train_loss", cv.losses[e].train},
                     {"held_out_loss", *cv.losses[e].test},
                     {"held_out_accuracy", cv.held_out_accuracy[e]}});
  cv_doc["curve"] = curve;
  nlohmann::json manifest = {
      {"cv", cv_doc},
      {"learner", {{"spec", to_json(learner.spec)},
                   {"optimizer", std::string(to_string(learner.train.optimizer.kind))},
                   {"step_size", learner.train.optimizer.step_size},
                   {"epochs", learner.epochs},
                   {"batch_size", learner.batch_size == 0 ? 2400 : learner.batch_size}}}};
  std::vector<std::string> words(kIeTestPairs.begin(), kIeTestPairs.end());
  TrialReport report = assemble(c, std::move(words), {regimes[0].first, regimes[1].first}, trials,
                                std::move(manifest));
  if (!report.empty()) {
    emit_report(report, c.out);
    write_cv_loss(c.out / "cv_loss.csv", cv);
  }
  return report;
}

TrialReport run_experiment(const ExperimentConfig& c) {
  c.validate();
  switch (c.experiment) {
    case Experiment::kAlphabet: {
      TrialReport report = run_alphabet(c);
      if (!report.empty()) emit_report(report, c.out);
      return report;
    }
    case Experiment::kMnist: {
      if (c.trials == 0) {
        TrialReport empty;
        empty.experiment = "mnist";
        return empty;
      }
      const std::filesystem::path dir = c.mnist_dir.empty() ? default_mnist_dir() : c.mnist_dir;
      const MnistStore store = load_mnist(dir);
      return run_mnist_experiment(c, store);
    }
    default:
      fail(ErrorKind::kInvalidArgument,
           "run_experiment handles alphabet and mnist; use the verify or adversarial suites");
  }
}

// --- verification -----------------------------------------------------------

bool VerificationSuite::any_fail() const {
  for (const auto& c : cases)
    if (c.report.verdict == Verdict::kFail) return true;
  return false;
}

nlohmann::json VerificationSuite::to_json() const {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& c : cases) {
    nlohmann::json doc = idlab::to_json(c.report);
    doc["case"] = c.name;
    doc["encoding"] = c.encoding;
    doc["model"] = c.model;
    doc["depth"] = c.depth;
    doc["optimizer"] = c.optimizer;
    out.push_back(std::move(doc));
  }
  return out;
}

void write_verification_csv(const std::filesystem::path& path, const VerificationSuite& suite) {
  std::ofstream out(path, std::ios::binary);
  require(out.good(), ErrorKind::kIoError, "cannot write " + path.string());
  out << "case,encoding,model,depth,optimizer,step,param_deviation,moment1_residual,"
         "moment2_residual,verdict\n";
  for (const auto& c : suite.cases) {
    const CouplingReport& r = c.report;
    const std::string verdict(to_string(r.verdict));
    if (r.param_deviation.empty()) {
      out << c.name << ',' << c.encoding << ',' << c.model << ',' << c.depth << ','
          << c.optimizer << ",0,,,," << verdict << '\n';
      continue;
    }
    for (std::size_t s = 0; s < r.param_deviation.size(); ++s) {
      out << c.name << ',' << c.encoding << ',' << c.model << ',' << c.depth << ','
          << c.optimizer << ',' << s << ',' << format_number(r.param_deviation[s]) << ',';
      if (s < r.moment1_residual.size()) out << format_number(r.moment1_residual[s]);
      out << ',';
      if (s < r.moment2_residual.size()) out << format_number(r.moment2_residual[s]);
      out << ',' << verdict << '\n';
    }
  }
}

namespace {

struct VerifyAlphabet {
  std::string encoding;
  AlphabetSplits splits;
  TransformSpec letter_t;
  TransformSpec word_t;
  std::vector<ProbeWord> probes;
};

VerifyAlphabet verify_alphabet(EncodingKind kind, const ExperimentConfig& c) {
  const RandomStream root = RandomStream(c.seed).split("verify", static_cast<std::uint64_t>(kind));
  RandomStream enc_rng = root.split("encoding");
  RandomStream data_rng = root.split("data");
  const EncodingScheme scheme = make_scheme(
      kind, 26,
      kind == EncodingKind::kDistributed ? std::optional<std::size_t>(c.distributed_bits)
                                         : std::nullopt,
      enc_rng);
  AlphabetSplits splits = alphabet_dataset(scheme, data_rng);
  TransformSpec letter_t = letter_swap_transform(scheme, letter('Y'), letter('Z'));
  TransformSpec word_t = lift_to_word(letter_t, WordPosition::kSecond);
  std::vector<ProbeWord> probes;
  for (const char* name : {"AA", "YY", "ZZ", "EY"}) {
    const auto row = splits.test.inputs.row(splits.test.index_of(name));
    probes.push_back({name, Vector(row.begin(), row.end())});
  }
  return {std::string(to_string(kind)), std::move(splits), std::move(letter_t), std::move(word_t),
          std::move(probes)};
}

CouplingConfig sgd_coupling(const ExperimentConfig& c, double lambda) {
  CouplingConfig cfg;
  cfg.train.optimizer.kind = OptimizerKind::kSgd;
  cfg.train.optimizer.step_size = 0.025;
  cfg.train.reg = Regularizer{lambda > 0 ? RegKind::kL2Frobenius : RegKind::kNone, lambda, 0.0};
  cfg.train.init_variance = c.init_variance;
  cfg.train.dropout = false;
  cfg.steps = c.verify_steps;
  cfg.seed = c.seed;
  return cfg;
}

struct OlsSynthetic {
  LabeledDataset data;
  TransformSpec t;
  std::vector<ProbeWord> probes;
};

OlsSynthetic ols_synthetic(const ExperimentConfig& c) {
  RandomStream rng = RandomStream(c.seed).split("verify-ols");
  const std::size_t n = 100, d = 20;
  LabeledDataset data;
  data.inputs = gaussian_matrix(n, d, 0.0, 1.0, rng);
  data.ratings.resize(n);
  for (double& r : data.ratings) r = rng.normal();
  Matrix t = gaussian_matrix(d, d, 0.0, 1.0, rng);
  std::vector<ProbeWord> probes;
  for (std::size_t i = 0; i < 3; ++i) {
    const Matrix w = gaussian_matrix(1, d, 0.0, 1.0, rng);
    probes.push_back({"probe" + std::to_string(i), Vector(w.values().begin(), w.values().end())});
  }
  return {std::move(data), TransformSpec(std::move(t), TransformClass::kGeneralInvertible, ActsOn::kWord),
          std::move(probes)};
}

}  // namespace

VerificationSuite run_verification_suite(const ExperimentConfig& c) {
  c.validate();
  std::vector<VerifyAlphabet> setups;
  for (EncodingKind kind : c.resolved_encodings()) setups.push_back(verify_alphabet(kind, c));
  const OlsSynthetic ols = ols_synthetic(c);

  std::vector<std::function<VerificationCase()>> jobs;
  for (const VerifyAlphabet& s : setups) {
    for (std::size_t depth = 1; depth <= 3; ++depth) {
      for (double lambda : {0.0, 0.01}) {
        jobs.push_back([&s, &c, depth, lambda] {
          const CouplingConfig cfg = [&] {
            CouplingConfig k = sgd_coupling(c, lambda);
            k.probes = s.probes;
            return k;
          }();
          return VerificationCase{lambda > 0 ? "sgd/l2=0.01" : "sgd/l2=0", s.encoding, "mlp",
                                  depth, "sgd",
                                  coupled_sgd_check(MlpSpec{52, depth, 256}, s.splits.train,
                                                    s.word_t, cfg)};
        });
      }
    }
    for (std::size_t depth = 1; depth <= 3; ++depth) {
      jobs.push_back([&s, &c, depth] {
        CouplingConfig cfg = sgd_coupling(c, 0.0);
        cfg.probes = s.probes;
        return VerificationCase{"rnn", s.encoding, "lstm", depth, "sgd",
                                coupled_rnn_check(LstmSpec{26, depth, 32, 0.75}, s.splits.train,
                                                  s.letter_t, cfg)};
      });
    }
    jobs.push_back([&s, &c] {
      CouplingConfig cfg = sgd_coupling(c, 0.01);
      cfg.train.optimizer.kind = OptimizerKind::kAdam;
      cfg.train.optimizer.step_size = 0.01;
      cfg.train.optimizer.adam = faithful_adam(0.9, c.faithful_adam ? 1.0 : 0.999);
      cfg.train.reg.b_lambda = 0.01;
      cfg.steps = c.adam_steps;
      cfg.probes = s.probes;
      return VerificationCase{"adam", s.encoding, "mlp", 2, "adam",
                              coupled_adam_check(MlpSpec{52, 2, 256}, s.splits.train, s.word_t,
                                                 cfg)};
    });
    jobs.push_back([&s, &c] {
      return VerificationCase{"ridge", s.encoding, "linear", 0, "closed-form",
                              coupled_linear_check(TheoremCase::kRidge, s.splits.train, s.word_t,
                                                   c.ridge_lambda, s.probes)};
    });
    jobs.push_back([&s] {
      return VerificationCase{"ols", s.encoding, "linear", 0, "closed-form",
                              coupled_linear_check(TheoremCase::kOls, s.splits.train, s.word_t,
                                                   0.0, s.probes)};
    });
  }
  jobs.push_back([&ols] {
    return VerificationCase{"ols", "synthetic", "linear", 0, "closed-form",
                            coupled_linear_check(TheoremCase::kOls, ols.data, ols.t, 0.0,
                                                 ols.probes)};
  });

  VerificationSuite suite;
  suite.cases.resize(jobs.size());
  parallel_for(jobs.size(), worker_count(c), [&](std::size_t i) { suite.cases[i] = jobs[i](); });
  prepare_out(c.out);
  write_verification_csv(c.out / "verification.csv", suite);
  nlohmann::json doc = {{"config", to_json(c)}, {"cases", suite.to_json()}};
  write_text(c.out / "verification.json", doc.dump(2) + "\n");
  return suite;
}

std::vector<AdversarialRow> run_adversarial_suite(const ExperimentConfig& c) {
  c.validate();
  std::vector<AdversarialRow> rows(c.trials);
  std::vector<nlohmann::json> docs(c.trials);
  parallel_for(c.trials, worker_count(c), [&](std::size_t i) {
    with_trial(i, [&] {
      const std::size_t m = i % 2 == 0 ? 26 : 30;
      const RandomStream root = RandomStream(c.seed).split("adversarial", i);
      RandomStream code_rng = root.split("codes");
      RandomStream data_rng = root.split("data");
      const AdversarialInstance inst = build_adversarial(random_encodings(m, 24, code_rng));
      const LabeledDataset data = adversarial_dataset(inst, data_rng, kAlphabetNonidentical);
      const AdversarialVerification ridge = verify_adversarial_ridge(inst, data, c.ridge_lambda);
      CouplingConfig cfg = sgd_coupling(c, 0.01);
      const AdversarialVerification sgd =
          verify_adversarial_sgd(inst, data, MlpSpec{2 * m, c.depth, 256}, cfg);
      AdversarialRow& row = rows[i];
      row.instance = i;
      row.dimension = m;
      row.construction_residual = inst.residuals.max();
      row.ridge_deviation = ridge.deviation;
      row.sgd_deviation = sgd.deviation;
      row.sgd_param_deviation = sgd.report.max_param_deviation;
      const bool ok = row.construction_residual <= 1e-9 && ridge.deviation <= kRatingTolerance &&
                      sgd.deviation <= kRatingTolerance && sgd.report.verdict == Verdict::kPass;
      row.verdict = ok ? "PASS" : "FAIL";
      docs[i] = {{"instance", i}, {"dimension", m}, {"construction", to_json(inst)},
                 {"ridge", to_json(ridge)}, {"sgd", to_json(sgd)}};
    });
  });
  prepare_out(c.out);
  std::ofstream out(c.out / "adversarial.csv", std::ios::binary);
  require(out.good(), ErrorKind::kIoError, "cannot write adversarial.csv");
  out << "instance,dimension,construction_residual,ridge_deviation,sgd_rating_deviation,"
         "sgd_param_deviation,verdict\n";
  for (const AdversarialRow& r : rows)
    out << r.instance << ',' << r.dimension << ',' << format_number(r.construction_residual) << ','
        << format_number(r.ridge_deviation) << ',' << format_number(r.sgd_deviation) << ','
        << format_number(r.sgd_param_deviation) << ',' << r.verdict << '\n';
  nlohmann::json doc = {{"config", to_json(c)}, {"instances", docs}};
  write_text(c.out / "adversarial.json", doc.dump(2) + "\n");
  return rows;
}

}  // namespace idlab
