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

// Acceptance checks, one PASS/FAIL line per criterion.
//
//   idlab_acceptance [--criterion N] [--out DIR]

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "gradcheck.hpp"
#include "reference.hpp"
#include "idlab/adversarial/adversarial.hpp"
#include "idlab/cli/experiment.hpp"
#include "idlab/error.hpp"
#include "idlab/nn/lstm.hpp"
#include "idlab/numerics/linalg.hpp"
#include "idlab/tasks/alphabet.hpp"
#include "idlab/training/linear.hpp"

namespace idlab {
namespace {

using testing::check_gradient;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::filesystem::path g_out = "acceptance_out";

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3g", v);
  return buf;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

// --- 1 ----------------------------------------------------------------------

Outcome gradients() {
  double mlp_worst = 0.0, lstm_worst = 0.0, conv_worst = 0.0;
  RandomStream root(101);
  for (std::size_t depth = 1; depth <= 3; ++depth) {
    int accepted = 0;
    for (int attempt = 0; accepted < 20 && attempt < 400; ++attempt) {
      RandomStream rng = root.split("mlp", depth * 1000 + attempt);
      const MlpSpec spec{6, depth, 5};
      const SplitParams p = mlp_init(spec, 0.0, 0.25, rng);
      const testing::Instance in = testing::random_instance(4, 6, rng);
      double closest = INFINITY;
      for (std::size_t i = 0; i < 4; ++i) {
        double m;
        testing::reference_mlp(p, spec, in.x.row(i), &m);
        closest = std::min(closest, m);
      }
      if (closest < 1e-3) continue;
      ++accepted;
      const Regularizer reg{RegKind::kL2Frobenius, 0.01, 0.0};
      SplitParams grad;
      mlp_backward(p, spec, in.x, in.targets, LossKind::kBinaryCrossEntropy, reg, grad);
      mlp_worst = std::max(mlp_worst, check_gradient(p, grad, [&](const SplitParams& q) {
                                        SplitParams g;
                                        return mlp_backward(q, spec, in.x, in.targets,
                                                            LossKind::kBinaryCrossEntropy, reg, g);
                                      }).max_relative_error);
    }
    if (accepted < 20) return {false, "too few kink-free MLP instances"};
  }
  for (std::size_t layers = 1; layers <= 3; ++layers) {
    for (int trial = 0; trial < 20; ++trial) {
      RandomStream rng = root.split("lstm", layers * 100 + trial);
      const LstmSpec spec{3, layers, 2, 0.0};
      const SplitParams p = lstm_init(spec, 0.0, 0.5, rng);
      const testing::Instance in = testing::random_instance(4, 6, rng);
      const Regularizer reg{RegKind::kNone, 0.0, 0.01};
      SplitParams grad;
      lstm_backward(p, spec, in.x, in.targets, LossKind::kBinaryCrossEntropy, reg, nullptr, grad);
      lstm_worst = std::max(lstm_worst, check_gradient(p, grad, [&](const SplitParams& q) {
                                          SplitParams g;
                                          return lstm_backward(q, spec, in.x, in.targets,
                                                               LossKind::kBinaryCrossEntropy, reg,
                                                               nullptr, g);
                                        }).max_relative_error);
    }
  }
  const ConvNetSpec spec = testing::reduced_convnet();
  int accepted = 0;
  for (int attempt = 0; accepted < 20 && attempt < 400; ++attempt) {
    RandomStream rng = root.split("conv", attempt);
    SplitParams p = convnet_zero_params(spec);
    p.for_each([&](const std::string&, Matrix& m) {
      m = gaussian_matrix(m.rows(), m.cols(), 0.0, 0.3, rng);
    });
    Matrix imgs(3, spec.image_size * spec.image_size);
    for (double& v : imgs.values()) v = rng.uniform();
    std::vector<std::size_t> labels{rng.below(10), rng.below(10), rng.below(10)};
    bool near_kink = false;
    for (std::size_t b = 0; b < 3; ++b) {
      const auto ref = testing::reference_convnet(p, spec, imgs.row(b));
      near_kink = near_kink || ref.closest_preact < 1e-3 || ref.smallest_pool_gap < 1e-3;
    }
    if (near_kink) continue;
    ++accepted;
    SplitParams grad;
    convnet_backward(p, spec, imgs, labels, nullptr, grad);
    conv_worst = std::max(conv_worst, check_gradient(p, grad, [&](const SplitParams& q) {
                                        SplitParams g;
                                        return convnet_backward(q, spec, imgs, labels, nullptr, g);
                                      }).max_relative_error);
  }
  if (accepted < 20) return {false, "too few kink-free conv instances"};
  const bool ok = mlp_worst <= 1e-5 && lstm_worst <= 1e-5 && conv_worst <= 1e-4;
  return {ok, "max rel err mlp " + sci(mlp_worst) + " lstm " + sci(lstm_worst) + " conv " +
                  sci(conv_worst)};
}

// --- 2-4 --------------------------------------------------------------------

ExperimentConfig verify_config(const std::string& dir) {
  ExperimentConfig c;
  c.experiment = Experiment::kVerify;
  c.encodings = {EncodingKind::kOneHot, EncodingKind::kHaar};
  c.verify_steps = 200;
  c.adam_steps = 100;
  c.seed = 0;
  c.out = g_out / dir;
  return c;
}

Outcome sgd_coupling() {
  const VerificationSuite s = run_verification_suite(verify_config("c2"));
  double dev = 0.0, rating = 0.0;
  std::size_t n = 0;
  bool ok = true;
  for (const auto& k : s.cases) {
    if (k.optimizer != "sgd" || k.model != "mlp") continue;
    ++n;
    dev = std::max(dev, k.report.max_param_deviation);
    for (const ProbeRating& r : k.report.ratings)
      if (r.name == "YY") rating = std::max(rating, r.deviation);
    ok = ok && k.report.verdict == Verdict::kPass && k.report.param_deviation.size() == 201;
  }
  ok = ok && n == 12 && dev <= 1e-8 && rating <= 1e-6;
  return {ok, std::to_string(n) + " cases, max param dev " + sci(dev) + ", |L(YY)-L(YZ)| " +
                  sci(rating)};
}

Outcome rnn_coupling() {
  const VerificationSuite s = run_verification_suite(verify_config("c3"));
  double dev = 0.0, rating = 0.0;
  std::size_t n = 0;
  bool ok = true;
  for (const auto& k : s.cases) {
    if (k.name != "rnn" || k.depth != 1) continue;
    ++n;
    dev = std::max(dev, k.report.max_param_deviation);
    rating = std::max(rating, k.report.max_rating_deviation);
    ok = ok && k.report.verdict == Verdict::kPass && !k.report.audit.extrapolated &&
         k.report.param_deviation.size() == 201;
  }
  ok = ok && n == 2 && dev <= 1e-8 && rating <= 1e-8;
  return {ok, std::to_string(n) + " cases, max param dev " + sci(dev) + ", rating dev " +
                  sci(rating)};
}

Outcome adam_coupling() {
  const VerificationSuite s = run_verification_suite(verify_config("c4"));
  for (const auto& k : s.cases) {
    if (k.name != "adam" || k.encoding != "onehot") continue;
    const CouplingReport& r = k.report;
    const bool ok = r.verdict == Verdict::kPass && r.param_deviation.size() == 101 &&
                    r.max_param_deviation <= 1e-8 && r.max_moment1_residual <= 1e-8 &&
                    r.max_moment2_residual <= 1e-8;
    return {ok, "param dev " + sci(r.max_param_deviation) + ", M1 residual " +
                    sci(r.max_moment1_residual) + ", M2 residual " +
                    sci(r.max_moment2_residual) + ", " + std::string(to_string(r.verdict))};
  }
  return {false, "adam case missing"};
}

// --- 5 ----------------------------------------------------------------------

Outcome closed_forms() {
  RandomStream rng(505);
  LabeledDataset synth;
  synth.inputs = gaussian_matrix(100, 20, 0.0, 1.0, rng);
  synth.ratings.resize(100);
  for (double& r : synth.ratings) r = rng.normal();
  const TransformSpec t(gaussian_matrix(20, 20, 0.0, 1.0, rng), TransformClass::kGeneralInvertible,
                        ActsOn::kWord);
  std::vector<ProbeWord> probes;
  for (int i = 0; i < 5; ++i) {
    const Matrix w = gaussian_matrix(1, 20, 0.0, 1.0, rng);
    probes.push_back({"p" + std::to_string(i), Vector(w.values().begin(), w.values().end())});
  }
  const CouplingReport ols = coupled_linear_check(TheoremCase::kOls, synth, t, 0.0, probes);
  double ols_dev = std::max(ols.max_param_deviation, ols.max_rating_deviation);
  bool ok = ols.verdict == Verdict::kPass && ols_dev <= 1e-8;

  double ridge_dev = 0.0;
  for (EncodingKind kind : {EncodingKind::kOneHot, EncodingKind::kHaar}) {
    RandomStream root = RandomStream(506).split("ridge", static_cast<std::uint64_t>(kind));
    RandomStream enc = root.split("encoding"), data = root.split("data");
    const EncodingScheme scheme = make_scheme(kind, 26, std::nullopt, enc);
    const AlphabetSplits s = alphabet_dataset(scheme, data);
    std::vector<ProbeWord> words;
    for (std::size_t i = 0; i < s.test.size(); ++i) {
      const auto row = s.test.inputs.row(i);
      words.push_back({s.test.names[i], Vector(row.begin(), row.end())});
    }
    RandomStream haar_rng = root.split("t");
    const TransformSpec swap =
        lift_to_word(letter_swap_transform(scheme, letter('Y'), letter('Z')), WordPosition::kSecond);
    const TransformSpec rot(haar_orthogonal(52, haar_rng), TransformClass::kOrthogonal, ActsOn::kWord);
    for (const TransformSpec* tt : {&swap, &rot}) {
      for (double lambda : {0.01, 1.0}) {
        const CouplingReport r = coupled_linear_check(TheoremCase::kRidge, s.train, *tt, lambda, words);
        ridge_dev = std::max({ridge_dev, r.max_param_deviation, r.max_rating_deviation});
        ok = ok && r.verdict == Verdict::kPass;
      }
    }
  }
  ok = ok && ridge_dev <= 1e-8;
  return {ok, "OLS (invertible T) dev " + sci(ols_dev) + ", ridge (orthogonal T, Alphabet) dev " +
                  sci(ridge_dev)};
}

// --- 6 ----------------------------------------------------------------------

Outcome adversarial() {
  ExperimentConfig c;
  c.experiment = Experiment::kAdversarial;
  c.trials = 20;
  c.depth = 2;
  c.verify_steps = 200;
  c.out = g_out / "c6";
  double residual = 0.0, ridge = 0.0, sgd = 0.0;
  bool ok = true;
  std::size_t m26 = 0;
  for (const AdversarialRow& r : run_adversarial_suite(c)) {
    residual = std::max(residual, r.construction_residual);
    ridge = std::max(ridge, r.ridge_deviation);
    sgd = std::max(sgd, r.sgd_deviation);
    ok = ok && r.verdict == "PASS";
    m26 += r.dimension == 26 ? 1 : 0;
  }
  ok = ok && residual <= 1e-9 && ridge <= 1e-6 && sgd <= 1e-6;
  return {ok, "20 instances (" + std::to_string(m26) + " at m=26), residual " + sci(residual) +
                  ", ridge dev " + sci(ridge) + ", coupled SGD dev " + sci(sgd)};
}

// --- 7, 8 -------------------------------------------------------------------

ExperimentConfig alphabet_config(ModelKind model, std::size_t depth, const std::string& dir) {
  ExperimentConfig c;
  c.experiment = Experiment::kAlphabet;
  c.model = model;
  c.depth = depth;
  c.trials = 10;
  c.seed = 0;
  c.out = g_out / dir;
  return c;
}

double margin(const TrialReport& r, const std::string& s) {
  return r.mean_rating(s, "YY") + r.mean_rating(s, "ZZ") - r.mean_rating(s, "YZ") -
         r.mean_rating(s, "ZY");
}

Outcome alphabet_mlp() {
  const TrialReport r = run_experiment(alphabet_config(ModelKind::kMlp, 2, "c7"));
  std::string detail;
  bool fit = true;
  for (const std::string& s : r.series) {
    const double aa = r.mean_rating(s, "AA"), xy = r.mean_rating(s, "xy");
    fit = fit && aa >= 0.9 && xy <= 0.1;
    detail += s + " AA " + sci(aa) + " xy " + sci(xy) + "; ";
  }
  bool flat = true;
  for (const char* s : {"onehot", "haar"}) {
    const double gap = std::abs(r.mean_rating(s, "YY") - r.mean_rating(s, "YZ"));
    flat = flat && gap <= 0.1;
    detail += std::string(s) + " |YY-YZ| " + sci(gap) + "; ";
  }
  const double m = margin(r, "distributed");
  detail += "distributed margin " + sci(m) + "; final test loss";
  bool lowest = true;
  for (const std::string& s : r.series) {
    detail += " " + s + " " + sci(r.final_test_loss(s));
    if (s != "distributed")
      lowest = lowest && r.final_test_loss("distributed") < r.final_test_loss(s);
  }
  detail += std::string(" [a:") + (fit ? "ok" : "no") + " b:" + (flat ? "ok" : "no") +
            " c:" + (m >= 0.2 ? "ok" : "no") + " d:" + (lowest ? "ok" : "no") + "]";
  return {fit && flat && m >= 0.2 && lowest, detail};
}

Outcome alphabet_lstm() {
  const TrialReport r = run_experiment(alphabet_config(ModelKind::kLstm, 1, "c8"));
  std::string detail;
  bool flat = true;
  for (const char* s : {"onehot", "haar"}) {
    const double gap = std::abs(r.mean_rating(s, "YY") - r.mean_rating(s, "YZ"));
    flat = flat && gap <= 0.15;
    detail += std::string(s) + " |YY-YZ| " + sci(gap) + "; ";
  }
  const double m = margin(r, "distributed");
  detail += "distributed margin " + sci(m);
  return {flat && m >= 0.1, detail};
}

// --- 9 ----------------------------------------------------------------------

std::size_t env_size(const char* name, std::size_t fallback) {
  const char* v = std::getenv(name);
  return v != nullptr ? std::strtoul(v, nullptr, 10) : fallback;
}

// IE epochs at desk scale; see README.
constexpr std::size_t kIeAcceptanceEpochs = 200;

Outcome mnist() {
  const std::filesystem::path dir = default_mnist_dir();
  if (!std::filesystem::exists(dir / "t10k-images-idx3-ubyte"))
    return {false, "MNIST not found at " + dir.string()};
  const MnistStore store = load_mnist(dir);
  ExperimentConfig c;
  c.experiment = Experiment::kMnist;
  c.trials = 10;
  c.seed = 0;
  c.epochs = env_size("IDLAB_ACCEPTANCE_IE_EPOCHS", kIeAcceptanceEpochs);
  const CvTrainResult cv = train_experiment_cv(c, store);
  std::string detail = "cv optimal epoch " + std::to_string(cv.best_epoch()) + "; ";
  bool ok = true;
  for (std::size_t depth = 1; depth <= 3; ++depth) {
    c.depth = depth;
    c.out = g_out / ("c9_depth" + std::to_string(depth));
    const TrialReport r = run_mnist_experiment(c, store, &cv);
    const double under = r.final_test_loss("cv-undertrained");
    const double optimal = r.final_test_loss("cv-optimal");
    double xx = 1.0, xy = 0.0;
    for (const std::string& s : r.series) {
      xx = std::min(xx, r.mean_rating(s, "XX"));
      xy = std::max(xy, r.mean_rating(s, "XY"));
    }
    ok = ok && under < optimal && xx >= 0.8 && xy <= 0.2;
    detail += "d" + std::to_string(depth) + " loss under " + sci(under) + " optimal " +
              sci(optimal) + " XX>=" + sci(xx) + " XY<=" + sci(xy) + "; ";
  }
  return {ok, detail};
}

// --- 10 ---------------------------------------------------------------------

Outcome determinism() {
  bool same = true;
  std::string detail;
  for (int rep = 0; rep < 2; ++rep) run_verification_suite(verify_config("c10_verify_" + std::to_string(rep)));
  const bool v = slurp(g_out / "c10_verify_0" / "verification.csv") ==
                 slurp(g_out / "c10_verify_1" / "verification.csv");
  same = same && v;
  detail += std::string("verification.csv ") + (v ? "identical" : "differs");
  for (int rep = 0; rep < 2; ++rep)
    run_experiment(alphabet_config(ModelKind::kMlp, 2, "c10_alphabet_" + std::to_string(rep)));
  for (const char* f : {"ratings.csv", "loss.csv"}) {
    const bool eq = slurp(g_out / "c10_alphabet_0" / f) == slurp(g_out / "c10_alphabet_1" / f);
    same = same && eq;
    detail += std::string(", ") + f + (eq ? " identical" : " differs");
  }
  return {same, detail};
}

struct Criterion {
  int id;
  const char* name;
  double budget_seconds;
  std::function<Outcome()> run;
};

}  // namespace
}  // namespace idlab

int main(int argc, char** argv) {
  using namespace idlab;
  int only = 0;
  for (int i = 1; i < argc; ++i) {
    const std::string a = argv[i];
    if (a == "--criterion" && i + 1 < argc) {
      only = std::atoi(argv[++i]);
    } else if (a == "--out" && i + 1 < argc) {
      g_out = argv[++i];
    } else {
      std::fprintf(stderr, "usage: %s [--criterion N] [--out DIR]\n", argv[0]);
      return 2;
    }
  }
  const std::vector<Criterion> all = {
      {1, "gradient correctness", 60, gradients},
      {2, "feedforward SGD coupling", 120, sgd_coupling},
      {3, "recurrent SGD coupling", 120, rnn_coupling},
      {4, "Adam coupling", 60, adam_coupling},
      {5, "closed-form OLS and ridge", 60, closed_forms},
      {6, "adversarial construction", 120, adversarial},
      {7, "Alphabet MLP reproduction", 1800, alphabet_mlp},
      {8, "Alphabet LSTM reproduction", 1800, alphabet_lstm},
      {9, "MNIST pipeline", 3600, mnist},
      {10, "determinism", 3600, determinism},
  };
  bool all_pass = true;
  for (const Criterion& c : all) {
    if (only != 0 && c.id != only) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_budget = secs <= c.budget_seconds;
    const bool pass = o.pass && in_budget;
    std::printf("CRITERION %d %s: %s | %s | %.1f s%s\n", c.id, pass ? "PASS" : "FAIL", c.name,
                o.detail.c_str(), secs, in_budget ? "" : " (over budget)");
    std::fflush(stdout);
    all_pass = all_pass && pass;
  }
  return all_pass ? 0 : 1;
}
