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

// Command-line driver: alphabet, mnist, verify, adversarial and report.

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "idlab/cli/config.hpp"
#include "idlab/cli/experiment.hpp"
#include "idlab/cli/report.hpp"
#include "idlab/error.hpp"

namespace {

struct Flags {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> trials;
  std::optional<std::size_t> epochs;
  std::vector<std::string> encodings;
  std::optional<std::string> model;
  std::optional<std::size_t> depth;
  std::optional<std::string> mnist_dir;
  std::optional<std::string> out;
  std::optional<double> lr;
  std::optional<std::size_t> batch;
  std::optional<std::size_t> threads;
  std::optional<double> cv_lr;
  std::optional<std::size_t> cv_epochs;
  std::optional<std::size_t> cv_subset;
  std::optional<std::size_t> steps;
  bool deterministic = false;
  bool faithful_adam = false;
  bool deja_vu = false;
  bool no_dropout = false;
};

void add_common(CLI::App* app, Flags& f) {
  app->add_option("--config", f.config, "JSON config; flags override its values");
  app->add_option("--seed", f.seed, "Root seed");
  app->add_option("--trials", f.trials, "Number of trials (instances for adversarial)");
  app->add_option("--out", f.out, "Output directory");
  app->add_option("--threads", f.threads, "Worker threads (IDENTITY_LAB_THREADS caps this)");
  app->add_flag("--deterministic", f.deterministic, "Single worker");
}

void add_training(CLI::App* app, Flags& f) {
  app->add_option("--epochs", f.epochs, "Training epochs");
  app->add_option("--model", f.model, "mlp or lstm")->check(CLI::IsMember({"mlp", "lstm"}));
  app->add_option("--depth", f.depth, "Hidden layers")->check(CLI::Range(1, 3));
  app->add_option("--lr", f.lr, "Step size");
  app->add_option("--batch", f.batch, "Batch size (default: full batch)");
  app->add_flag("--faithful-adam", f.faithful_adam, "Adam with rho2 = 1 (bias correction vanishes)");
  app->add_flag("--no-dropout", f.no_dropout, "Disable LSTM dropout during training");
}

void add_encodings(CLI::App* app, Flags& f) {
  app->add_option("--encoding", f.encodings, "onehot, haar, distributed or all (repeatable)")
      ->check(CLI::IsMember({"onehot", "haar", "distributed", "all"}));
}

idlab::ExperimentConfig resolve(const Flags& f, idlab::Experiment experiment) {
  idlab::ExperimentConfig c = f.config.empty() ? idlab::ExperimentConfig{} : idlab::load_config(f.config);
  c.experiment = experiment;
  if (f.seed) c.seed = *f.seed;
  if (f.trials) c.trials = *f.trials;
  if (f.out) c.out = *f.out;
  if (f.threads) c.threads = *f.threads;
  if (f.deterministic) c.deterministic = true;
  if (f.epochs) c.epochs = *f.epochs;
  if (f.model) c.model = idlab::parse_model_kind(*f.model);
  if (f.depth) c.depth = *f.depth;
  if (f.lr) c.step_size = *f.lr;
  if (f.batch) c.batch_size = *f.batch;
  if (f.faithful_adam) c.faithful_adam = true;
  if (f.no_dropout) c.dropout = false;
  if (f.mnist_dir) c.mnist_dir = *f.mnist_dir;
  if (f.deja_vu) c.deja_vu = true;
  if (f.cv_lr) c.cv.lr = *f.cv_lr;
  if (f.cv_epochs) c.cv.epochs = *f.cv_epochs;
  if (f.cv_subset) c.cv.subset = *f.cv_subset;
  if (f.steps) c.verify_steps = *f.steps;
  if (!f.encodings.empty()) {
    c.encodings.clear();
    for (const std::string& e : f.encodings)
      if (e != "all") c.encodings.push_back(idlab::parse_encoding_kind(e));
  }
  c.validate();
  return c;
}

void print_summary(const idlab::TrialReport& r) {
  if (r.empty()) {
    std::printf("no trials run\n");
    return;
  }
  for (const std::string& s : r.series) {
    std::printf("%-16s", s.c_str());
    for (const std::string& w : r.words) std::printf(" %s=%.3f", w.c_str(), r.mean_rating(s, w));
    std::printf("  final test loss %.4f\n", r.final_test_loss(s));
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Identity-effect learning experiments and invariance checks"};
  app.require_subcommand(1);
  Flags f;

  CLI::App* alphabet = app.add_subcommand("alphabet", "Alphabet word-pair experiment");
  add_common(alphabet, f);
  add_training(alphabet, f);
  add_encodings(alphabet, f);

  CLI::App* mnist = app.add_subcommand("mnist", "Handwritten-digit pairs on learned CV codes");
  add_common(mnist, f);
  add_training(mnist, f);
  mnist->add_option("--mnist-dir", f.mnist_dir, "Directory with the four MNIST IDX files");
  mnist->add_flag("--deja-vu", f.deja_vu, "Draw IE images from the CV training images");
  mnist->add_option("--cv-lr", f.cv_lr, "Adadelta rate for the CV model");
  mnist->add_option("--cv-epochs", f.cv_epochs, "CV epochs searched for the minimum held-out loss");
  mnist->add_option("--cv-subset", f.cv_subset, "CV training images (0: all 60000)");

  CLI::App* verify = app.add_subcommand("verify", "Coupled-run checks of every theorem case");
  add_common(verify, f);
  add_encodings(verify, f);
  verify->add_flag("--faithful-adam", f.faithful_adam, "Adam case with rho2 = 1");
  verify->add_option("--steps", f.steps, "Coupled SGD steps");

  CLI::App* adversarial = app.add_subcommand("adversarial", "Adversarial swap construction");
  add_common(adversarial, f);
  adversarial->add_option("--depth", f.depth, "Hidden layers of the coupled MLP")
      ->check(CLI::Range(1, 3));
  adversarial->add_option("--steps", f.steps, "Coupled SGD steps");

  CLI::App* report = app.add_subcommand("report", "Re-render figures from CSVs in --out");
  report->add_option("--out", f.out, "Directory holding ratings.csv and loss.csv")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (alphabet->parsed() || mnist->parsed()) {
      const auto exp = alphabet->parsed() ? idlab::Experiment::kAlphabet : idlab::Experiment::kMnist;
      const idlab::ExperimentConfig c = resolve(f, exp);
      const idlab::TrialReport r = idlab::run_experiment(c);
      print_summary(r);
      if (!r.empty()) std::printf("wrote %s\n", c.out.string().c_str());
      return 0;
    }
    if (verify->parsed()) {
      idlab::ExperimentConfig c = resolve(f, idlab::Experiment::kVerify);
      const idlab::VerificationSuite suite = idlab::run_verification_suite(c);
      for (const auto& k : suite.cases) {
        std::printf("%-12s %-12s %-6s d=%zu  dev %.3e  rating %.3e  %s%s%s\n", k.name.c_str(),
                    k.encoding.c_str(), k.model.c_str(), k.depth, k.report.max_param_deviation,
                    k.report.max_rating_deviation,
                    std::string(idlab::to_string(k.report.verdict)).c_str(),
                    k.report.diagnostic.empty() ? "" : "  ", k.report.diagnostic.c_str());
      }
      return suite.any_fail() ? 1 : 0;
    }
    if (adversarial->parsed()) {
      idlab::ExperimentConfig c = resolve(f, idlab::Experiment::kAdversarial);
      if (!f.trials && f.config.empty()) c.trials = 20;
      if (!f.depth && f.config.empty()) c.depth = 2;
      bool ok = true;
      for (const auto& r : idlab::run_adversarial_suite(c)) {
        std::printf("instance %zu m=%zu residual %.2e ridge %.2e sgd %.2e %s\n", r.instance,
                    r.dimension, r.construction_residual, r.ridge_deviation, r.sgd_deviation,
                    r.verdict.c_str());
        ok = ok && r.verdict == "PASS";
      }
      return ok ? 0 : 1;
    }
    if (report->parsed()) {
      idlab::TrialReport r = idlab::load_report(*f.out);
      idlab::emit_report(r, *f.out);
      print_summary(r);
      return 0;
    }
  } catch (const idlab::Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 0;
}
