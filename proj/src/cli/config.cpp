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

#include "idlab/cli/config.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <set>
#include <thread>

#include "idlab/error.hpp"

namespace idlab {

namespace {

constexpr std::size_t kMlpEpochs = 5000;
constexpr std::size_t kLstmEpochs = 1000;
constexpr std::size_t kIeEpochs = 5000;
constexpr double kMlpRate = 0.025;
constexpr double kAdamRate = 0.01;
constexpr double kLstmDropout = 0.75;

AdamSettings experiment_adam(bool faithful) {
  AdamSettings a;
  if (faithful) a.rho2 = 1.0;
  return a;
}

LearnerSetup make_learner(const ExperimentConfig& c, std::size_t n, std::size_t full_batch,
                          bool adam_mlp, std::size_t mlp_epochs) {
  LearnerSetup s;
  s.train.init_variance = c.init_variance;
  if (c.model == ModelKind::kMlp) {
    s.spec = MlpSpec{2 * n, c.depth, 256};
    s.epochs = c.epochs.value_or(mlp_epochs);
    if (adam_mlp) {
      s.train.optimizer.kind = OptimizerKind::kAdam;
      s.train.optimizer.step_size = c.step_size.value_or(kAdamRate);
      s.train.optimizer.adam = experiment_adam(c.faithful_adam);
    } else {
      s.train.optimizer.kind = OptimizerKind::kSgd;
      s.train.optimizer.step_size = c.step_size.value_or(kMlpRate);
    }
  } else {
    const bool dropout = c.dropout.value_or(true);
    s.spec = LstmSpec{n, c.depth, 32, dropout ? kLstmDropout : 0.0};
    s.epochs = c.epochs.value_or(kLstmEpochs);
    s.train.optimizer.kind = OptimizerKind::kAdam;
    s.train.optimizer.step_size = c.step_size.value_or(kAdamRate);
    s.train.optimizer.adam = experiment_adam(c.faithful_adam);
  }
  s.train.dropout = c.dropout.value_or(true);
  const std::size_t batch = c.batch_size.value_or(full_batch);
  s.batch_size = batch >= full_batch ? 0 : batch;
  return s;
}

template <typename T>
void get_to(const nlohmann::json& doc, const char* key, T& out) {
  if (doc.contains(key)) out = doc.at(key).get<T>();
}

template <typename T>
void get_opt(const nlohmann::json& doc, const char* key, std::optional<T>& out) {
  if (doc.contains(key) && !doc.at(key).is_null()) out = doc.at(key).get<T>();
}

}  // namespace

std::string_view to_string(Experiment e) {
  switch (e) {
    case Experiment::kAlphabet: return "alphabet";
    case Experiment::kMnist: return "mnist";
    case Experiment::kVerify: return "verify";
    case Experiment::kAdversarial: return "adversarial";
  }
  return "unknown";
}

Experiment parse_experiment(std::string_view name) {
  for (Experiment e : {Experiment::kAlphabet, Experiment::kMnist, Experiment::kVerify,
                       Experiment::kAdversarial})
    if (name == to_string(e)) return e;
  fail(ErrorKind::kInvalidArgument, "unknown experiment '" + std::string(name) + "'");
}

std::vector<EncodingKind> ExperimentConfig::resolved_encodings() const {
  if (!encodings.empty()) return encodings;
  return {EncodingKind::kOneHot, EncodingKind::kHaar, EncodingKind::kDistributed};
}

void ExperimentConfig::validate() const {
  require(depth >= 1 && depth <= 3, ErrorKind::kInvalidArgument, "depth must be 1, 2 or 3");
  for (EncodingKind k : encodings)
    require(k != EncodingKind::kCvSoftmax, ErrorKind::kInvalidArgument,
            "cv-softmax codes are learned by the mnist experiment");
  require(distributed_bits >= 1 && distributed_bits < 26, ErrorKind::kInvalidArgument,
          "distributed bits must be in [1, 25]");
  require(!epochs || *epochs >= 1, ErrorKind::kInvalidArgument, "epochs must be positive");
  require(!step_size || *step_size > 0.0, ErrorKind::kInvalidArgument,
          "step size must be positive");
  require(!batch_size || *batch_size >= 1, ErrorKind::kInvalidArgument,
          "batch size must be positive");
  require(init_variance >= 0.0, ErrorKind::kInvalidArgument, "init variance must be >= 0");
  require(cv.epochs >= 1 && cv_undertrained_epochs >= 1 && cv_undertrained_epochs <= cv.epochs,
          ErrorKind::kInvalidArgument, "need 1 <= cv undertrained epochs <= cv epochs");
  require(cv.lr > 0.0 && cv.batch_size >= 1, ErrorKind::kInvalidArgument, "bad cv settings");
  require(verify_steps >= 1 && adam_steps >= 1, ErrorKind::kInvalidArgument,
          "verification needs at least one step");
  require(ridge_lambda > 0.0, ErrorKind::kInvalidArgument, "ridge lambda must be positive");
}

nlohmann::json to_json(const ExperimentConfig& c) {
  nlohmann::json encs = nlohmann::json::array();
  for (EncodingKind k : c.resolved_encodings()) encs.push_back(std::string(to_string(k)));
  auto opt = [](const auto& o) -> nlohmann::json {
    if (o) return *o;
    return nullptr;
  };
  return {{"experiment", std::string(to_string(c.experiment))},
          {"model", std::string(to_string(c.model))},
          {"depth", c.depth},
          {"encodings", encs},
          {"distributed_bits", c.distributed_bits},
          {"trials", c.trials},
          {"seed", c.seed},
          {"out", c.out.string()},
          {"epochs", opt(c.epochs)},
          {"step_size", opt(c.step_size)},
          {"batch_size", opt(c.batch_size)},
          {"dropout", opt(c.dropout)},
          {"init_variance", c.init_variance},
          {"faithful_adam", c.faithful_adam},
          {"deterministic", c.deterministic},
          {"threads", c.threads},
          {"mnist_dir", c.mnist_dir.string()},
          {"deja_vu", c.deja_vu},
          {"cv_subset", c.cv.subset},
          {"cv_held_out", c.cv.held_out},
          {"cv_epochs", c.cv.epochs},
          {"cv_batch_size", c.cv.batch_size},
          {"cv_lr", c.cv.lr},
          {"cv_undertrained_epochs", c.cv_undertrained_epochs},
          {"verify_steps", c.verify_steps},
          {"adam_steps", c.adam_steps},
          {"ridge_lambda", c.ridge_lambda}};
}

ExperimentConfig config_from_json(const nlohmann::json& doc) {
  require(doc.is_object(), ErrorKind::kFormatError, "config must be a JSON object");
  static const std::set<std::string> known = {
      "experiment", "model", "depth", "encodings", "distributed_bits", "trials", "seed", "out",
      "epochs", "step_size", "batch_size", "dropout", "init_variance", "faithful_adam",
      "deterministic", "threads", "mnist_dir", "deja_vu", "cv_subset", "cv_held_out",
      "cv_epochs", "cv_batch_size", "cv_lr", "cv_undertrained_epochs", "verify_steps",
      "adam_steps", "ridge_lambda"};
  for (const auto& [key, value] : doc.items())
    require(known.count(key) > 0, ErrorKind::kFormatError, "unknown config key '" + key + "'");
  ExperimentConfig c;
  try {
    if (doc.contains("experiment"))
      c.experiment = parse_experiment(doc.at("experiment").get<std::string>());
    if (doc.contains("model")) c.model = parse_model_kind(doc.at("model").get<std::string>());
    if (doc.contains("encodings"))
      for (const auto& e : doc.at("encodings"))
        c.encodings.push_back(parse_encoding_kind(e.get<std::string>()));
    get_to(doc, "depth", c.depth);
    get_to(doc, "distributed_bits", c.distributed_bits);
    get_to(doc, "trials", c.trials);
    get_to(doc, "seed", c.seed);
    if (doc.contains("out")) c.out = doc.at("out").get<std::string>();
    get_opt(doc, "epochs", c.epochs);
    get_opt(doc, "step_size", c.step_size);
    get_opt(doc, "batch_size", c.batch_size);
    get_opt(doc, "dropout", c.dropout);
    get_to(doc, "init_variance", c.init_variance);
    get_to(doc, "faithful_adam", c.faithful_adam);
    get_to(doc, "deterministic", c.deterministic);
    get_to(doc, "threads", c.threads);
    if (doc.contains("mnist_dir")) c.mnist_dir = doc.at("mnist_dir").get<std::string>();
    get_to(doc, "deja_vu", c.deja_vu);
    get_to(doc, "cv_subset", c.cv.subset);
    get_to(doc, "cv_held_out", c.cv.held_out);
    get_to(doc, "cv_epochs", c.cv.epochs);
    get_to(doc, "cv_batch_size", c.cv.batch_size);
    get_to(doc, "cv_lr", c.cv.lr);
    get_to(doc, "cv_undertrained_epochs", c.cv_undertrained_epochs);
    get_to(doc, "verify_steps", c.verify_steps);
    get_to(doc, "adam_steps", c.adam_steps);
    get_to(doc, "ridge_lambda", c.ridge_lambda);
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::kFormatError, std::string("config: ") + e.what());
  }
  c.validate();
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  require(in.good(), ErrorKind::kIoError, "cannot open config " + path.string());
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::kFormatError, path.string() + ": " + e.what());
  }
  return config_from_json(doc);
}

LearnerSetup alphabet_learner(const ExperimentConfig& config) {
  return make_learner(config, 26, 72, false, kMlpEpochs);
}

LearnerSetup ie_learner(const ExperimentConfig& config) {
  return make_learner(config, 10, 2400, true, kIeEpochs);
}

std::size_t worker_count(const ExperimentConfig& config) {
  if (config.deterministic) return 1;
  std::size_t n = config.threads;
  if (n == 0) n = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("IDENTITY_LAB_THREADS")) {
    const std::size_t cap = std::strtoul(env, nullptr, 10);
    if (cap > 0) n = std::min(n, cap);
  }
  return n;
}

}  // namespace idlab
