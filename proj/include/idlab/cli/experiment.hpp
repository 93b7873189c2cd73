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
#include <string>
#include <vector>

#include <json.hpp>

#include "idlab/cli/config.hpp"
#include "idlab/cli/report.hpp"
#include "idlab/invariance/invariance.hpp"
#include "idlab/tasks/mnist.hpp"

namespace idlab {

// Alphabet or MNIST trials. Trial t draws from RandomStream(seed).split("trial", t);
// its data stream is shared by every encoding and learner. Writes the report
// to config.out.
TrialReport run_experiment(const ExperimentConfig& config);
// CV model for the mnist experiment, drawn from RandomStream(seed).split("cv").
CvTrainResult train_experiment_cv(const ExperimentConfig& config, const MnistStore& store);
// MNIST trials with an already loaded store and, optionally, an already
// trained CV model (so several IE learners can share one).
TrialReport run_mnist_experiment(const ExperimentConfig& config, const MnistStore& store,
                                 const CvTrainResult* cv = nullptr);

struct VerificationCase {
  std::string name;  // e.g. sgd/l2=0.01
  std::string encoding;
  std::string model;
  std::size_t depth = 0;
  std::string optimizer;
  CouplingReport report;
};

struct VerificationSuite {
  std::vector<VerificationCase> cases;
  bool any_fail() const;
  nlohmann::json to_json() const;
};

// Every theorem case over the configured encodings; writes verification.csv
// and verification.json to config.out.
VerificationSuite run_verification_suite(const ExperimentConfig& config);
void write_verification_csv(const std::filesystem::path& path, const VerificationSuite& suite);

struct AdversarialRow {
  std::size_t instance = 0;
  std::size_t dimension = 0;
  double construction_residual = 0.0;
  double ridge_deviation = 0.0;
  double sgd_deviation = 0.0;
  double sgd_param_deviation = 0.0;
  std::string verdict;
};

// config.trials random code tables, alternating m = 26 and 30; writes
// adversarial.csv and adversarial.json.
std::vector<AdversarialRow> run_adversarial_suite(const ExperimentConfig& config);

}  // namespace idlab
