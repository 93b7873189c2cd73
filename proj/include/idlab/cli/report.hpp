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
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

namespace idlab {

struct RatingRow {
  std::size_t trial = 0;
  std::string experiment;
  std::string encoding;  // series label: encoding kind, or CV training level
  std::string model;
  std::size_t depth = 0;
  std::string word;
  double rating = 0.0;
};

struct LossRow {
  std::size_t trial = 0;
  std::size_t epoch = 0;
  std::string split;  // train | test
  double loss = 0.0;
  std::string series;
};

struct WordAggregate {
  std::string series;
  std::string word;
  double mean = 0.0;
  double stddev = 0.0;  // population
  std::size_t count = 0;
};

struct CurveAggregate {
  std::string series;
  std::size_t epoch = 0;
  double mean = 0.0;
  double stddev = 0.0;
  std::size_t count = 0;
};

struct TrialReport {
  std::string experiment;
  std::vector<std::string> words;   // display order
  std::vector<std::string> series;  // display order
  std::vector<RatingRow> ratings;
  std::vector<LossRow> losses;
  nlohmann::json manifest = nlohmann::json::object();

  bool empty() const { return ratings.empty(); }
  // Recomputed from the per-trial rows.
  std::vector<WordAggregate> word_aggregates() const;
  std::vector<CurveAggregate> test_curves() const;
  // Mean rating of `word` in `series`; throws if absent.
  double mean_rating(const std::string& series, const std::string& word) const;
  // Mean test loss at the last epoch of `series`.
  double final_test_loss(const std::string& series) const;
};

std::string format_number(double v);

void write_ratings_csv(const std::filesystem::path& path, const std::vector<RatingRow>& rows);
void write_loss_csv(const std::filesystem::path& path, const std::vector<LossRow>& rows);
void write_aggregates_csv(const std::filesystem::path& path,
                          const std::vector<WordAggregate>& rows);
std::vector<RatingRow> read_ratings_csv(const std::filesystem::path& path);
std::vector<LossRow> read_loss_csv(const std::filesystem::path& path);
std::vector<WordAggregate> read_aggregates_csv(const std::filesystem::path& path);

// Standalone SVG 1.1 documents.
std::string render_bars_svg(const TrialReport& report);
std::string render_loss_svg(const TrialReport& report);

// Writes ratings.csv, loss.csv, aggregates.csv, bars.svg, loss.svg and
// manifest.json. Throws on an empty report or an unwritable directory.
void emit_report(const TrialReport& report, const std::filesystem::path& dir);

// Rebuilds a report from CSVs in `dir`; checks any aggregates.csv there
// against the per-trial rows to 1e-12.
TrialReport load_report(const std::filesystem::path& dir);

void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace idlab
