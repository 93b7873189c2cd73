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

#include "idlab/tasks/ie.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <numeric>
#include <set>

#include "idlab/error.hpp"
#include "idlab/tasks/cv.hpp"

namespace idlab {

std::string index_digest(std::span<const std::size_t> indices) {
  std::string text;
  for (std::size_t i : indices) text += std::to_string(i) + ",";
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(fnv1a64(text)));
  return buf;
}

std::vector<std::pair<std::size_t, std::size_t>> IeSelection::test_pairs() const {
  const auto [x, y, xp, yp, eight, nine] = test_images;
  return {{x, x},         {x, y},       {xp, xp},     {xp, yp},     {eight, eight},
          {eight, nine},  {nine, eight}, {nine, nine}, {xp, eight}, {xp, nine}};
}

nlohmann::json IeSelection::manifest() const {
  std::vector<std::size_t> flat;
  for (const auto& [a, b] : train_pairs) {
    flat.push_back(a);
    flat.push_back(b);
  }
  const std::array<std::string, 6> names = {"X", "Y", "X'", "Y'", "8", "9"};
  nlohmann::json test = nlohmann::json::object();
  for (std::size_t i = 0; i < names.size(); ++i) test[names[i]] = test_images[i];
  return {{"source", source == MnistSplit::kTest ? "mnist-test" : "mnist-train"},
          {"pool", pool},
          {"pool_digest", index_digest(pool)},
          {"train_pair_digest", index_digest(flat)},
          {"train_pairs", train_pairs.size()},
          {"test_images", test},
          {"test_digest", index_digest(test_images)}};
}

IeSelection select_ie_images(const MnistStore& store, RandomStream& rng, bool deja_vu,
                             std::span<const std::size_t> deja_vu_candidates) {
  IeSelection sel;
  sel.source = deja_vu ? MnistSplit::kTrain : MnistSplit::kTest;
  const MnistImages& images = store.split(sel.source);

  std::vector<std::size_t> candidates;
  if (deja_vu && !deja_vu_candidates.empty()) {
    candidates.assign(deja_vu_candidates.begin(), deja_vu_candidates.end());
  } else {
    candidates.resize(images.count());
    std::iota(candidates.begin(), candidates.end(), std::size_t{0});
  }
  std::array<std::vector<std::size_t>, 10> by_digit;
  for (std::size_t i : candidates) by_digit.at(images.labels.at(i)).push_back(i);

  RandomStream pool_rng = rng.split("ie-pool");
  std::set<std::size_t> in_pool;
  for (std::size_t d = 0; d < kIePoolDigits; ++d) {
    require(by_digit[d].size() > kIePoolPerDigit, ErrorKind::kInvalidArgument,
            "not enough images of digit " + std::to_string(d));
    for (std::size_t k : pool_rng.sample_without_replacement(by_digit[d].size(), kIePoolPerDigit)) {
      sel.pool.push_back(by_digit[d][k]);
      in_pool.insert(by_digit[d][k]);
    }
  }

  for (std::size_t a : sel.pool)
    for (std::size_t b : sel.pool)
      if (images.labels[a] == images.labels[b]) {
        sel.train_pairs.emplace_back(a, b);
        sel.train_ratings.push_back(1.0);
      }
  std::vector<std::pair<std::size_t, std::size_t>> mixed;
  for (std::size_t a : sel.pool)
    for (std::size_t b : sel.pool)
      if (images.labels[a] != images.labels[b]) mixed.emplace_back(a, b);
  RandomStream pair_rng = rng.split("ie-pairs");
  for (std::size_t k : pair_rng.sample_without_replacement(mixed.size(), kIeNonidentical)) {
    sel.train_pairs.push_back(mixed[k]);
    sel.train_ratings.push_back(0.0);
  }

  RandomStream test_rng = rng.split("ie-test");
  // X, Y: distinct digits inside the pool.
  const std::size_t x = sel.pool[test_rng.below(sel.pool.size())];
  std::vector<std::size_t> other;
  for (std::size_t i : sel.pool)
    if (images.labels[i] != images.labels[x]) other.push_back(i);
  const std::size_t y = other[test_rng.below(other.size())];
  // X′, Y′: distinct digits 0..7 outside the pool.
  std::vector<std::size_t> outside;
  for (std::size_t d = 0; d < kIePoolDigits; ++d)
    for (std::size_t i : by_digit[d])
      if (in_pool.count(i) == 0) outside.push_back(i);
  const std::size_t xp = outside[test_rng.below(outside.size())];
  std::vector<std::size_t> outside_other;
  for (std::size_t i : outside)
    if (images.labels[i] != images.labels[xp]) outside_other.push_back(i);
  const std::size_t yp = outside_other[test_rng.below(outside_other.size())];
  require(!by_digit[8].empty() && !by_digit[9].empty(), ErrorKind::kInvalidArgument,
          "no images of digits 8 and 9");
  const std::size_t eight = by_digit[8][test_rng.below(by_digit[8].size())];
  const std::size_t nine = by_digit[9][test_rng.below(by_digit[9].size())];
  sel.test_images = {x, y, xp, yp, eight, nine};
  return sel;
}

IeSplits encode_ie_splits(const IeSelection& sel, const SplitParams& cv_params,
                          const ConvNetSpec& spec, const MnistStore& store) {
  const MnistImages& images = store.split(sel.source);
  std::vector<std::size_t> needed(sel.pool.begin(), sel.pool.end());
  needed.insert(needed.end(), sel.test_images.begin(), sel.test_images.end());
  std::sort(needed.begin(), needed.end());
  needed.erase(std::unique(needed.begin(), needed.end()), needed.end());
  const Matrix codes = cv_encode(cv_params, spec, images, needed);
  std::map<std::size_t, std::size_t> row_of;
  for (std::size_t r = 0; r < needed.size(); ++r) row_of[needed[r]] = r;
  const std::size_t n = codes.cols();

  auto build = [&](const std::vector<std::pair<std::size_t, std::size_t>>& pairs,
                   std::span<const double> ratings) {
    LabeledDataset out;
    out.inputs = Matrix(pairs.size(), 2 * n);
    for (std::size_t i = 0; i < pairs.size(); ++i) {
      const auto a = codes.row(row_of.at(pairs[i].first));
      const auto b = codes.row(row_of.at(pairs[i].second));
      auto dst = out.inputs.row(i);
      std::copy(a.begin(), a.end(), dst.begin());
      std::copy(b.begin(), b.end(), dst.begin() + static_cast<std::ptrdiff_t>(n));
      out.ratings.push_back(ratings[i]);
      out.names.push_back(std::to_string(images.labels[pairs[i].first]) +
                          std::to_string(images.labels[pairs[i].second]));
    }
    return out;
  };
  IeSplits splits;
  splits.train = build(sel.train_pairs, sel.train_ratings);
  splits.test = build(sel.test_pairs(), kIeTestRatings);
  splits.test.names.assign(kIeTestPairs.begin(), kIeTestPairs.end());
  const nlohmann::json manifest = sel.manifest();
  splits.train.metadata = {{"task", "ie"}, {"split", "train"}, {"selection", manifest}};
  splits.test.metadata = {{"task", "ie"}, {"split", "test"}, {"selection", manifest}};
  return splits;
}

IeSplits build_ie_splits(const SplitParams& cv_params, const ConvNetSpec& spec,
                         const MnistStore& store, RandomStream& rng, bool deja_vu,
                         std::span<const std::size_t> deja_vu_candidates) {
  return encode_ie_splits(select_ie_images(store, rng, deja_vu, deja_vu_candidates), cv_params,
                          spec, store);
}

}  // namespace idlab
