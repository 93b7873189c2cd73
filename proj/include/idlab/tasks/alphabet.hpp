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

#include <array>
#include <string>
#include <utility>
#include <vector>

#include "idlab/encodings/encoding.hpp"
#include "idlab/numerics/random.hpp"
#include "idlab/tasks/dataset.hpp"

namespace idlab {

using Word = std::pair<Symbol, Symbol>;

inline const std::array<std::string, 8> kAlphabetTestWords = {"AA", "xy", "YY", "ZZ",
                                                              "YZ", "ZY", "EY", "SZ"};
inline constexpr std::array<double, 8> kAlphabetTestRatings = {1, 0, 1, 1, 0, 0, 0, 0};
inline constexpr std::size_t kAlphabetTrainLetters = 24;  // A..X
inline constexpr std::size_t kAlphabetNonidentical = 48;

std::string word_name(const Word& w);

// The 72 training words: AA..XX, then 48 distinct-letter words over A..X in
// draw order. Depends only on rng, so every encoding sees the same words.
std::vector<Word> alphabet_train_words(RandomStream& rng);

struct AlphabetSplits {
  LabeledDataset train;
  LabeledDataset test;
  Word xy;  // first nonidentical training word
};

AlphabetSplits alphabet_splits(const EncodingScheme& scheme, const std::vector<Word>& train_words);
AlphabetSplits alphabet_dataset(const EncodingScheme& scheme, RandomStream& rng);

// Named probe words with their encodings.
LabeledDataset encode_words(const EncodingScheme& scheme, const std::vector<Word>& words,
                            std::span<const double> ratings);

}  // namespace idlab
