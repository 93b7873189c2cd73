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

#include "idlab/tasks/alphabet.hpp"

#include "idlab/error.hpp"

namespace idlab {

std::string word_name(const Word& w) {
  return std::string{letter_name(w.first), letter_name(w.second)};
}

std::vector<Word> alphabet_train_words(RandomStream& rng) {
  std::vector<Word> words;
  words.reserve(kAlphabetTrainLetters + kAlphabetNonidentical);
  for (Symbol s = 0; s < kAlphabetTrainLetters; ++s) words.emplace_back(s, s);
  std::vector<Word> pool;
  for (Symbol a = 0; a < kAlphabetTrainLetters; ++a)
    for (Symbol b = 0; b < kAlphabetTrainLetters; ++b)
      if (a != b) pool.emplace_back(a, b);
  for (std::size_t i : rng.sample_without_replacement(pool.size(), kAlphabetNonidentical))
    words.push_back(pool[i]);
  return words;
}

LabeledDataset encode_words(const EncodingScheme& scheme, const std::vector<Word>& words,
                            std::span<const double> ratings) {
  require(ratings.size() == words.size(), ErrorKind::kInvalidArgument,
          "one rating per word is required");
  LabeledDataset out;
  out.inputs = Matrix(words.size(), 2 * scheme.dimension());
  for (std::size_t i = 0; i < words.size(); ++i) {
    const Vector w = encode_word(scheme, words[i].first, words[i].second);
    std::copy(w.begin(), w.end(), out.inputs.row(i).begin());
    out.ratings.push_back(ratings[i]);
    out.names.push_back(word_name(words[i]));
  }
  return out;
}

AlphabetSplits alphabet_splits(const EncodingScheme& scheme, const std::vector<Word>& train_words) {
  require(scheme.alphabet_size() == 26, ErrorKind::kInvalidArgument,
          "the Alphabet task needs a 26-letter scheme");
  require(train_words.size() == kAlphabetTrainLetters + kAlphabetNonidentical,
          ErrorKind::kInvalidArgument, "the Alphabet training set has 72 words");
  AlphabetSplits s;
  std::vector<double> ratings;
  for (const Word& w : train_words) ratings.push_back(w.first == w.second ? 1.0 : 0.0);
  s.train = encode_words(scheme, train_words, ratings);
  s.xy = train_words[kAlphabetTrainLetters];

  const std::vector<Word> test_words = {
      {letter('A'), letter('A')}, s.xy, {letter('Y'), letter('Y')}, {letter('Z'), letter('Z')},
      {letter('Y'), letter('Z')}, {letter('Z'), letter('Y')}, {letter('E'), letter('Y')},
      {letter('S'), letter('Z')}};
  s.test = encode_words(scheme, test_words, kAlphabetTestRatings);
  for (std::size_t i = 0; i < test_words.size(); ++i) s.test.names[i] = kAlphabetTestWords[i];

  const nlohmann::json meta = {{"task", "alphabet"}, {"encoding", to_string(scheme.kind())},
                               {"xy", word_name(s.xy)}};
  s.train.metadata = meta;
  s.train.metadata["split"] = "train";
  s.test.metadata = meta;
  s.test.metadata["split"] = "test";
  return s;
}

AlphabetSplits alphabet_dataset(const EncodingScheme& scheme, RandomStream& rng) {
  return alphabet_splits(scheme, alphabet_train_words(rng));
}

}  // namespace idlab
