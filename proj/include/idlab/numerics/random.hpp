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
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace idlab {

struct StreamLabel {
  std::string purpose;
  std::uint64_t index = 0;

  friend bool operator==(const StreamLabel&, const StreamLabel&) = default;
};

// Seeded random stream addressed by (root seed, path of labeled indices).
//
// `split` derives a child from the parent's address only, never from how many
// values the parent has drawn, so a trial's stream is the same no matter which
// other streams were consumed first. The generator is xoshiro256** seeded via
// SplitMix64; normal and uniform transforms are implemented here so that
// sequences do not depend on the standard library's distribution code.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed);

  RandomStream split(std::string_view purpose, std::uint64_t index = 0) const;

  std::uint64_t root_seed() const noexcept { return root_seed_; }
  const std::vector<StreamLabel>& path() const noexcept { return path_; }
  std::string path_string() const;
  std::uint64_t key() const noexcept { return key_; }

  std::uint64_t next_u64();
  // Uniform on [0, 1) with 53 random bits.
  double uniform();
  // Uniform integer in [0, bound). bound must be positive.
  std::uint64_t below(std::uint64_t bound);
  double normal();
  double normal(double mean, double stddev) { return mean + stddev * normal(); }

  template <typename T>
  void shuffle(std::span<T> values) {
    for (std::size_t i = values.size(); i > 1; --i) {
      const std::size_t j = static_cast<std::size_t>(below(i));
      std::swap(values[i - 1], values[j]);
    }
  }

  // k distinct indices from [0, n) in draw order (partial Fisher-Yates).
  std::vector<std::size_t> sample_without_replacement(std::size_t n, std::size_t k);

 private:
  RandomStream(std::uint64_t root_seed, std::vector<StreamLabel> path, std::uint64_t key);
  void reseed(std::uint64_t key);

  std::uint64_t root_seed_;
  std::vector<StreamLabel> path_;
  std::uint64_t key_;
  std::array<std::uint64_t, 4> state_{};
};

std::uint64_t splitmix64(std::uint64_t& state);
std::uint64_t fnv1a64(std::string_view text);

}  // namespace idlab
