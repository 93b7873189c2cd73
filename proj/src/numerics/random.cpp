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

#include "idlab/numerics/random.hpp"

#include <cmath>
#include <numbers>
#include <limits>
#include <numeric>

#include "idlab/error.hpp"

namespace idlab {

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t fnv1a64(std::string_view text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

namespace {

inline std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

std::uint64_t child_key(std::uint64_t parent, std::string_view purpose, std::uint64_t index) {
  std::uint64_t s = parent ^ fnv1a64(purpose);
  const std::uint64_t a = splitmix64(s);
  s = a ^ (index * 0xd1b54a32d192ed03ULL + 0x8cb92ba72f3d8dd7ULL);
  return splitmix64(s);
}

}  // namespace

RandomStream::RandomStream(std::uint64_t seed) : RandomStream(seed, {}, seed) {}

RandomStream::RandomStream(std::uint64_t root_seed, std::vector<StreamLabel> path,
                           std::uint64_t key)
    : root_seed_(root_seed), path_(std::move(path)), key_(key) {
  reseed(key_);
}

void RandomStream::reseed(std::uint64_t key) {
  std::uint64_t s = key;
  for (auto& word : state_) word = splitmix64(s);
}

RandomStream RandomStream::split(std::string_view purpose, std::uint64_t index) const {
  auto path = path_;
  path.push_back({std::string(purpose), index});
  return RandomStream(root_seed_, std::move(path), child_key(key_, purpose, index));
}

std::string RandomStream::path_string() const {
  std::string out = std::to_string(root_seed_);
  for (const auto& label : path_) out += "/" + label.purpose + ":" + std::to_string(label.index);
  return out;
}

std::uint64_t RandomStream::next_u64() {
  const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
  const std::uint64_t t = state_[1] << 17;
  state_[2] ^= state_[0];
  state_[3] ^= state_[1];
  state_[1] ^= state_[2];
  state_[0] ^= state_[3];
  state_[2] ^= t;
  state_[3] = rotl(state_[3], 45);
  return result;
}

double RandomStream::uniform() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

std::uint64_t RandomStream::below(std::uint64_t bound) {
  require(bound > 0, ErrorKind::kInvalidArgument, "below() needs a positive bound");
  // Rejection on the top of the range keeps the draw unbiased.
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % bound;
  std::uint64_t x = next_u64();
  while (x >= limit) x = next_u64();
  return x % bound;
}

double RandomStream::normal() {
  // Box-Muller, one output per pair of uniforms.
  const double u1 = 1.0 - uniform();  // (0, 1]
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

std::vector<std::size_t> RandomStream::sample_without_replacement(std::size_t n, std::size_t k) {
  require(k <= n, ErrorKind::kInvalidArgument, "cannot sample more items than available");
  std::vector<std::size_t> pool(n);
  std::iota(pool.begin(), pool.end(), std::size_t{0});
  for (std::size_t i = 0; i < k; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(below(n - i));
    std::swap(pool[i], pool[j]);
  }
  pool.resize(k);
  return pool;
}

}  // namespace idlab
