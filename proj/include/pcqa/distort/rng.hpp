// Copyright 2026 The pcqa Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <limits>
#include <string_view>
#include <vector>

namespace pcqa {

// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Order-sensitive combination of integer keys into one 64-bit seed.
std::uint64_t derive_seed(std::initializer_list<std::uint64_t> parts);
std::uint64_t hash_string(std::string_view s);

// Counter-based generator: the i-th output is a pure function of
// (key, stream, i), so independent jobs can each build their own instance
// and produce the same numbers regardless of scheduling. Satisfies
// UniformRandomBitGenerator, so it plugs into <random> distributions.
class CounterRng {
 public:
  using result_type = std::uint64_t;

  explicit CounterRng(std::uint64_t key, std::uint64_t stream = 0)
      : base_(mix64(key ^ mix64(stream + 0x632be59bd9b4e019ULL))) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() { return mix64(base_ + 0x9e3779b97f4a7c15ULL * ++counter_); }

  double uniform();                      // [0, 1)
  double uniform(double lo, double hi);  // [lo, hi)
  double normal();                       // standard normal
  std::size_t index(std::size_t n);      // uniform in [0, n)

  std::uint64_t counter() const { return counter_; }

 private:
  std::uint64_t base_;
  std::uint64_t counter_ = 0;
};

// k distinct indices drawn uniformly from [0, n), in ascending order.
std::vector<std::size_t> sample_without_replacement(std::size_t n, std::size_t k, CounterRng& rng);

// Fisher-Yates permutation of [0, n).
std::vector<std::size_t> random_permutation(std::size_t n, CounterRng& rng);

}  // namespace pcqa
