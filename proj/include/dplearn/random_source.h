// Copyright 2026 The dplearn Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef DPLEARN_RANDOM_SOURCE_H_
#define DPLEARN_RANDOM_SOURCE_H_

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <string_view>
#include <vector>

#include "absl/status/statusor.h"

namespace dplearn {

// Seedable source of every distribution the learners draw from. All
// experiment randomness flows through one of these, so a run is a pure
// function of its root seed.
//
// Not thread-safe; parallel trials each own a child obtained from Split().
class RandomSource {
 public:
  explicit RandomSource(uint64_t seed, bool zero_noise = false);

  uint64_t seed() const { return seed_; }

  // When set, Laplace draws return exactly 0 and the exponential mechanism
  // degenerates to argmax. Used for exact oracle tests.
  bool zero_noise() const { return zero_noise_; }
  void set_zero_noise(bool zero_noise) { zero_noise_ = zero_noise; }

  // Deterministic child source keyed by (this seed, label, index). Does not
  // advance this source, so children can be derived in any order.
  RandomSource Split(std::string_view label, uint64_t index = 0) const;

  // Uniform on the open interval (0, 1), 53 bits of resolution.
  double UniformOpen();

  uint64_t NextU64() { return engine_(); }

  // Uniform integer in [0, n). n must be positive.
  uint64_t UniformIndex(uint64_t n);

 private:
  uint64_t seed_;
  bool zero_noise_;
  std::mt19937_64 engine_;
};

// 64-bit FNV-1a. Used for seed derivation and config fingerprints.
uint64_t Fnv1a(std::string_view s);

// Laplace(0, scale) by inverse CDF on one uniform draw. Returns 0 in
// zero-noise mode (no uniform is consumed).
absl::StatusOr<double> Laplace(RandomSource& source, double scale);

// Precomputed cumulative table for repeated draws from a fixed weight
// vector. Draw() and Categorical() agree draw-for-draw on the same source.
class CategoricalSampler {
 public:
  static absl::StatusOr<CategoricalSampler> Create(
      std::span<const double> weights);

  size_t Draw(RandomSource& source) const;
  size_t size() const { return cumulative_.size(); }

 private:
  explicit CategoricalSampler(std::vector<double> cumulative)
      : cumulative_(std::move(cumulative)) {}

  std::vector<double> cumulative_;
};

// Index j with probability weights[j] / sum(weights).
absl::StatusOr<size_t> Categorical(RandomSource& source,
                                   std::span<const double> weights);

}  // namespace dplearn

#endif  // DPLEARN_RANDOM_SOURCE_H_
