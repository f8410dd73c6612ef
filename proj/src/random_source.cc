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

#include "dplearn/random_source.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"

namespace dplearn {
namespace {

uint64_t SplitMix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

uint64_t Fnv1a(std::string_view s) {
  uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

RandomSource::RandomSource(uint64_t seed, bool zero_noise)
    : seed_(seed), zero_noise_(zero_noise), engine_(seed) {}

RandomSource RandomSource::Split(std::string_view label,
                                 uint64_t index) const {
  uint64_t child = SplitMix64(seed_ ^ SplitMix64(Fnv1a(label)));
  child = SplitMix64(child ^ SplitMix64(index + 0x632be59bd9b4e019ULL));
  return RandomSource(child, zero_noise_);
}

double RandomSource::UniformOpen() {
  // (k + 0.5) / 2^53 for k in [0, 2^53): never 0, never 1.
  const uint64_t k = engine_() >> 11;
  return (static_cast<double>(k) + 0.5) * 0x1.0p-53;
}

uint64_t RandomSource::UniformIndex(uint64_t n) {
  // Lemire-style rejection keeps this exactly uniform.
  const uint64_t limit = std::numeric_limits<uint64_t>::max() -
                         std::numeric_limits<uint64_t>::max() % n;
  uint64_t r;
  do {
    r = engine_();
  } while (r >= limit);
  return r % n;
}

absl::StatusOr<double> Laplace(RandomSource& source, double scale) {
  if (!(scale > 0) || !std::isfinite(scale)) {
    return absl::InvalidArgumentError(
        absl::StrCat("Laplace scale must be positive and finite, got ", scale));
  }
  if (source.zero_noise()) return 0.0;
  const double u = source.UniformOpen() - 0.5;
  const double magnitude = -scale * std::log1p(-2.0 * std::fabs(u));
  return u < 0 ? -magnitude : magnitude;
}

absl::StatusOr<CategoricalSampler> CategoricalSampler::Create(
    std::span<const double> weights) {
  if (weights.empty()) {
    return absl::InvalidArgumentError("Categorical weights are empty");
  }
  std::vector<double> cumulative;
  cumulative.reserve(weights.size());
  double total = 0;
  for (double w : weights) {
    if (!(w >= 0) || !std::isfinite(w)) {
      return absl::InvalidArgumentError(
          absl::StrCat("Categorical weight must be finite and >= 0, got ", w));
    }
    total += w;
    cumulative.push_back(total);
  }
  if (!(total > 0)) {
    return absl::InvalidArgumentError("Categorical weights sum to zero");
  }
  return CategoricalSampler(std::move(cumulative));
}

size_t CategoricalSampler::Draw(RandomSource& source) const {
  const double target = source.UniformOpen() * cumulative_.back();
  // First index whose cumulative mass strictly exceeds the target; entries
  // with zero weight can never be selected.
  auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), target);
  if (it == cumulative_.end()) {
    // Rounding put the target on the total; take the last positive weight.
    it = std::lower_bound(cumulative_.begin(), cumulative_.end(),
                          cumulative_.back());
  }
  return static_cast<size_t>(it - cumulative_.begin());
}

absl::StatusOr<size_t> Categorical(RandomSource& source,
                                   std::span<const double> weights) {
  absl::StatusOr<CategoricalSampler> sampler =
      CategoricalSampler::Create(weights);
  if (!sampler.ok()) return sampler.status();
  return sampler->Draw(source);
}

}  // namespace dplearn
