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

#include "dplearn/reductions.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "absl/strings/str_cat.h"

namespace dplearn {

std::vector<int8_t> BitsToSigns(std::span<const uint8_t> bits) {
  std::vector<int8_t> out(bits.size());
  for (size_t i = 0; i < bits.size(); ++i) {
    out[i] = static_cast<int8_t>(BitToSign(bits[i]));
  }
  return out;
}

double MarginHalfspace::Dot(std::span<const int8_t> x) const {
  double s = 0;
  for (size_t i = 0; i < weights.size(); ++i) s += weights[i] * x[i];
  return s;
}

int MarginHalfspace::Predict(std::span<const int8_t> x) const {
  return Dot(x) >= 0 ? 1 : -1;
}

absl::StatusOr<MarginHalfspace> MarginHalfspace::Create(
    std::vector<double> weights, double claimed_margin) {
  if (weights.empty()) {
    return absl::InvalidArgumentError("Halfspace needs at least one weight");
  }
  double norm = 0;
  for (double w : weights) {
    if (!std::isfinite(w)) {
      return absl::InvalidArgumentError("Halfspace weights must be finite");
    }
    norm += std::fabs(w);
  }
  if (std::fabs(norm - 1.0) > 1e-9) {
    return absl::InvalidArgumentError(
        absl::StrCat("Halfspace weights must have L1 norm 1, got ", norm));
  }
  if (!(claimed_margin > 0 && claimed_margin <= 1)) {
    return absl::InvalidArgumentError(
        absl::StrCat("Margin must lie in (0, 1], got ", claimed_margin));
  }
  const int d = static_cast<int>(weights.size());
  return MarginHalfspace{std::move(weights), claimed_margin, d};
}

absl::StatusOr<MarginHalfspace> DecisionListToHalfspace(
    const DecisionList& list) {
  if (!list.IsMonotone()) {
    return absl::InvalidArgumentError(
        "Halfspace encoding needs a monotone 1-decision list; apply "
        "DoubleNonneg/EmbedPm to handle negated literals");
  }
  const int d = list.dimension();
  const std::span<const Term> terms = list.terms();
  const int r = static_cast<int>(terms.size());
  const int alternations = list.TermAlternations();
  const double base = static_cast<double>(r) + 1.0;

  std::vector<double> v(d + 1, 0.0);
  double bias = BitToSign(list.default_bit());
  int block = 1;
  for (int j = 0; j < r; ++j) {
    if (j > 0 && terms[j].bit != terms[j - 1].bit) ++block;
    const double weight = std::pow(base, alternations + 2 - block);
    const double half = BitToSign(terms[j].bit) * weight / 2.0;
    v[terms[j].feature.literals()[0].index] += half;
    bias += half;
  }
  v[d] = bias;

  double norm = 0;
  for (double w : v) norm += std::fabs(w);
  for (double& w : v) w /= norm;
  return MarginHalfspace::Create(std::move(v), 1.0 / norm);
}

std::vector<int8_t> WithBias(std::span<const int8_t> x) {
  std::vector<int8_t> out(x.begin(), x.end());
  out.push_back(1);
  return out;
}

std::vector<double> DoubleNonneg(std::span<const double> w) {
  const size_t d = w.size();
  std::vector<double> out(2 * d, 0.0);
  for (size_t i = 0; i < d; ++i) {
    if (w[i] >= 0) {
      out[i] = w[i];
    } else {
      out[i + d] = -w[i];
    }
  }
  return out;
}

std::vector<int8_t> EmbedPm(std::span<const int8_t> x) {
  const size_t d = x.size();
  std::vector<int8_t> out(2 * d);
  for (size_t i = 0; i < d; ++i) {
    out[i] = x[i];
    out[i + d] = static_cast<int8_t>(-x[i]);
  }
  return out;
}

MarginHalfspace DoubleNonneg(const MarginHalfspace& h) {
  return MarginHalfspace{DoubleNonneg(std::span<const double>(h.weights)),
                         h.claimed_margin, 2 * h.dimension};
}

absl::StatusOr<std::vector<int8_t>> PointFunctionEmbedding::Embed(
    int64_t x) const {
  if (x < 1 || x > domain_size) {
    return absl::OutOfRangeError(
        absl::StrCat("Point ", x, " outside the domain 1..", domain_size));
  }
  std::vector<int8_t> out(domain_size, 1);
  out[x - 1] = -1;
  return out;
}

absl::StatusOr<int> PointFunctionEmbedding::Label(int64_t x) const {
  absl::StatusOr<std::vector<int8_t>> z = Embed(x);
  if (!z.ok()) return z.status();
  const int label = halfspace.Predict(*z);
  return negate_labels ? -label : label;
}

absl::StatusOr<PointFunctionEmbedding> PointFnEmbed(int64_t target,
                                                    int64_t domain_size,
                                                    bool negate_labels) {
  if (domain_size < 1 || domain_size > std::numeric_limits<int>::max()) {
    return absl::InvalidArgumentError(
        absl::StrCat("Domain size must be positive, got ", domain_size));
  }
  if (target < 1 || target > domain_size) {
    return absl::OutOfRangeError(absl::StrCat(
        "Target ", target, " outside the domain 1..", domain_size));
  }
  std::vector<double> e(domain_size, 0.0);
  e[target - 1] = 1.0;
  absl::StatusOr<MarginHalfspace> h = MarginHalfspace::Create(std::move(e), 1);
  if (!h.ok()) return h.status();
  return PointFunctionEmbedding{domain_size, target, negate_labels,
                                *std::move(h)};
}

absl::StatusOr<MarginMeasurement> MeasureListMargin(const DecisionList& list,
                                                    const MarginHalfspace& h) {
  const int d = list.dimension();
  if (d > 24) {
    return absl::ResourceExhaustedError(
        absl::StrCat("Refusing to enumerate 2^", d, " points"));
  }
  if (h.dimension != d + 1) {
    return absl::InvalidArgumentError(absl::StrCat(
        "Halfspace dimension ", h.dimension, " != list dimension + 1"));
  }
  MarginMeasurement m;
  m.min_margin = std::numeric_limits<double>::infinity();
  std::vector<uint8_t> bits(d);
  std::vector<int8_t> x(d + 1, 1);
  const int64_t points = int64_t{1} << d;
  for (int64_t mask = 0; mask < points; ++mask) {
    for (int i = 0; i < d; ++i) {
      bits[i] = static_cast<uint8_t>((mask >> i) & 1);
      x[i] = static_cast<int8_t>(BitToSign(bits[i]));
    }
    const double ip = h.Dot(x);
    m.min_margin = std::min(m.min_margin, std::fabs(ip));
    if ((ip >= 0 ? 1 : -1) != BitToSign(list.EvaluateUnchecked(bits))) {
      ++m.disagreements;
    }
  }
  m.points = points;
  return m;
}

}  // namespace dplearn
