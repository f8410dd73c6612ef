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

#include "dplearn/streams.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>

#include "absl/strings/str_cat.h"

namespace dplearn {
namespace {

// Proposals are abandoned once this many have been made with an acceptance
// rate of at most 1/1000.
constexpr int64_t kMinProposalsBeforeGivingUp = 10'000;
constexpr double kMaxRejectionRate = 0.999;

// Relative slack on the margin test so that exact-margin points survive
// rounding in the inner product.
constexpr double kMarginSlack = 1e-12;

}  // namespace

absl::StatusOr<DecisionList> RandomDecisionList(const FeatureFamily& family,
                                                int length, int alternations,
                                                RandomSource& source) {
  std::vector<size_t> pool;
  for (size_t i = 0; i < family.size(); ++i) {
    if (family[i].kind() != FeatureKind::kConstantTrue) pool.push_back(i);
  }
  if (length < 0 || static_cast<size_t>(length) > pool.size()) {
    return absl::InvalidArgumentError(absl::StrCat(
        "List length ", length, " needs that many distinct features; the ",
        "family has ", pool.size()));
  }
  const int max_alternations = std::max(length - 1, 0);
  if (alternations < 0 || alternations > max_alternations) {
    return absl::InvalidArgumentError(
        absl::StrCat("A list of length ", length, " has between 0 and ",
                     max_alternations, " alternations, asked for ",
                     alternations));
  }

  // Partial Fisher-Yates for the features.
  for (int j = 0; j < length; ++j) {
    const size_t k = j + source.UniformIndex(pool.size() - j);
    std::swap(pool[j], pool[k]);
  }
  // Choose which of the length-1 gaps flip the bit.
  std::vector<int> gaps(max_alternations);
  std::iota(gaps.begin(), gaps.end(), 1);
  for (int j = 0; j < alternations; ++j) {
    const size_t k = j + source.UniformIndex(gaps.size() - j);
    std::swap(gaps[j], gaps[k]);
  }
  std::vector<bool> flips(length, false);
  for (int j = 0; j < alternations; ++j) flips[gaps[j]] = true;

  int bit = static_cast<int>(source.UniformIndex(2));
  std::vector<Term> terms;
  terms.reserve(length);
  for (int j = 0; j < length; ++j) {
    if (flips[j]) bit = 1 - bit;
    terms.push_back(Term{family[pool[j]], bit});
  }
  const int default_bit = static_cast<int>(source.UniformIndex(2));
  return DecisionList::Create(family.dimension(), std::move(terms),
                              default_bit);
}

PacDistribution PacDistribution::Product(std::vector<double> marginals) {
  PacDistribution d;
  d.kind = Kind::kProduct;
  d.marginals = std::move(marginals);
  return d;
}

PacDistribution PacDistribution::Custom(std::vector<double> point_weights) {
  PacDistribution d;
  d.kind = Kind::kCustom;
  d.point_weights = std::move(point_weights);
  return d;
}

absl::Status PacDistribution::Validate(int dimension) const {
  switch (kind) {
    case Kind::kUniform:
      return absl::OkStatus();
    case Kind::kProduct:
      if (marginals.size() != static_cast<size_t>(dimension)) {
        return absl::InvalidArgumentError(absl::StrCat(
            "Product distribution has ", marginals.size(),
            " marginals for dimension ", dimension));
      }
      for (double p : marginals) {
        if (!(p >= 0 && p <= 1)) {
          return absl::InvalidArgumentError(
              absl::StrCat("Marginal ", p, " outside [0, 1]"));
        }
      }
      return absl::OkStatus();
    case Kind::kCustom:
      if (dimension > 20) {
        return absl::InvalidArgumentError(
            "Custom point weights are limited to d <= 20");
      }
      if (point_weights.size() != (size_t{1} << dimension)) {
        return absl::InvalidArgumentError(absl::StrCat(
            "Custom distribution needs 2^", dimension, " weights, got ",
            point_weights.size()));
      }
      return CategoricalSampler::Create(point_weights).status();
  }
  return absl::InternalError("Unknown distribution kind");
}

absl::Status VerifyRealizable(const DecisionList& target,
                              const PacSample& sample) {
  for (size_t i = 0; i < sample.examples.size(); ++i) {
    absl::StatusOr<int> label = target.Evaluate(sample.examples[i].x);
    if (!label.ok()) return label.status();
    if (*label != sample.examples[i].label) {
      return absl::InvalidArgumentError(
          absl::StrCat("Row ", i, " is not labeled by the target"));
    }
  }
  return absl::OkStatus();
}

absl::StatusOr<PacSample> GeneratePacSample(const DecisionList& target,
                                            const PacDistribution& dist,
                                            int64_t n, RandomSource& source) {
  const int d = target.dimension();
  if (n < 0) return absl::InvalidArgumentError("Sample size must be >= 0");
  if (absl::Status s = dist.Validate(d); !s.ok()) return s;
  std::optional<CategoricalSampler> points;
  if (dist.kind == PacDistribution::Kind::kCustom) {
    absl::StatusOr<CategoricalSampler> sampler =
        CategoricalSampler::Create(dist.point_weights);
    if (!sampler.ok()) return sampler.status();
    points = *std::move(sampler);
  }
  std::vector<PacExample> rows;
  rows.reserve(n);
  for (int64_t i = 0; i < n; ++i) {
    std::vector<uint8_t> x(d);
    switch (dist.kind) {
      case PacDistribution::Kind::kUniform:
        for (int j = 0; j < d; ++j) {
          x[j] = static_cast<uint8_t>(source.NextU64() >> 63);
        }
        break;
      case PacDistribution::Kind::kProduct:
        for (int j = 0; j < d; ++j) {
          x[j] = source.UniformOpen() < dist.marginals[j] ? 1 : 0;
        }
        break;
      case PacDistribution::Kind::kCustom: {
        const size_t point = points->Draw(source);
        for (int j = 0; j < d; ++j) x[j] = (point >> j) & 1;
        break;
      }
    }
    const int label = target.EvaluateUnchecked(x);
    rows.push_back(PacExample{std::move(x), label});
  }
  absl::StatusOr<PacSample> sample = PacSample::Create(d, std::move(rows));
  if (!sample.ok()) return sample.status();
  if (absl::Status s = VerifyRealizable(target, *sample); !s.ok()) return s;
  return sample;
}

absl::Status VerifyMarginStream(const MarginHalfspace& target,
                                std::span<const OnlineExample> stream) {
  const double rho = target.claimed_margin;
  for (size_t t = 0; t < stream.size(); ++t) {
    const OnlineExample& e = stream[t];
    if (e.x.size() != static_cast<size_t>(target.dimension)) {
      return absl::InvalidArgumentError(
          absl::StrCat("Example ", t, " has the wrong dimension"));
    }
    const double m = e.y * target.Dot(e.x);
    if (m < rho * (1 - kMarginSlack)) {
      return absl::InvalidArgumentError(absl::StrCat(
          "Example ", t, " has signed margin ", m, " < ", rho));
    }
  }
  return absl::OkStatus();
}

absl::StatusOr<std::vector<OnlineExample>> GenerateOnlineStream(
    const MarginHalfspace& target, int64_t horizon,
    const OnlineDistribution& dist, RandomSource& source) {
  if (horizon < 0) return absl::InvalidArgumentError("Horizon must be >= 0");
  const double rho = target.claimed_margin;
  if (!(rho > 0)) {
    return absl::InvalidArgumentError("Target margin must be positive");
  }
  if (!(dist.kappa >= 0)) {
    return absl::InvalidArgumentError("kappa must be >= 0");
  }
  const int d = target.dimension;
  const int free = dist.bias_coordinate ? d - 1 : d;
  if (free < 1) return absl::InvalidArgumentError("No free coordinates");

  std::vector<OnlineExample> stream;
  stream.reserve(horizon);
  int64_t proposals = 0;
  std::vector<int8_t> x(d, 1);
  while (static_cast<int64_t>(stream.size()) < horizon) {
    ++proposals;
    if (proposals >= kMinProposalsBeforeGivingUp &&
        static_cast<double>(stream.size()) <=
            (1.0 - kMaxRejectionRate) * static_cast<double>(proposals)) {
      return absl::FailedPreconditionError(absl::StrCat(
          "Rejected ", proposals - static_cast<int64_t>(stream.size()),
          " of ", proposals, " proposals: the distribution puts almost no "
          "mass at margin ", rho));
    }
    for (int j = 0; j < free; ++j) {
      x[j] = (source.NextU64() >> 63) ? 1 : -1;
    }
    const double ip = target.Dot(x);
    const double margin = std::fabs(ip);
    if (margin < rho * (1 - kMarginSlack)) continue;
    if (dist.kind == OnlineDistribution::Kind::kBoundaryHeavy) {
      const double keep =
          std::exp(-dist.kappa * std::max(margin - rho, 0.0) / rho);
      if (source.UniformOpen() >= keep) continue;
    }
    stream.push_back(OnlineExample{x, ip >= 0 ? 1 : -1});
  }
  if (absl::Status s = VerifyMarginStream(target, stream); !s.ok()) return s;
  return stream;
}

absl::StatusOr<MarginHalfspace> MajorityTarget(int dimension,
                                               int subset_size) {
  if (subset_size < 1 || subset_size % 2 == 0 || subset_size > dimension) {
    return absl::InvalidArgumentError(absl::StrCat(
        "Majority needs an odd subset size in [1, d], got ", subset_size));
  }
  std::vector<double> v(dimension, 0.0);
  for (int j = 0; j < subset_size; ++j) v[j] = 1.0 / subset_size;
  return MarginHalfspace::Create(std::move(v), 1.0 / subset_size);
}

absl::StatusOr<MarginHalfspace> CoordinateTarget(int dimension,
                                                 int coordinate) {
  if (coordinate < 0 || coordinate >= dimension) {
    return absl::InvalidArgumentError(
        absl::StrCat("Coordinate ", coordinate, " outside [0, ", dimension,
                     ")"));
  }
  std::vector<double> v(dimension, 0.0);
  v[coordinate] = 1.0;
  return MarginHalfspace::Create(std::move(v), 1.0);
}

std::vector<OnlineExample> EmbedStream(std::span<const OnlineExample> stream) {
  std::vector<OnlineExample> out;
  out.reserve(stream.size());
  for (const OnlineExample& e : stream) {
    out.push_back(OnlineExample{EmbedPm(e.x), e.y});
  }
  return out;
}

std::vector<OnlineExample> PacToOnline(const PacSample& sample) {
  std::vector<OnlineExample> out;
  out.reserve(sample.size());
  for (const PacExample& e : sample.examples) {
    out.push_back(OnlineExample{WithBias(BitsToSigns(e.x)),
                                BitToSign(e.label)});
  }
  return out;
}

}  // namespace dplearn
