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

#include "dplearn/mechanisms.h"

#include <algorithm>
#include <cmath>
#include <vector>

#include "absl/strings/str_cat.h"

namespace dplearn {
namespace {

absl::Status ValidateScores(std::span<const double> scores) {
  if (scores.empty()) {
    return absl::InvalidArgumentError("Exponential mechanism needs candidates");
  }
  for (double s : scores) {
    if (!std::isfinite(s)) {
      return absl::InvalidArgumentError(
          absl::StrCat("Score must be finite, got ", s));
    }
  }
  return absl::OkStatus();
}

absl::Status ValidateEpsilon(double epsilon) {
  if (!(epsilon > 0) || !std::isfinite(epsilon)) {
    return absl::InvalidArgumentError(
        absl::StrCat("Epsilon must be positive and finite, got ", epsilon));
  }
  return absl::OkStatus();
}

// Unnormalized weights exp(epsilon (s - max) / 2); the largest is exactly 1.
std::vector<double> ShiftedWeights(std::span<const double> scores,
                                   double epsilon) {
  const double top = *std::max_element(scores.begin(), scores.end());
  std::vector<double> weights(scores.size());
  for (size_t i = 0; i < scores.size(); ++i) {
    weights[i] = std::exp(epsilon * (scores[i] - top) / 2.0);
  }
  return weights;
}

}  // namespace

absl::StatusOr<PrivacyParams> PrivacyParams::Create(double epsilon,
                                                    double delta) {
  if (absl::Status s = ValidateEpsilon(epsilon); !s.ok()) return s;
  if (!(delta >= 0 && delta < 1)) {
    return absl::InvalidArgumentError(
        absl::StrCat("Delta must lie in [0, 1), got ", delta));
  }
  return PrivacyParams{epsilon, delta};
}

absl::StatusOr<size_t> EmSelect(std::span<const double> scores,
                                double epsilon, RandomSource& source) {
  if (absl::Status s = ValidateScores(scores); !s.ok()) return s;
  if (absl::Status s = ValidateEpsilon(epsilon); !s.ok()) return s;
  if (source.zero_noise()) {
    return static_cast<size_t>(
        std::max_element(scores.begin(), scores.end()) - scores.begin());
  }
  const std::vector<double> weights = ShiftedWeights(scores, epsilon);
  return Categorical(source, weights);
}

absl::StatusOr<std::vector<double>> EmProbabilities(
    std::span<const double> scores, double epsilon) {
  if (absl::Status s = ValidateScores(scores); !s.ok()) return s;
  if (absl::Status s = ValidateEpsilon(epsilon); !s.ok()) return s;
  std::vector<double> weights = ShiftedWeights(scores, epsilon);
  double total = 0;
  for (double w : weights) total += w;
  for (double& w : weights) w /= total;
  return weights;
}

absl::StatusOr<double> EmUtilityBound(int64_t num_candidates, double epsilon,
                                      double tau) {
  if (num_candidates < 1) {
    return absl::InvalidArgumentError("Need at least one candidate");
  }
  if (absl::Status s = ValidateEpsilon(epsilon); !s.ok()) return s;
  if (!(tau >= 0)) {
    return absl::InvalidArgumentError("Deviation term tau must be >= 0");
  }
  return (2.0 / epsilon) *
         (std::log(static_cast<double>(num_candidates)) + tau);
}

absl::StatusOr<AboveThreshold> AboveThreshold::Create(double epsilon_hat,
                                                      double threshold,
                                                      double beta,
                                                      RandomSource& source) {
  if (absl::Status s = ValidateEpsilon(epsilon_hat); !s.ok()) return s;
  if (!(beta > 0 && beta < 1)) {
    return absl::InvalidArgumentError(
        absl::StrCat("AboveThreshold beta must lie in (0, 1), got ", beta));
  }
  if (!std::isfinite(threshold)) {
    return absl::InvalidArgumentError("AboveThreshold threshold must be finite");
  }
  absl::StatusOr<double> noise = Laplace(source, 2.0 / epsilon_hat);
  if (!noise.ok()) return noise.status();
  return AboveThreshold(epsilon_hat, threshold, beta, threshold + *noise);
}

absl::StatusOr<bool> AboveThreshold::Test(double query_value,
                                          RandomSource& source) {
  if (halted_) {
    return absl::FailedPreconditionError(
        "AboveThreshold instance has halted and accepts no further queries");
  }
  absl::StatusOr<double> noise = Laplace(source, 4.0 / epsilon_hat_);
  if (!noise.ok()) return noise.status();
  ++queries_seen_;
  if (query_value + *noise >= noisy_threshold_) {
    halted_ = true;
    return true;
  }
  return false;
}

double AboveThreshold::AccuracyAlpha(double epsilon_hat, int64_t horizon,
                                     double beta) {
  return 8.0 * std::log(2.0 * static_cast<double>(horizon) / beta) /
         epsilon_hat;
}

absl::StatusOr<double> AdvancedComposition(double epsilon_0, int64_t k,
                                           double delta_prime) {
  if (!(epsilon_0 >= 0) || k < 1 || !(delta_prime > 0 && delta_prime < 1)) {
    return absl::InvalidArgumentError(absl::StrCat(
        "Invalid composition parameters: epsilon_0=", epsilon_0, " k=", k,
        " delta_prime=", delta_prime));
  }
  const double kd = static_cast<double>(k);
  return epsilon_0 * std::sqrt(2.0 * kd * std::log(1.0 / delta_prime)) +
         kd * epsilon_0 * epsilon_0;
}

}  // namespace dplearn
