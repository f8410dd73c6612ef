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

#ifndef DPLEARN_MECHANISMS_H_
#define DPLEARN_MECHANISMS_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "dplearn/random_source.h"

namespace dplearn {

// An (epsilon, delta) privacy guarantee.
struct PrivacyParams {
  double epsilon;
  double delta = 0;

  static absl::StatusOr<PrivacyParams> Create(double epsilon, double delta);
};

// Exponential mechanism over sensitivity-1 scores: returns h with
// probability proportional to exp(epsilon * scores[h] / 2), favoring larger
// scores. Scores are shifted by their maximum before exponentiation.
//
// In zero-noise mode returns the argmax, lowest index on ties.
absl::StatusOr<size_t> EmSelect(std::span<const double> scores,
                                double epsilon, RandomSource& source);

// Selection probabilities of EmSelect, for oracles and ratio tests.
absl::StatusOr<std::vector<double>> EmProbabilities(
    std::span<const double> scores, double epsilon);

// Additive utility loss (2/epsilon)(ln(num_candidates) + tau), exceeded with
// probability at most exp(-tau).
absl::StatusOr<double> EmUtilityBound(int64_t num_candidates, double epsilon,
                                      double tau);

// Interactive sparse-vector instance. The threshold carries
// Laplace(2/epsilon_hat) noise fixed at creation; each query carries fresh
// Laplace(4/epsilon_hat) noise. The first query whose noisy value reaches
// the noisy threshold answers true and halts the instance.
class AboveThreshold {
 public:
  static absl::StatusOr<AboveThreshold> Create(double epsilon_hat,
                                               double threshold, double beta,
                                               RandomSource& source);

  // Submits a sensitivity-1 query value and tests it against the threshold.
  // FailedPrecondition once the instance has halted.
  absl::StatusOr<bool> Test(double query_value, RandomSource& source);

  double epsilon_hat() const { return epsilon_hat_; }
  double threshold() const { return threshold_; }
  double noisy_threshold() const { return noisy_threshold_; }
  double beta() const { return beta_; }
  bool halted() const { return halted_; }
  int64_t queries_seen() const { return queries_seen_; }

  // Accuracy radius 8 ln(2T/beta) / epsilon_hat over a horizon of T queries.
  static double AccuracyAlpha(double epsilon_hat, int64_t horizon,
                              double beta);

 private:
  AboveThreshold(double epsilon_hat, double threshold, double beta,
                 double noisy_threshold)
      : epsilon_hat_(epsilon_hat),
        threshold_(threshold),
        beta_(beta),
        noisy_threshold_(noisy_threshold) {}

  double epsilon_hat_;
  double threshold_;
  double beta_;
  double noisy_threshold_;
  bool halted_ = false;
  int64_t queries_seen_ = 0;
};

// Advanced composition of k epsilon_0-DP steps:
// epsilon_0 * sqrt(2 k ln(1/delta_prime)) + k * epsilon_0^2.
absl::StatusOr<double> AdvancedComposition(double epsilon_0, int64_t k,
                                           double delta_prime);

}  // namespace dplearn

#endif  // DPLEARN_MECHANISMS_H_
