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

// Differentially private Winnow for online learning of large-margin
// halfspaces.
//
// The learner keeps a private "shadow" multiplicative-weights vector and
// publishes only an empirical distribution of m samples drawn from it. A
// sparse-vector instance watches the number of mistakes made since the last
// update; when it fires, the shadow vector takes one multiplicative step on
// the first mistake of the epoch, a fresh public vector is sampled and a new
// sparse-vector instance starts. At most K such updates happen per run.

#ifndef DPLEARN_DP_WINNOW_H_
#define DPLEARN_DP_WINNOW_H_

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "dplearn/mechanisms.h"
#include "dplearn/random_source.h"
#include "dplearn/transcript.h"
#include "dplearn/winnow.h"

namespace dplearn {

inline constexpr double kDefaultConfidenceRatio = 0.49;

struct DpWinnowParams {
  // Inputs.
  int64_t horizon = 0;  // T
  int dimension = 0;    // d
  double rho = 1.0;
  double epsilon = 1.0;
  double delta = 1e-6;
  double beta = 0.1;
  double c = kDefaultConfidenceRatio;

  // Derived.
  int64_t switching_bound = 0;  // K
  double epsilon_hat = 0;
  double eta = 0;
  double threshold = 0;      // L
  int64_t sample_count = 0;  // m

  // False for hand-picked parameters that skip the solver.
  bool solved = true;

  // Range checks needed to run the learner (not the solver equations).
  absl::Status Validate() const;

  // Hand-picked parameters for small-scale experiments. The privacy inputs
  // are left at their defaults and `solved` is false.
  static DpWinnowParams Explicit(int64_t horizon, int dimension,
                                 double epsilon_hat, double eta,
                                 double threshold, int64_t sample_count,
                                 int64_t switching_bound, double beta);
};

// Solves for (K, eta, epsilon_hat, L, m):
//   m   = ceil(2 ln(2T/beta) / (c^2 rho^2))
//   K   = ceil(ln d / ((1-c) eta rho - eta^2/2))
//   eta = epsilon / (8 sqrt(2 m K ln(4K/delta)))
//   epsilon_hat = epsilon / (4 sqrt(2 K ln(2/delta)))
//   L   = 8 ln(2T/beta) / epsilon_hat
// K and eta are mutually dependent; they are found by fixed-point iteration
// from eta = rho/4. The iteration on K is monotone, so it settles on an
// exact fixed point. Fails with FailedPrecondition when the solution has
// eta >= rho/2 or the update-bound denominator is not positive.
absl::StatusOr<DpWinnowParams> SolveParams(int64_t horizon, int dimension,
                                           double rho, double epsilon,
                                           double delta, double beta,
                                           double c = kDefaultConfidenceRatio);

// Relative residual of each defining equation, recomputed from the stored
// values. All zero for an exactly solved parameter set.
struct ParamResiduals {
  double sample_count = 0;
  double switching_bound = 0;
  double eta = 0;
  double epsilon_hat = 0;
  double threshold = 0;
  bool eta_below_half_rho = false;

  double Max() const;
};

ParamResiduals CheckParamInvariants(const DpWinnowParams& params);

// K * 16 ln(2T^2/beta) / epsilon_hat: total mistakes allowed with
// probability 1 - 2 beta on realizable streams.
double DpWinnowMistakeBound(const DpWinnowParams& params);

// Public weight vector: integer counts over a common denominator. After an
// update the denominator is m; the initial vector is exactly uniform.
class SampledWeights {
 public:
  static SampledWeights Uniform(int dimension);
  static absl::StatusOr<SampledWeights> FromCounts(std::vector<int64_t> counts);

  int dimension() const { return static_cast<int>(counts_.size()); }
  int64_t denominator() const { return denominator_; }
  std::span<const int64_t> counts() const { return counts_; }
  std::vector<double> Probabilities() const;
  int SupportSize() const;

  // denominator * <w~, x>, computed exactly.
  int64_t ScaledDot(std::span<const int8_t> x) const;
  int Predict(std::span<const int8_t> x) const {
    return ScaledDot(x) >= 0 ? 1 : -1;
  }

  bool operator==(const SampledWeights&) const = default;

 private:
  SampledWeights(std::vector<int64_t> counts, int64_t denominator)
      : counts_(std::move(counts)), denominator_(denominator) {}

  std::vector<int64_t> counts_;
  int64_t denominator_;
};

// Empirical distribution of m i.i.d. draws from w.
absl::StatusOr<SampledWeights> SampleApproxWeights(const WeightVector& w,
                                                   int64_t m,
                                                   RandomSource& source);

// A public update: the round it happened in and the vector released.
struct ReleaseEvent {
  int64_t round;
  SampledWeights released;
};

class DpWinnow {
 public:
  static absl::StatusOr<DpWinnow> Create(const DpWinnowParams& params,
                                         RandomSource& source);

  struct RoundOutcome {
    int prediction;
    bool mistake;
    bool updated;
    // Threshold instance this round was tested against.
    int64_t epoch_id;
  };

  // Plays the next round. OutOfRange past the horizon.
  absl::StatusOr<RoundOutcome> Round(const OnlineExample& example,
                                     RandomSource& source);

  const DpWinnowParams& params() const { return params_; }
  int64_t rounds_played() const { return round_; }
  int64_t updates() const { return k_; }
  // First round of the current epoch (t_p, 1-based).
  int64_t epoch_start() const { return epoch_start_; }
  int64_t epoch_id() const { return epoch_id_; }
  std::span<const OnlineExample> cache() const { return cache_; }
  const WeightVector& shadow() const { return shadow_; }
  const SampledWeights& released() const { return released_; }
  const AboveThreshold& threshold_state() const { return svt_; }
  const std::vector<ReleaseEvent>& history() const { return history_; }

 private:
  DpWinnow(const DpWinnowParams& params, AboveThreshold svt)
      : params_(params),
        shadow_(WeightVector::Uniform(params.dimension)),
        released_(SampledWeights::Uniform(params.dimension)),
        svt_(std::move(svt)) {}

  DpWinnowParams params_;
  int64_t round_ = 0;
  int64_t k_ = 0;
  int64_t epoch_start_ = 1;
  int64_t epoch_id_ = 0;
  std::vector<OnlineExample> cache_;
  WeightVector shadow_;
  SampledWeights released_;
  AboveThreshold svt_;
  std::vector<ReleaseEvent> history_;
};

struct DpWinnowRun {
  RunTranscript transcript;
  std::vector<ReleaseEvent> history;
  WeightVector final_shadow;
};

// Called after every round with the learner's state.
using DpWinnowObserver = std::function<void(const DpWinnow&)>;

absl::StatusOr<DpWinnowRun> RunDpWinnow(std::span<const OnlineExample> stream,
                                        const DpWinnowParams& params,
                                        RandomSource& source,
                                        const DpWinnowObserver& observer =
                                            nullptr);

// Rebuilds the shadow vector at the end of `prefix` from public information
// only: the released vectors, the rounds they were released in, and the
// examples. Replays predictions with the released vectors, tracks each
// epoch's mistake cache and repeats the multiplicative step on its first
// entry at every release. InvalidArgument when the history cannot describe
// a run over this prefix.
absl::StatusOr<WeightVector> RecomputeFromHistory(
    std::span<const ReleaseEvent> history,
    std::span<const OnlineExample> prefix, const DpWinnowParams& params);

}  // namespace dplearn

#endif  // DPLEARN_DP_WINNOW_H_
