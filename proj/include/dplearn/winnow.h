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

#ifndef DPLEARN_WINNOW_H_
#define DPLEARN_WINNOW_H_

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "dplearn/transcript.h"

namespace dplearn {

// sgn with sgn(0) = +1.
inline int Sign(double v) { return v >= 0 ? 1 : -1; }

// A point on the probability simplex, kept as normalized log-weights so that
// long runs of multiplicative updates neither underflow nor drift off the
// simplex. Zero entries are stored as -infinity.
class WeightVector {
 public:
  static WeightVector Uniform(int dimension);
  // Entries must be >= 0 and sum to 1 within 1e-9; they are renormalized.
  static absl::StatusOr<WeightVector> FromProbabilities(
      std::span<const double> probabilities);
  // Any finite-or-(-inf) log weights, normalized on construction.
  static WeightVector FromLogWeights(std::vector<double> log_weights);

  int dimension() const { return static_cast<int>(probabilities_.size()); }
  std::span<const double> probabilities() const { return probabilities_; }
  std::span<const double> log_probabilities() const { return log_weights_; }
  double operator[](size_t i) const { return probabilities_[i]; }

  // <w, x>; dimensions must agree.
  double Dot(std::span<const int8_t> x) const;

 private:
  WeightVector(std::vector<double> log_weights,
               std::vector<double> probabilities)
      : log_weights_(std::move(log_weights)),
        probabilities_(std::move(probabilities)) {}

  std::vector<double> log_weights_;
  std::vector<double> probabilities_;
};

// w_j <- w_j exp(eta y x_j) / sum_k w_k exp(eta y x_k).
absl::StatusOr<WeightVector> MwUpdate(const WeightVector& w,
                                      std::span<const int8_t> x, int y,
                                      double eta);

// x in {-1,+1}^d, y in {-1,+1}.
struct OnlineExample {
  std::vector<int8_t> x;
  int y = 1;

  absl::Status Validate() const;
};

// Relative entropy sum_i v_i ln(v_i / w_i), with 0 ln(0/w) = 0. v must be
// nonnegative; OutOfRange when v_i > 0 where w_i = 0.
absl::StatusOr<double> Potential(std::span<const double> v,
                                 const WeightVector& w);

struct ConfidentWinnowParams {
  double eta = 0.5;
  // Confidence ratio in [0, 1/2); 0 with all-zero update bits is Winnow.
  double c = 0.25;
  double rho = 1.0;

  absl::Status Validate() const;
};

// log d / ((1-c) eta rho - eta^2/2); +infinity when the denominator is not
// positive.
double ConfidentWinnowUpdateBound(int dimension,
                                  const ConfidentWinnowParams& params);

// Multiplicative weights that update on every mistake, and additionally on
// unconfident rounds (|<w,x>| < c rho) when the adversary's bit asks it to.
class ConfidentWinnow {
 public:
  static absl::StatusOr<ConfidentWinnow> Create(int dimension,
                                                ConfidentWinnowParams params);
  static absl::StatusOr<ConfidentWinnow> Create(WeightVector initial,
                                                ConfidentWinnowParams params);

  struct Step {
    int prediction;
    bool updated;
    double inner_product;
  };

  absl::StatusOr<Step> Observe(const OnlineExample& example, int update_bit);

  const WeightVector& weights() const { return weights_; }
  const ConfidentWinnowParams& params() const { return params_; }
  int64_t updates_made() const { return updates_made_; }

 private:
  ConfidentWinnow(WeightVector initial, ConfidentWinnowParams params)
      : weights_(std::move(initial)), params_(params) {}

  WeightVector weights_;
  ConfidentWinnowParams params_;
  int64_t updates_made_ = 0;
};

struct UpdateEvent {
  int64_t round;
  const OnlineExample& example;
  const WeightVector& before;
  const WeightVector& after;
};

using UpdateObserver = std::function<void(const UpdateEvent&)>;

// Runs ConfidentWinnow over `stream`, feeding update_bits[t] as the
// adversary's bit in round t. update_bits must match the stream length.
absl::StatusOr<RunTranscript> RunConfidentWinnow(
    int dimension, std::span<const OnlineExample> stream,
    std::span<const uint8_t> update_bits, const ConfidentWinnowParams& params,
    const UpdateObserver& observer = nullptr);

// Classic Winnow: c = 0 and no adversarial updates.
absl::StatusOr<RunTranscript> RunWinnow(int dimension,
                                        std::span<const OnlineExample> stream,
                                        double eta, double rho,
                                        const UpdateObserver& observer = nullptr);

}  // namespace dplearn

#endif  // DPLEARN_WINNOW_H_
