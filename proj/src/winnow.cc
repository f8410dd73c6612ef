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

#include "dplearn/winnow.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

#include "absl/strings/str_cat.h"

namespace dplearn {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Shifts log weights so that they log-sum-exp to zero and returns the
// matching probabilities.
std::vector<double> NormalizeLog(std::vector<double>& log_weights) {
  const double top =
      *std::max_element(log_weights.begin(), log_weights.end());
  double total = 0;
  for (double l : log_weights) total += std::exp(l - top);
  const double lse = top + std::log(total);
  std::vector<double> probabilities(log_weights.size());
  for (size_t i = 0; i < log_weights.size(); ++i) {
    log_weights[i] -= lse;
    probabilities[i] = std::exp(log_weights[i]);
  }
  return probabilities;
}

}  // namespace

WeightVector WeightVector::Uniform(int dimension) {
  const double d = static_cast<double>(dimension);
  return WeightVector(std::vector<double>(dimension, -std::log(d)),
                      std::vector<double>(dimension, 1.0 / d));
}

absl::StatusOr<WeightVector> WeightVector::FromProbabilities(
    std::span<const double> probabilities) {
  if (probabilities.empty()) {
    return absl::InvalidArgumentError("Weight vector must be nonempty");
  }
  double total = 0;
  for (double p : probabilities) {
    if (!(p >= 0) || !std::isfinite(p)) {
      return absl::InvalidArgumentError(
          absl::StrCat("Weights must be finite and >= 0, got ", p));
    }
    total += p;
  }
  if (std::fabs(total - 1.0) > 1e-9) {
    return absl::InvalidArgumentError(
        absl::StrCat("Weights must sum to 1, got ", total));
  }
  std::vector<double> logs(probabilities.size());
  for (size_t i = 0; i < logs.size(); ++i) {
    logs[i] = probabilities[i] > 0 ? std::log(probabilities[i]) : kNegInf;
  }
  return FromLogWeights(std::move(logs));
}

WeightVector WeightVector::FromLogWeights(std::vector<double> log_weights) {
  std::vector<double> probabilities = NormalizeLog(log_weights);
  return WeightVector(std::move(log_weights), std::move(probabilities));
}

double WeightVector::Dot(std::span<const int8_t> x) const {
  double s = 0;
  for (size_t i = 0; i < probabilities_.size(); ++i) {
    s += probabilities_[i] * x[i];
  }
  return s;
}

absl::StatusOr<WeightVector> MwUpdate(const WeightVector& w,
                                      std::span<const int8_t> x, int y,
                                      double eta) {
  if (x.size() != static_cast<size_t>(w.dimension())) {
    return absl::InvalidArgumentError(absl::StrCat(
        "Example dimension ", x.size(), " != weight dimension ",
        w.dimension()));
  }
  if (eta == 0) return w;
  std::vector<double> logs(w.log_probabilities().begin(),
                           w.log_probabilities().end());
  for (size_t j = 0; j < logs.size(); ++j) logs[j] += eta * y * x[j];
  return WeightVector::FromLogWeights(std::move(logs));
}

absl::Status OnlineExample::Validate() const {
  if (x.empty()) return absl::InvalidArgumentError("Empty example");
  for (int8_t v : x) {
    if (v != 1 && v != -1) {
      return absl::InvalidArgumentError(
          absl::StrCat("Online features must be +-1, got ", static_cast<int>(v)));
    }
  }
  if (y != 1 && y != -1) {
    return absl::InvalidArgumentError(
        absl::StrCat("Online labels must be +-1, got ", y));
  }
  return absl::OkStatus();
}

absl::StatusOr<double> Potential(std::span<const double> v,
                                 const WeightVector& w) {
  if (v.size() != static_cast<size_t>(w.dimension())) {
    return absl::InvalidArgumentError("Potential: dimension mismatch");
  }
  double phi = 0;
  for (size_t i = 0; i < v.size(); ++i) {
    if (v[i] < 0) {
      return absl::InvalidArgumentError("Potential: target must be >= 0");
    }
    if (v[i] == 0) continue;
    if (w.log_probabilities()[i] == kNegInf) {
      return absl::OutOfRangeError(absl::StrCat(
          "Potential is infinite: target has mass at ", i,
          " where the weights are zero"));
    }
    phi += v[i] * (std::log(v[i]) - w.log_probabilities()[i]);
  }
  return phi;
}

absl::Status ConfidentWinnowParams::Validate() const {
  if (!(eta > 0) || !std::isfinite(eta)) {
    return absl::InvalidArgumentError(
        absl::StrCat("Learning rate must be positive, got ", eta));
  }
  if (!(c >= 0 && c < 0.5)) {
    return absl::InvalidArgumentError(
        absl::StrCat("Confidence ratio must lie in [0, 1/2), got ", c));
  }
  if (!(rho > 0 && rho <= 1)) {
    return absl::InvalidArgumentError(
        absl::StrCat("Margin must lie in (0, 1], got ", rho));
  }
  return absl::OkStatus();
}

double ConfidentWinnowUpdateBound(int dimension,
                                  const ConfidentWinnowParams& params) {
  const double denom = (1.0 - params.c) * params.eta * params.rho -
                       params.eta * params.eta / 2.0;
  if (!(denom > 0)) return std::numeric_limits<double>::infinity();
  return std::log(static_cast<double>(dimension)) / denom;
}

absl::StatusOr<ConfidentWinnow> ConfidentWinnow::Create(
    int dimension, ConfidentWinnowParams params) {
  if (dimension < 1) {
    return absl::InvalidArgumentError("Dimension must be positive");
  }
  return Create(WeightVector::Uniform(dimension), params);
}

absl::StatusOr<ConfidentWinnow> ConfidentWinnow::Create(
    WeightVector initial, ConfidentWinnowParams params) {
  if (absl::Status s = params.Validate(); !s.ok()) return s;
  return ConfidentWinnow(std::move(initial), params);
}

absl::StatusOr<ConfidentWinnow::Step> ConfidentWinnow::Observe(
    const OnlineExample& example, int update_bit) {
  if (example.x.size() != static_cast<size_t>(weights_.dimension())) {
    return absl::InvalidArgumentError("Example dimension mismatch");
  }
  const double ip = weights_.Dot(example.x);
  const int prediction = Sign(ip);
  const double band = params_.c * params_.rho;
  const bool unconfident = -band < ip && ip < band;
  const bool update =
      prediction != example.y || (unconfident && update_bit == 1);
  if (update) {
    absl::StatusOr<WeightVector> next =
        MwUpdate(weights_, example.x, example.y, params_.eta);
    if (!next.ok()) return next.status();
    weights_ = *std::move(next);
    ++updates_made_;
  }
  return Step{prediction, update, ip};
}

absl::StatusOr<RunTranscript> RunConfidentWinnow(
    int dimension, std::span<const OnlineExample> stream,
    std::span<const uint8_t> update_bits, const ConfidentWinnowParams& params,
    const UpdateObserver& observer) {
  if (update_bits.size() != stream.size()) {
    return absl::InvalidArgumentError(absl::StrCat(
        "Got ", update_bits.size(), " update bits for ", stream.size(),
        " rounds"));
  }
  absl::StatusOr<ConfidentWinnow> learner =
      ConfidentWinnow::Create(dimension, params);
  if (!learner.ok()) return learner.status();

  RunTranscript transcript;
  transcript.rounds.reserve(stream.size());
  for (size_t t = 0; t < stream.size(); ++t) {
    const OnlineExample& example = stream[t];
    if (absl::Status s = example.Validate(); !s.ok()) return s;
    std::optional<WeightVector> before;
    if (observer) before = learner->weights();
    absl::StatusOr<ConfidentWinnow::Step> step =
        learner->Observe(example, update_bits[t]);
    if (!step.ok()) return step.status();
    const int64_t round = static_cast<int64_t>(t) + 1;
    if (step->updated && observer) {
      observer(UpdateEvent{round, example, *before, learner->weights()});
    }
    transcript.rounds.push_back(RoundRecord{
        round, step->prediction, example.y, step->prediction != example.y,
        step->updated, learner->updates_made(), 0});
  }
  return transcript;
}

absl::StatusOr<RunTranscript> RunWinnow(int dimension,
                                        std::span<const OnlineExample> stream,
                                        double eta, double rho,
                                        const UpdateObserver& observer) {
  const std::vector<uint8_t> no_bits(stream.size(), 0);
  return RunConfidentWinnow(dimension, stream, no_bits,
                            ConfidentWinnowParams{eta, 0.0, rho}, observer);
}

}  // namespace dplearn
