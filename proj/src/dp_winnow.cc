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

#include "dplearn/dp_winnow.h"

#include <algorithm>
#include <cmath>

#include "absl/strings/str_cat.h"

namespace dplearn {
namespace {

constexpr int kMaxSolverIterations = 200;

double SampleCountExact(const DpWinnowParams& p) {
  return 2.0 * std::log(2.0 * static_cast<double>(p.horizon) / p.beta) /
         (p.c * p.c * p.rho * p.rho);
}

double UpdateDenominator(double c, double eta, double rho) {
  return (1.0 - c) * eta * rho - eta * eta / 2.0;
}

double EtaFor(double epsilon, double delta, int64_t m, int64_t k) {
  const double kd = static_cast<double>(k);
  return epsilon / (8.0 * std::sqrt(2.0 * static_cast<double>(m) * kd *
                                    std::log(4.0 * kd / delta)));
}

double EpsilonHatFor(double epsilon, double delta, int64_t k) {
  return epsilon /
         (4.0 * std::sqrt(2.0 * static_cast<double>(k) * std::log(2.0 / delta)));
}

double ThresholdFor(int64_t horizon, double beta, double epsilon_hat) {
  return 8.0 * std::log(2.0 * static_cast<double>(horizon) / beta) /
         epsilon_hat;
}

double RelativeError(double actual, double expected) {
  if (expected == 0) return std::fabs(actual);
  return std::fabs(actual - expected) / std::fabs(expected);
}

}  // namespace

absl::Status DpWinnowParams::Validate() const {
  if (horizon < 1) return absl::InvalidArgumentError("Horizon must be >= 1");
  if (dimension < 1) {
    return absl::InvalidArgumentError("Dimension must be >= 1");
  }
  if (!(epsilon_hat > 0) || !std::isfinite(epsilon_hat)) {
    return absl::InvalidArgumentError("epsilon_hat must be positive");
  }
  if (!(eta > 0) || !std::isfinite(eta)) {
    return absl::InvalidArgumentError("eta must be positive");
  }
  if (!std::isfinite(threshold)) {
    return absl::InvalidArgumentError("Threshold must be finite");
  }
  if (sample_count < 1) {
    return absl::InvalidArgumentError("Sample count m must be >= 1");
  }
  if (switching_bound < 0) {
    return absl::InvalidArgumentError("Switching bound K must be >= 0");
  }
  if (!(beta > 0 && beta < 1)) {
    return absl::InvalidArgumentError("beta must lie in (0, 1)");
  }
  return absl::OkStatus();
}

DpWinnowParams DpWinnowParams::Explicit(int64_t horizon, int dimension,
                                        double epsilon_hat, double eta,
                                        double threshold,
                                        int64_t sample_count,
                                        int64_t switching_bound, double beta) {
  DpWinnowParams p;
  p.horizon = horizon;
  p.dimension = dimension;
  p.beta = beta;
  p.epsilon_hat = epsilon_hat;
  p.eta = eta;
  p.threshold = threshold;
  p.sample_count = sample_count;
  p.switching_bound = switching_bound;
  p.solved = false;
  return p;
}

absl::StatusOr<DpWinnowParams> SolveParams(int64_t horizon, int dimension,
                                           double rho, double epsilon,
                                           double delta, double beta,
                                           double c) {
  if (horizon < 1 || dimension < 2 || !(rho > 0 && rho <= 1) ||
      !(epsilon > 0) || !std::isfinite(epsilon) || !(delta > 0 && delta < 1) ||
      !(beta > 0 && beta < 1) || !(c > 0 && c < 0.5)) {
    return absl::InvalidArgumentError(absl::StrCat(
        "Invalid DP-Winnow inputs: T=", horizon, " d=", dimension,
        " rho=", rho, " epsilon=", epsilon, " delta=", delta, " beta=", beta,
        " c=", c, " (need T>=1, d>=2, rho in (0,1], delta and beta in "
        "(0,1), c in (0,1/2))"));
  }
  DpWinnowParams p;
  p.horizon = horizon;
  p.dimension = dimension;
  p.rho = rho;
  p.epsilon = epsilon;
  p.delta = delta;
  p.beta = beta;
  p.c = c;
  p.sample_count = static_cast<int64_t>(std::ceil(SampleCountExact(p)));

  const double log_d = std::log(static_cast<double>(dimension));
  auto switching_for = [&](double eta) -> absl::StatusOr<int64_t> {
    const double denom = UpdateDenominator(c, eta, rho);
    if (!(denom > 0)) {
      return absl::FailedPreconditionError(absl::StrCat(
          "Infeasible parameters: (1-c) eta rho - eta^2/2 = ", denom,
          " <= 0 at eta=", eta, " rho=", rho, " c=", c));
    }
    return static_cast<int64_t>(std::ceil(log_d / denom));
  };

  double eta = rho / 4.0;
  absl::StatusOr<int64_t> k = switching_for(eta);
  if (!k.ok()) return k.status();
  bool converged = false;
  for (int it = 0; it < kMaxSolverIterations; ++it) {
    const double next_eta = EtaFor(epsilon, delta, p.sample_count, *k);
    absl::StatusOr<int64_t> next_k = switching_for(next_eta);
    if (!next_k.ok()) return next_k.status();
    const bool settled = *next_k == *k;
    const bool eta_close = std::fabs(next_eta - eta) < 1e-12 * rho;
    eta = next_eta;
    k = next_k;
    if (settled || eta_close) {
      // Close the loop so that eta is exactly the value implied by K.
      eta = EtaFor(epsilon, delta, p.sample_count, *k);
      absl::StatusOr<int64_t> check = switching_for(eta);
      if (!check.ok()) return check.status();
      if (*check == *k) {
        converged = true;
        break;
      }
      k = check;
    }
  }
  if (!converged) {
    return absl::InternalError(absl::StrCat(
        "Parameter solver did not converge in ", kMaxSolverIterations,
        " iterations (last eta=", eta, ", K=", *k, ")"));
  }
  p.switching_bound = *k;
  p.eta = eta;
  p.epsilon_hat = EpsilonHatFor(epsilon, delta, *k);
  p.threshold = ThresholdFor(horizon, beta, p.epsilon_hat);
  if (!(eta < rho / 2.0)) {
    return absl::FailedPreconditionError(absl::StrCat(
        "Infeasible parameters: eta=", eta, " >= rho/2=", rho / 2.0,
        " (epsilon=", epsilon, ", K=", *k, ", m=", p.sample_count, ")"));
  }
  return p;
}

double ParamResiduals::Max() const {
  return std::max({sample_count, switching_bound, eta, epsilon_hat,
                   threshold});
}

ParamResiduals CheckParamInvariants(const DpWinnowParams& p) {
  ParamResiduals r;
  r.sample_count = RelativeError(static_cast<double>(p.sample_count),
                                 std::ceil(SampleCountExact(p)));
  const double denom = UpdateDenominator(p.c, p.eta, p.rho);
  const double k_expected =
      denom > 0 ? std::ceil(std::log(static_cast<double>(p.dimension)) / denom)
                : std::numeric_limits<double>::infinity();
  r.switching_bound =
      RelativeError(static_cast<double>(p.switching_bound), k_expected);
  r.eta = RelativeError(
      p.eta, EtaFor(p.epsilon, p.delta, p.sample_count, p.switching_bound));
  r.epsilon_hat = RelativeError(
      p.epsilon_hat, EpsilonHatFor(p.epsilon, p.delta, p.switching_bound));
  r.threshold = RelativeError(p.threshold,
                              ThresholdFor(p.horizon, p.beta, p.epsilon_hat));
  r.eta_below_half_rho = p.eta < p.rho / 2.0;
  return r;
}

double DpWinnowMistakeBound(const DpWinnowParams& p) {
  const double t = static_cast<double>(p.horizon);
  return static_cast<double>(p.switching_bound) * 16.0 *
         std::log(2.0 * t * t / p.beta) / p.epsilon_hat;
}

SampledWeights SampledWeights::Uniform(int dimension) {
  return SampledWeights(std::vector<int64_t>(dimension, 1), dimension);
}

absl::StatusOr<SampledWeights> SampledWeights::FromCounts(
    std::vector<int64_t> counts) {
  if (counts.empty()) {
    return absl::InvalidArgumentError("Sampled weights must be nonempty");
  }
  int64_t total = 0;
  for (int64_t c : counts) {
    if (c < 0) return absl::InvalidArgumentError("Negative sample count");
    total += c;
  }
  if (total == 0) return absl::InvalidArgumentError("Sample counts are zero");
  return SampledWeights(std::move(counts), total);
}

std::vector<double> SampledWeights::Probabilities() const {
  std::vector<double> p(counts_.size());
  for (size_t j = 0; j < counts_.size(); ++j) {
    p[j] = static_cast<double>(counts_[j]) / static_cast<double>(denominator_);
  }
  return p;
}

int SampledWeights::SupportSize() const {
  return static_cast<int>(
      std::count_if(counts_.begin(), counts_.end(),
                    [](int64_t c) { return c > 0; }));
}

int64_t SampledWeights::ScaledDot(std::span<const int8_t> x) const {
  int64_t s = 0;
  for (size_t j = 0; j < counts_.size(); ++j) s += counts_[j] * x[j];
  return s;
}

absl::StatusOr<SampledWeights> SampleApproxWeights(const WeightVector& w,
                                                   int64_t m,
                                                   RandomSource& source) {
  if (m < 1) return absl::InvalidArgumentError("Sample count must be >= 1");
  absl::StatusOr<CategoricalSampler> sampler =
      CategoricalSampler::Create(w.probabilities());
  if (!sampler.ok()) return sampler.status();
  std::vector<int64_t> counts(w.dimension(), 0);
  for (int64_t i = 0; i < m; ++i) ++counts[sampler->Draw(source)];
  return SampledWeights::FromCounts(std::move(counts));
}

absl::StatusOr<DpWinnow> DpWinnow::Create(const DpWinnowParams& params,
                                          RandomSource& source) {
  if (absl::Status s = params.Validate(); !s.ok()) return s;
  absl::StatusOr<AboveThreshold> svt =
      AboveThreshold::Create(params.epsilon_hat, params.threshold,
                             params.beta / static_cast<double>(params.horizon),
                             source);
  if (!svt.ok()) return svt.status();
  return DpWinnow(params, *std::move(svt));
}

absl::StatusOr<DpWinnow::RoundOutcome> DpWinnow::Round(
    const OnlineExample& example, RandomSource& source) {
  if (round_ >= params_.horizon) {
    return absl::OutOfRangeError(absl::StrCat(
        "Round ", round_ + 1, " is past the horizon T=", params_.horizon));
  }
  if (example.x.size() != static_cast<size_t>(params_.dimension)) {
    return absl::InvalidArgumentError(absl::StrCat(
        "Example dimension ", example.x.size(), " != ", params_.dimension));
  }
  const int64_t t = ++round_;
  RoundOutcome out{released_.Predict(example.x), false, false, epoch_id_};
  out.mistake = out.prediction != example.y;
  if (out.mistake) cache_.push_back(example);

  // Once the budget is spent the last instance stays halted and no further
  // queries are asked.
  if (svt_.halted()) return out;

  // Mistakes since the epoch started, this round included.
  const double query = static_cast<double>(cache_.size());
  absl::StatusOr<bool> fired = svt_.Test(query, source);
  if (!fired.ok()) return fired.status();
  if (!*fired || k_ >= params_.switching_bound) return out;

  // A noisy threshold can fire before any mistake; the step is then skipped
  // but the epoch still closes and a fresh vector is released.
  if (!cache_.empty()) {
    const OnlineExample& first = cache_.front();
    absl::StatusOr<WeightVector> next =
        MwUpdate(shadow_, first.x, first.y, params_.eta);
    if (!next.ok()) return next.status();
    shadow_ = *std::move(next);
  }
  absl::StatusOr<SampledWeights> fresh =
      SampleApproxWeights(shadow_, params_.sample_count, source);
  if (!fresh.ok()) return fresh.status();
  released_ = *std::move(fresh);
  history_.push_back({t, released_});
  ++k_;
  cache_.clear();
  epoch_start_ = t + 1;
  ++epoch_id_;
  absl::StatusOr<AboveThreshold> svt = AboveThreshold::Create(
      params_.epsilon_hat, params_.threshold,
      params_.beta / static_cast<double>(params_.horizon), source);
  if (!svt.ok()) return svt.status();
  svt_ = *std::move(svt);
  out.updated = true;
  return out;
}

absl::StatusOr<DpWinnowRun> RunDpWinnow(std::span<const OnlineExample> stream,
                                        const DpWinnowParams& params,
                                        RandomSource& source,
                                        const DpWinnowObserver& observer) {
  if (static_cast<int64_t>(stream.size()) > params.horizon) {
    return absl::InvalidArgumentError(absl::StrCat(
        "Stream has ", stream.size(), " rounds, horizon is ", params.horizon));
  }
  absl::StatusOr<DpWinnow> learner = DpWinnow::Create(params, source);
  if (!learner.ok()) return learner.status();
  RunTranscript transcript;
  transcript.rounds.reserve(stream.size());
  for (const OnlineExample& example : stream) {
    if (absl::Status s = example.Validate(); !s.ok()) return s;
    absl::StatusOr<DpWinnow::RoundOutcome> r = learner->Round(example, source);
    if (!r.ok()) return r.status();
    transcript.rounds.push_back(RoundRecord{
        learner->rounds_played(), r->prediction, example.y, r->mistake,
        r->updated, learner->updates(), r->epoch_id});
    if (observer) observer(*learner);
  }
  return DpWinnowRun{std::move(transcript), learner->history(),
                     learner->shadow()};
}

absl::StatusOr<WeightVector> RecomputeFromHistory(
    std::span<const ReleaseEvent> history,
    std::span<const OnlineExample> prefix, const DpWinnowParams& params) {
  const int d = params.dimension;
  int64_t previous = 0;
  for (size_t i = 0; i < history.size(); ++i) {
    const ReleaseEvent& e = history[i];
    if (e.round <= previous || e.round > static_cast<int64_t>(prefix.size())) {
      return absl::InvalidArgumentError(absl::StrCat(
          "Release ", i, " at round ", e.round,
          " is out of order or beyond the prefix of ", prefix.size(),
          " rounds"));
    }
    if (e.released.dimension() != d ||
        e.released.denominator() != params.sample_count) {
      return absl::InvalidArgumentError(absl::StrCat(
          "Release ", i, " is not an m=", params.sample_count,
          " sample over d=", d, " coordinates"));
    }
    previous = e.round;
  }
  if (static_cast<int64_t>(history.size()) > params.switching_bound) {
    return absl::InvalidArgumentError(absl::StrCat(
        "History has ", history.size(), " releases, budget K=",
        params.switching_bound));
  }

  WeightVector shadow = WeightVector::Uniform(d);
  SampledWeights released = SampledWeights::Uniform(d);
  std::vector<const OnlineExample*> cache;
  size_t next = 0;
  for (size_t i = 0; i < prefix.size(); ++i) {
    const OnlineExample& example = prefix[i];
    if (example.x.size() != static_cast<size_t>(d)) {
      return absl::InvalidArgumentError(
          absl::StrCat("Prefix example ", i, " has the wrong dimension"));
    }
    if (released.Predict(example.x) != example.y) cache.push_back(&example);
    const int64_t t = static_cast<int64_t>(i) + 1;
    if (next < history.size() && history[next].round == t) {
      if (!cache.empty()) {
        absl::StatusOr<WeightVector> stepped =
            MwUpdate(shadow, cache.front()->x, cache.front()->y, params.eta);
        if (!stepped.ok()) return stepped.status();
        shadow = *std::move(stepped);
      }
      released = history[next].released;
      cache.clear();
      ++next;
    }
  }
  return shadow;
}

}  // namespace dplearn
