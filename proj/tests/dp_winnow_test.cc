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

#include <cmath>
#include <vector>

#include "dplearn/random_source.h"
#include "dplearn/streams.h"
#include "gtest/gtest.h"
#include "test_util.h"

namespace dplearn {
namespace {

DpWinnowParams SmallParams(int d, int64_t horizon, double threshold,
                           int64_t k_max) {
  return DpWinnowParams::Explicit(horizon, d, /*epsilon_hat=*/1.0,
                                  /*eta=*/0.3, threshold,
                                  /*sample_count=*/20, k_max, /*beta=*/0.1);
}

std::vector<OnlineExample> MajorityStream(int d, int64_t n, uint64_t seed) {
  RandomSource s(seed);
  const MarginHalfspace target = *MajorityTarget(d, 3);
  return *GenerateOnlineStream(target, n, OnlineDistribution{}, s);
}

TEST(SolveParamsTest, SatisfiesEveryDefiningEquation) {
  ASSERT_OK_AND_ASSIGN(DpWinnowParams p,
                       SolveParams(10000, 1024, 0.1, 1.0, 1e-6, 0.05));
  // Independent recomputation of each equation.
  const double m = std::ceil(2 * std::log(2 * 1e4 / 0.05) /
                             (0.49 * 0.49 * 0.01));
  EXPECT_EQ(p.sample_count, static_cast<int64_t>(m));
  const double k = std::ceil(std::log(1024.0) /
                             (0.51 * p.eta * 0.1 - p.eta * p.eta / 2));
  EXPECT_EQ(p.switching_bound, static_cast<int64_t>(k));
  const double eta =
      1.0 / (8 * std::sqrt(2 * m * k * std::log(4 * k / 1e-6)));
  EXPECT_NEAR(p.eta / eta, 1.0, 1e-12);
  const double eps_hat = 1.0 / (4 * std::sqrt(2 * k * std::log(2 / 1e-6)));
  EXPECT_NEAR(p.epsilon_hat / eps_hat, 1.0, 1e-12);
  EXPECT_NEAR(p.threshold / (8 * std::log(2 * 1e4 / 0.05) / eps_hat), 1.0,
              1e-12);
  EXPECT_LT(p.eta, p.rho / 2);
  const ParamResiduals r = CheckParamInvariants(p);
  EXPECT_LE(r.Max(), 1e-9);
  EXPECT_TRUE(r.eta_below_half_rho);
}

TEST(SolveParamsTest, NearHalfConfidenceMatchesClosedForm) {
  const double c = 0.5 - 1e-6;
  ASSERT_OK_AND_ASSIGN(DpWinnowParams p,
                       SolveParams(1000, 64, 0.5, 1.0, 1e-6, 0.1, c));
  const double closed = 2 * std::log(64.0) /
                        (p.eta * p.rho - p.eta * p.eta);
  // K is huge here; c sits 1e-6 away from 1/2.
  EXPECT_NEAR(static_cast<double>(p.switching_bound) / closed, 1.0, 1e-5);
}

TEST(SolveParamsTest, SmallerEpsilonGivesSmallerEtaLargerK) {
  double prev_eta = INFINITY;
  int64_t prev_k = 0;
  for (double eps : {4.0, 2.0, 1.0, 0.5, 0.25}) {
    ASSERT_OK_AND_ASSIGN(DpWinnowParams p,
                         SolveParams(2000, 64, 1.0, eps, 1e-6, 0.1));
    EXPECT_LT(p.eta, prev_eta);
    EXPECT_GT(p.switching_bound, prev_k);
    prev_eta = p.eta;
    prev_k = p.switching_bound;
  }
}

TEST(SolveParamsTest, Errors) {
  EXPECT_CODE(SolveParams(100, 4, 1.0, 1.0, 1e-6, 0.1, 0.5),
              absl::StatusCode::kInvalidArgument);
  EXPECT_CODE(SolveParams(100, 1, 1.0, 1.0, 1e-6, 0.1),
              absl::StatusCode::kInvalidArgument);
  EXPECT_CODE(SolveParams(0, 4, 1.0, 1.0, 1e-6, 0.1),
              absl::StatusCode::kInvalidArgument);
  EXPECT_CODE(SolveParams(100, 4, 1.0, 1.0, 0.0, 0.1),
              absl::StatusCode::kInvalidArgument);
  // An enormous budget pushes eta past the feasible range.
  EXPECT_CODE(SolveParams(100, 4, 1.0, 1e6, 1e-6, 0.1),
              absl::StatusCode::kFailedPrecondition);
}

TEST(MistakeBoundTest, Formula) {
  DpWinnowParams p = SmallParams(4, 100, 3.0, 7);
  p.epsilon_hat = 0.5;
  EXPECT_NEAR(DpWinnowMistakeBound(p),
              7 * 16 * std::log(2 * 1e4 / 0.1) / 0.5, 1e-9);
}

TEST(SampledWeightsTest, UniformAndCounts) {
  const SampledWeights u = SampledWeights::Uniform(3);
  EXPECT_EQ(u.denominator(), 3);
  EXPECT_EQ(u.SupportSize(), 3);
  ASSERT_OK_AND_ASSIGN(SampledWeights w,
                       SampledWeights::FromCounts({2, 0, 3}));
  EXPECT_EQ(w.denominator(), 5);
  EXPECT_EQ(w.SupportSize(), 2);
  EXPECT_EQ(w.ScaledDot(std::vector<int8_t>{1, 1, -1}), -1);
  EXPECT_EQ(w.Predict(std::vector<int8_t>{1, 1, -1}), -1);
  EXPECT_EQ(w.Predict(std::vector<int8_t>{-1, -1, 1}), 1);
  ASSERT_OK_AND_ASSIGN(SampledWeights tie, SampledWeights::FromCounts({1, 1}));
  EXPECT_EQ(tie.Predict(std::vector<int8_t>{1, -1}), 1);
  EXPECT_FALSE(SampledWeights::FromCounts({}).ok());
  EXPECT_FALSE(SampledWeights::FromCounts({0, 0}).ok());
  EXPECT_FALSE(SampledWeights::FromCounts({1, -1}).ok());
}

TEST(SampleApproxWeightsTest, DegenerateIsExact) {
  RandomSource s(1);
  ASSERT_OK_AND_ASSIGN(WeightVector e2, WeightVector::FromProbabilities(
                                            std::vector<double>{0, 0, 1, 0}));
  ASSERT_OK_AND_ASSIGN(SampledWeights w, SampleApproxWeights(e2, 37, s));
  EXPECT_EQ(w.denominator(), 37);
  EXPECT_EQ(w.counts()[2], 37);
}

TEST(SampleApproxWeightsTest, MultiplesOfOneOverM) {
  RandomSource s(2);
  const WeightVector w = WeightVector::Uniform(10);
  for (int m : {1, 7, 100}) {
    ASSERT_OK_AND_ASSIGN(SampledWeights approx, SampleApproxWeights(w, m, s));
    int64_t total = 0;
    for (int64_t c : approx.counts()) total += c;
    EXPECT_EQ(total, m);
    EXPECT_EQ(approx.denominator(), m);
    EXPECT_LE(approx.SupportSize(), m);
  }
  EXPECT_FALSE(SampleApproxWeights(w, 0, s).ok());
}

TEST(SampleApproxWeightsTest, MeanMatchesWeights) {
  RandomSource s(3);
  ASSERT_OK_AND_ASSIGN(WeightVector w, WeightVector::FromProbabilities(
                                           std::vector<double>{0.7, 0.2, 0.1}));
  std::vector<double> mean(3, 0);
  const int trials = 20000;
  for (int t = 0; t < trials; ++t) {
    ASSERT_OK_AND_ASSIGN(SampledWeights a, SampleApproxWeights(w, 10, s));
    const std::vector<double> p = a.Probabilities();
    for (int i = 0; i < 3; ++i) mean[i] += p[i] / trials;
  }
  EXPECT_NEAR(mean[0], 0.7, 0.005);
  EXPECT_NEAR(mean[1], 0.2, 0.005);
  EXPECT_NEAR(mean[2], 0.1, 0.005);
}

TEST(DpWinnowTest, ZeroNoiseUnitThresholdUpdatesOnFirstMistake) {
  const int d = 12;
  const std::vector<OnlineExample> stream = MajorityStream(d, 200, 5);
  const DpWinnowParams p = SmallParams(d, 200, 1.0, 1000);
  RandomSource s(9, /*zero_noise=*/true);
  ASSERT_OK_AND_ASSIGN(DpWinnow learner, DpWinnow::Create(p, s));
  int updates = 0;
  for (const OnlineExample& e : stream) {
    const WeightVector before = learner.shadow();
    const SampledWeights released_before = learner.released();
    ASSERT_OK_AND_ASSIGN(DpWinnow::RoundOutcome r, learner.Round(e, s));
    EXPECT_EQ(r.updated, r.mistake);
    if (r.updated) {
      ++updates;
      ASSERT_OK_AND_ASSIGN(WeightVector expect, MwUpdate(before, e.x, e.y, 0.3));
      for (int i = 0; i < d; ++i) {
        EXPECT_NEAR(learner.shadow()[i], expect[i], 1e-15);
      }
      EXPECT_TRUE(learner.cache().empty());
      EXPECT_EQ(learner.epoch_start(), learner.rounds_played() + 1);
    } else {
      EXPECT_EQ(learner.released(), released_before);
      EXPECT_TRUE(learner.cache().empty());
    }
  }
  EXPECT_GT(updates, 0);
  EXPECT_EQ(learner.updates(), updates);
}

TEST(DpWinnowTest, BudgetExhaustedFreezesLearner) {
  const int d = 12;
  const std::vector<OnlineExample> stream = MajorityStream(d, 300, 6);
  const DpWinnowParams p = SmallParams(d, 300, 1.0, 1);
  RandomSource s(10, /*zero_noise=*/true);
  ASSERT_OK_AND_ASSIGN(DpWinnowRun run, RunDpWinnow(stream, p, s));
  EXPECT_EQ(run.transcript.updates(), 1);
  EXPECT_EQ(run.history.size(), 1u);
  // After the budget is spent the second instance fires once and halts.
  int64_t last_epoch = 0;
  for (const RoundRecord& r : run.transcript.rounds) {
    EXPECT_LE(r.cumulative_updates, 1);
    last_epoch = r.epoch_id;
  }
  EXPECT_EQ(last_epoch, 1);
}

TEST(DpWinnowTest, AllCorrectStreamNeverUpdates) {
  // Labels given by the initial public vector itself.
  const int d = 6;
  RandomSource gen(7);
  const SampledWeights initial = SampledWeights::Uniform(d);
  std::vector<OnlineExample> stream;
  for (int t = 0; t < 100; ++t) {
    OnlineExample e;
    e.x.resize(d);
    for (auto& v : e.x) v = gen.UniformIndex(2) ? 1 : -1;
    e.y = initial.Predict(e.x);
    stream.push_back(e);
  }
  // Noise-free so an empty cache can never trip the threshold test.
  RandomSource s(8, /*zero_noise=*/true);
  ASSERT_OK_AND_ASSIGN(DpWinnowRun run,
                       RunDpWinnow(stream, SmallParams(d, 100, 5.0, 10), s));
  EXPECT_EQ(run.transcript.mistakes(), 0);
  EXPECT_EQ(run.transcript.updates(), 0);
  EXPECT_TRUE(run.history.empty());
}

TEST(DpWinnowTest, HorizonAndDimensionErrors) {
  RandomSource s(1);
  ASSERT_OK_AND_ASSIGN(DpWinnow learner,
                       DpWinnow::Create(SmallParams(2, 1, 3.0, 5), s));
  EXPECT_CODE(learner.Round(OnlineExample{{1, 1, 1}, 1}, s),
              absl::StatusCode::kInvalidArgument);
  EXPECT_OK(learner.Round(OnlineExample{{1, 1}, 1}, s));
  EXPECT_CODE(learner.Round(OnlineExample{{1, 1}, 1}, s),
              absl::StatusCode::kOutOfRange);
  const std::vector<OnlineExample> two(2, OnlineExample{{1, 1}, 1});
  EXPECT_CODE(RunDpWinnow(two, SmallParams(2, 1, 3.0, 5), s),
              absl::StatusCode::kInvalidArgument);
}

TEST(DpWinnowTest, SeededRunsAreReproducible) {
  const std::vector<OnlineExample> stream = MajorityStream(10, 300, 11);
  const DpWinnowParams p = SmallParams(10, 300, 3.0, 20);
  RandomSource a(42), b(42);
  ASSERT_OK_AND_ASSIGN(DpWinnowRun ra, RunDpWinnow(stream, p, a));
  ASSERT_OK_AND_ASSIGN(DpWinnowRun rb, RunDpWinnow(stream, p, b));
  ASSERT_EQ(ra.transcript.rounds.size(), rb.transcript.rounds.size());
  for (size_t i = 0; i < ra.transcript.rounds.size(); ++i) {
    EXPECT_EQ(ra.transcript.rounds[i].update, rb.transcript.rounds[i].update);
  }
}

TEST(DpWinnowTest, EpochStructureAndBudgetInvariants) {
  const std::vector<OnlineExample> stream = MajorityStream(16, 500, 12);
  const DpWinnowParams p = SmallParams(16, 500, 4.0, 6);
  RandomSource s(13);
  int64_t prev_epoch = 0;
  int64_t prev_k = 0;
  auto observer = [&](const DpWinnow& l) {
    EXPECT_LE(l.updates(), p.switching_bound);
    EXPECT_GE(l.epoch_id(), prev_epoch);
    EXPECT_LE(l.epoch_id() - prev_epoch, 1);
    EXPECT_EQ(l.epoch_id(), l.updates());
    if (l.updates() > prev_k) EXPECT_TRUE(l.cache().empty());
    prev_epoch = l.epoch_id();
    prev_k = l.updates();
    // Every cached example is a mistake of the current public vector.
    for (const OnlineExample& e : l.cache()) {
      EXPECT_NE(l.released().Predict(e.x), e.y);
    }
  };
  ASSERT_OK(RunDpWinnow(stream, p, s, observer));
}

TEST(RecomputeFromHistoryTest, EmptyHistoryIsUniform) {
  const DpWinnowParams p = SmallParams(3, 10, 3.0, 5);
  const std::vector<OnlineExample> prefix(4, OnlineExample{{1, -1, 1}, -1});
  ASSERT_OK_AND_ASSIGN(WeightVector w, RecomputeFromHistory({}, prefix, p));
  for (int i = 0; i < 3; ++i) EXPECT_DOUBLE_EQ(w[i], 1.0 / 3);
}

TEST(RecomputeFromHistoryTest, SingleUpdateIsOneStep) {
  const DpWinnowParams p = SmallParams(3, 10, 3.0, 5);
  // Uniform public vector predicts +1 on (1,-1,1); label -1 is a mistake.
  const OnlineExample e{{1, -1, 1}, -1};
  const std::vector<OnlineExample> prefix = {e, {{1, 1, 1}, 1}};
  ASSERT_OK_AND_ASSIGN(SampledWeights rel, SampledWeights::FromCounts(
                                               {0, 20, 0}));
  const std::vector<ReleaseEvent> history = {{2, rel}};
  ASSERT_OK_AND_ASSIGN(WeightVector w, RecomputeFromHistory(history, prefix, p));
  ASSERT_OK_AND_ASSIGN(WeightVector expect,
                       MwUpdate(WeightVector::Uniform(3), e.x, e.y, 0.3));
  for (int i = 0; i < 3; ++i) EXPECT_NEAR(w[i], expect[i], 1e-15);
}

TEST(RecomputeFromHistoryTest, RejectsInconsistentHistory) {
  const DpWinnowParams p = SmallParams(2, 10, 3.0, 1);
  const std::vector<OnlineExample> prefix(3, OnlineExample{{1, -1}, -1});
  const SampledWeights ok_rel = *SampledWeights::FromCounts({5, 15});
  const SampledWeights bad_rel = *SampledWeights::FromCounts({1, 1});
  const std::vector<ReleaseEvent> beyond = {{4, ok_rel}};
  EXPECT_CODE(RecomputeFromHistory(beyond, prefix, p),
              absl::StatusCode::kInvalidArgument);
  const std::vector<ReleaseEvent> wrong_m = {{1, bad_rel}};
  EXPECT_CODE(RecomputeFromHistory(wrong_m, prefix, p),
              absl::StatusCode::kInvalidArgument);
  const std::vector<ReleaseEvent> too_many = {{1, ok_rel}, {2, ok_rel}};
  EXPECT_CODE(RecomputeFromHistory(too_many, prefix, p),
              absl::StatusCode::kInvalidArgument);
  const std::vector<ReleaseEvent> unordered = {{2, ok_rel}, {2, ok_rel}};
  DpWinnowParams roomy = p;
  roomy.switching_bound = 5;
  EXPECT_CODE(RecomputeFromHistory(unordered, prefix, roomy),
              absl::StatusCode::kInvalidArgument);
}

TEST(RecomputeFromHistoryTest, MatchesLiveShadow) {
  const std::vector<OnlineExample> stream = MajorityStream(16, 400, 14);
  const DpWinnowParams p = SmallParams(16, 400, 3.0, 30);
  RandomSource s(15);
  int checked = 0;
  auto observer = [&](const DpWinnow& l) {
    const auto prefix =
        std::span<const OnlineExample>(stream).first(l.rounds_played());
    absl::StatusOr<WeightVector> w =
        RecomputeFromHistory(l.history(), prefix, p);
    ASSERT_TRUE(w.ok()) << w.status();
    for (int i = 0; i < 16; ++i) {
      ASSERT_NEAR((*w)[i], l.shadow()[i], 1e-9);
    }
    ++checked;
  };
  ASSERT_OK(RunDpWinnow(stream, p, s, observer));
  EXPECT_EQ(checked, 400);
}

}  // namespace
}  // namespace dplearn
