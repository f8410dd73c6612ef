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

#include <cmath>
#include <vector>

#include "dplearn/random_source.h"
#include "dplearn/streams.h"
#include "gtest/gtest.h"
#include "test_util.h"

namespace dplearn {
namespace {

WeightVector Probs(std::vector<double> p) {
  return *WeightVector::FromProbabilities(p);
}

TEST(WeightVectorTest, UniformAndValidation) {
  const WeightVector u = WeightVector::Uniform(4);
  for (int i = 0; i < 4; ++i) EXPECT_DOUBLE_EQ(u[i], 0.25);
  EXPECT_FALSE(WeightVector::FromProbabilities(std::vector<double>{}).ok());
  EXPECT_FALSE(
      WeightVector::FromProbabilities(std::vector<double>{0.5, 0.6}).ok());
  EXPECT_FALSE(
      WeightVector::FromProbabilities(std::vector<double>{1.5, -0.5}).ok());
}

TEST(MwUpdateTest, ZeroEtaIsIdentity) {
  const WeightVector w = Probs({0.2, 0.3, 0.5});
  ASSERT_OK_AND_ASSIGN(WeightVector v,
                       MwUpdate(w, std::vector<int8_t>{1, -1, 1}, -1, 0.0));
  for (int i = 0; i < 3; ++i) EXPECT_EQ(v[i], w[i]);
}

TEST(MwUpdateTest, TwoCoordinateExample) {
  // Numerators (0.5 * 2, 0.5 / 2) = (1, 0.25), normalized to (0.8, 0.2).
  ASSERT_OK_AND_ASSIGN(WeightVector v,
                       MwUpdate(WeightVector::Uniform(2),
                                std::vector<int8_t>{1, -1}, 1, std::log(2.0)));
  EXPECT_NEAR(v[0], 0.8, 1e-15);
  EXPECT_NEAR(v[1], 0.2, 1e-15);
}

TEST(MwUpdateTest, AllOnesLeavesWeights) {
  const WeightVector w = Probs({0.1, 0.6, 0.3});
  for (int y : {-1, 1}) {
    ASSERT_OK_AND_ASSIGN(WeightVector v,
                         MwUpdate(w, std::vector<int8_t>{1, 1, 1}, y, 0.7));
    for (int i = 0; i < 3; ++i) EXPECT_NEAR(v[i], w[i], 1e-15);
  }
}

TEST(MwUpdateTest, DimensionMismatch) {
  EXPECT_CODE(MwUpdate(WeightVector::Uniform(3), std::vector<int8_t>{1, 1}, 1,
                       0.1),
              absl::StatusCode::kInvalidArgument);
}

TEST(MwUpdateTest, SimplexPreservedOverManyUpdates) {
  RandomSource s(1);
  WeightVector w = WeightVector::Uniform(50);
  std::vector<int8_t> x(50);
  for (int step = 0; step < 5000; ++step) {
    for (auto& v : x) v = s.UniformIndex(2) ? 1 : -1;
    ASSERT_OK_AND_ASSIGN(w, MwUpdate(w, x, s.UniformIndex(2) ? 1 : -1, 0.9));
    double total = 0;
    for (double p : w.probabilities()) {
      ASSERT_GE(p, 0.0);
      total += p;
    }
    ASSERT_NEAR(total, 1.0, 1e-9);
  }
}

TEST(MwUpdateTest, NoUnderflowInLogSpace) {
  // Coordinate 1 loses e^{-2} per step; after 1000 steps its probability
  // underflows but its log weight stays finite.
  WeightVector w = WeightVector::Uniform(2);
  for (int i = 0; i < 1000; ++i) {
    ASSERT_OK_AND_ASSIGN(w, MwUpdate(w, std::vector<int8_t>{1, -1}, 1, 1.0));
  }
  EXPECT_TRUE(std::isfinite(w.log_probabilities()[1]));
  EXPECT_NEAR(w.log_probabilities()[1], -2000.0, 1e-6);
  EXPECT_NEAR(w[0], 1.0, 1e-15);
}

TEST(PotentialTest, Values) {
  const WeightVector w = Probs({0.3, 0.7});
  ASSERT_OK_AND_ASSIGN(double same,
                       Potential(std::vector<double>{0.3, 0.7}, w));
  EXPECT_NEAR(same, 0.0, 1e-15);
  ASSERT_OK_AND_ASSIGN(double ln2, Potential(std::vector<double>{1, 0},
                                             WeightVector::Uniform(2)));
  EXPECT_NEAR(ln2, std::log(2.0), 1e-15);
  ASSERT_OK_AND_ASSIGN(double uni,
                       Potential(std::vector<double>(5, 0.2),
                                 WeightVector::Uniform(5)));
  EXPECT_NEAR(uni, 0.0, 1e-15);
  const WeightVector corner = Probs({1, 0});
  EXPECT_FALSE(Potential(std::vector<double>{0.5, 0.5}, corner).ok());
}

TEST(PotentialTest, BoundedByLogDAtUniform) {
  RandomSource s(2);
  for (int trial = 0; trial < 200; ++trial) {
    const int d = 2 + static_cast<int>(s.UniformIndex(30));
    std::vector<double> v(d);
    double total = 0;
    for (auto& x : v) total += (x = s.UniformOpen() * (s.UniformIndex(3) > 0));
    if (total == 0) continue;
    for (auto& x : v) x /= total;
    ASSERT_OK_AND_ASSIGN(double phi, Potential(v, WeightVector::Uniform(d)));
    EXPECT_GE(phi, -1e-12);
    EXPECT_LE(phi, std::log(d) + 1e-12);
  }
}

TEST(ConfidentWinnowTest, StepConditions) {
  const ConfidentWinnowParams params{.eta = 0.5, .c = 0.25, .rho = 0.4};
  const OnlineExample plus{{1, -1}, 1};
  auto step = [&](std::vector<double> w, int b) {
    ConfidentWinnow cw = *ConfidentWinnow::Create(Probs(std::move(w)), params);
    return *cw.Observe(plus, b);
  };
  // <w,x> = 0.9, c rho = 0.1: confident and correct.
  EXPECT_FALSE(step({0.95, 0.05}, 1).updated);
  // <w,x> = 0.05: inside the band, updates only when asked.
  EXPECT_FALSE(step({0.525, 0.475}, 0).updated);
  EXPECT_TRUE(step({0.525, 0.475}, 1).updated);
  // <w,x> = -0.9: a mistake always updates.
  EXPECT_TRUE(step({0.05, 0.95}, 0).updated);
  EXPECT_TRUE(step({0.05, 0.95}, 1).updated);
  EXPECT_EQ(step({0.05, 0.95}, 0).prediction, -1);
}

TEST(ConfidentWinnowTest, SignOfZeroIsPlus) {
  ConfidentWinnow cw = *ConfidentWinnow::Create(
      2, ConfidentWinnowParams{.eta = 0.1, .c = 0.0, .rho = 1.0});
  ASSERT_OK_AND_ASSIGN(ConfidentWinnow::Step st,
                       cw.Observe(OnlineExample{{1, -1}, 1}, 0));
  EXPECT_EQ(st.prediction, 1);
  EXPECT_FALSE(st.updated);
}

TEST(ConfidentWinnowTest, ParamValidation) {
  EXPECT_FALSE((ConfidentWinnowParams{.eta = 0.5, .c = 0.5}).Validate().ok());
  EXPECT_FALSE((ConfidentWinnowParams{.eta = 0.0}).Validate().ok());
  EXPECT_FALSE((ConfidentWinnowParams{.rho = 1.5}).Validate().ok());
}

TEST(ConfidentWinnowTest, EmptyStream) {
  ASSERT_OK_AND_ASSIGN(RunTranscript t,
                       RunConfidentWinnow(4, {}, {}, ConfidentWinnowParams{}));
  EXPECT_TRUE(t.rounds.empty());
  EXPECT_EQ(t.updates(), 0);
}

TEST(ConfidentWinnowTest, BasisTargetAdversarialBits) {
  // e1 target, d = 16, rho = 1, c = 0.25, eta = 0.5, b = 1 always:
  // bound ln 16 / (0.375 - 0.125) = 11.09.
  const double bound = std::log(16.0) / 0.25;
  const ConfidentWinnowParams params{.eta = 0.5, .c = 0.25, .rho = 1.0};
  EXPECT_NEAR(ConfidentWinnowUpdateBound(16, params), bound, 1e-12);
  RandomSource s(3);
  ASSERT_OK_AND_ASSIGN(MarginHalfspace target, CoordinateTarget(16, 0));
  ASSERT_OK_AND_ASSIGN(
      std::vector<OnlineExample> stream,
      GenerateOnlineStream(target, 10000, OnlineDistribution{}, s));
  const std::vector<uint8_t> bits(stream.size(), 1);
  ASSERT_OK_AND_ASSIGN(RunTranscript t,
                       RunConfidentWinnow(16, stream, bits, params));
  EXPECT_LE(t.updates(), 11);
  EXPECT_EQ(t.rounds.size(), stream.size());
}

TEST(ConfidentWinnowTest, RandomBitsRespectBoundAndPotentialDrop) {
  RandomSource s(4);
  for (int trial = 0; trial < 40; ++trial) {
    const int d = 8 << s.UniformIndex(3);
    const int subset = 2 * static_cast<int>(s.UniformIndex(3)) + 1;
    ASSERT_OK_AND_ASSIGN(MarginHalfspace target, MajorityTarget(d, subset));
    const double rho = target.claimed_margin;
    const ConfidentWinnowParams params{
        .eta = rho * (0.2 + 0.6 * s.UniformOpen()),
        .c = 0.45 * s.UniformOpen(),
        .rho = rho};
    ASSERT_OK_AND_ASSIGN(
        std::vector<OnlineExample> stream,
        GenerateOnlineStream(target, 1000, OnlineDistribution{}, s));
    std::vector<uint8_t> bits(stream.size());
    for (auto& b : bits) b = static_cast<uint8_t>(s.UniformIndex(2));
    const double drop = params.eta * params.eta / 2 -
                        (1 - params.c) * params.eta * params.rho;
    int violations = 0;
    auto observer = [&](const UpdateEvent& e) {
      const double before = *Potential(target.weights, e.before);
      const double after = *Potential(target.weights, e.after);
      if (after - before > drop + 1e-9) ++violations;
    };
    ASSERT_OK_AND_ASSIGN(
        RunTranscript t, RunConfidentWinnow(d, stream, bits, params, observer));
    EXPECT_LE(t.updates(), ConfidentWinnowUpdateBound(d, params));
    EXPECT_EQ(violations, 0);
  }
}

TEST(WinnowTest, UpdatesExactlyOnMistakes) {
  RandomSource s(5);
  ASSERT_OK_AND_ASSIGN(MarginHalfspace target, MajorityTarget(20, 3));
  ASSERT_OK_AND_ASSIGN(
      std::vector<OnlineExample> stream,
      GenerateOnlineStream(target, 2000, OnlineDistribution{}, s));
  ASSERT_OK_AND_ASSIGN(RunTranscript t,
                       RunWinnow(20, stream, 0.1, target.claimed_margin));
  for (const RoundRecord& r : t.rounds) EXPECT_EQ(r.mistake, r.update);
  EXPECT_EQ(t.mistakes(), t.updates());
  const ConfidentWinnowParams p{.eta = 0.1, .c = 0.0,
                                .rho = target.claimed_margin};
  EXPECT_LE(t.updates(), ConfidentWinnowUpdateBound(20, p));
}

TEST(WinnowTest, RejectsNonSignInputs) {
  const std::vector<OnlineExample> bad = {{{1, 0}, 1}};
  EXPECT_FALSE(RunWinnow(2, bad, 0.1, 1.0).ok());
}

}  // namespace
}  // namespace dplearn
