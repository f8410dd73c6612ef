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

#include "dplearn/random_source.h"

#include <cmath>
#include <vector>

#include "gtest/gtest.h"
#include "test_util.h"

namespace dplearn {
namespace {

TEST(RandomSourceTest, SameSeedSameStream) {
  RandomSource a(42), b(42);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(a.NextU64(), b.NextU64());
}

TEST(RandomSourceTest, SplitIsDeterministicAndDoesNotAdvance) {
  RandomSource root(7);
  RandomSource c1 = root.Split("trial", 3);
  RandomSource probe(7);
  EXPECT_EQ(root.NextU64(), probe.NextU64());
  RandomSource c2 = RandomSource(7).Split("trial", 3);
  EXPECT_EQ(c1.NextU64(), c2.NextU64());
  EXPECT_NE(root.Split("trial", 4).NextU64(), root.Split("trial", 3).NextU64());
  EXPECT_NE(root.Split("other", 3).NextU64(),
            root.Split("trial", 3).NextU64());
}

TEST(RandomSourceTest, SplitInheritsZeroNoise) {
  RandomSource root(1, /*zero_noise=*/true);
  EXPECT_TRUE(root.Split("x").zero_noise());
}

TEST(RandomSourceTest, UniformOpenStaysInside) {
  RandomSource s(3);
  for (int i = 0; i < 100000; ++i) {
    const double u = s.UniformOpen();
    ASSERT_GT(u, 0.0);
    ASSERT_LT(u, 1.0);
  }
}

TEST(RandomSourceTest, UniformIndexCoversRange) {
  RandomSource s(5);
  std::vector<int> hits(7, 0);
  for (int i = 0; i < 70000; ++i) ++hits[s.UniformIndex(7)];
  for (int h : hits) EXPECT_NEAR(h, 10000, 500);
}

TEST(LaplaceTest, RejectsBadScale) {
  RandomSource s(1);
  EXPECT_CODE(Laplace(s, 0.0), absl::StatusCode::kInvalidArgument);
  EXPECT_CODE(Laplace(s, -1.0), absl::StatusCode::kInvalidArgument);
  EXPECT_CODE(Laplace(s, NAN), absl::StatusCode::kInvalidArgument);
}

TEST(LaplaceTest, ZeroNoiseReturnsZero) {
  RandomSource s(1, /*zero_noise=*/true);
  for (int i = 0; i < 10; ++i) {
    ASSERT_OK_AND_ASSIGN(double v, Laplace(s, 3.0));
    EXPECT_EQ(v, 0.0);
  }
}

TEST(LaplaceTest, MomentsAndTail) {
  // Lap(b): mean 0, variance 2 b^2, Pr[|X| > t] = exp(-t / b).
  RandomSource s(11);
  const double b = 2.0;
  const int n = 400000;
  double sum = 0, sum2 = 0;
  int beyond = 0;
  for (int i = 0; i < n; ++i) {
    ASSERT_OK_AND_ASSIGN(double v, Laplace(s, b));
    sum += v;
    sum2 += v * v;
    if (std::abs(v) > 2 * b) ++beyond;
  }
  const double mean = sum / n;
  const double var = sum2 / n - mean * mean;
  EXPECT_NEAR(mean, 0.0, 0.03);
  EXPECT_NEAR(var, 8.0, 0.2);
  EXPECT_NEAR(static_cast<double>(beyond) / n, std::exp(-2.0), 0.003);
}

TEST(CategoricalTest, Errors) {
  RandomSource s(1);
  EXPECT_CODE(Categorical(s, std::vector<double>{}),
              absl::StatusCode::kInvalidArgument);
  EXPECT_CODE(Categorical(s, std::vector<double>{0.0, 0.0}),
              absl::StatusCode::kInvalidArgument);
  EXPECT_CODE(Categorical(s, std::vector<double>{1.0, -0.5}),
              absl::StatusCode::kInvalidArgument);
}

TEST(CategoricalTest, FrequenciesMatchWeights) {
  RandomSource s(9);
  const std::vector<double> w = {1, 0, 3, 6};
  ASSERT_OK_AND_ASSIGN(CategoricalSampler sampler,
                       CategoricalSampler::Create(w));
  std::vector<int> hits(4, 0);
  const int n = 200000;
  for (int i = 0; i < n; ++i) ++hits[sampler.Draw(s)];
  EXPECT_EQ(hits[1], 0);
  EXPECT_NEAR(hits[0] / double(n), 0.1, 0.004);
  EXPECT_NEAR(hits[2] / double(n), 0.3, 0.004);
  EXPECT_NEAR(hits[3] / double(n), 0.6, 0.004);
}

TEST(CategoricalTest, DegenerateWeightAlwaysDrawn) {
  RandomSource s(2);
  for (int i = 0; i < 1000; ++i) {
    ASSERT_OK_AND_ASSIGN(size_t j,
                         Categorical(s, std::vector<double>{0, 0, 1, 0}));
    ASSERT_EQ(j, 2u);
  }
}

}  // namespace
}  // namespace dplearn
