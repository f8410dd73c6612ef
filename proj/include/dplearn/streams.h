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

// Generators for realizable PAC samples and oblivious online streams with
// known targets. Every generated sample or stream is re-checked against its
// target before it is returned.

#ifndef DPLEARN_STREAMS_H_
#define DPLEARN_STREAMS_H_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "dplearn/decision_list.h"
#include "dplearn/random_source.h"
#include "dplearn/reductions.h"
#include "dplearn/winnow.h"

namespace dplearn {

// A list of r distinct features drawn uniformly from `family` (the constant
// feature excluded) with exactly `alternations` bit changes among the term
// bits. The first term bit, the positions of the changes and the default
// bit are uniform. r = 0 gives a constant list.
absl::StatusOr<DecisionList> RandomDecisionList(const FeatureFamily& family,
                                                int length, int alternations,
                                                RandomSource& source);

struct PacDistribution {
  enum class Kind { kUniform, kProduct, kCustom };
  Kind kind = Kind::kUniform;
  // kProduct: Pr[x_i = 1] per coordinate.
  std::vector<double> marginals;
  // kCustom: weight of each point of {0,1}^d, point index = sum x_i 2^i.
  std::vector<double> point_weights;

  static PacDistribution Uniform() { return {}; }
  static PacDistribution Product(std::vector<double> marginals);
  static PacDistribution Custom(std::vector<double> point_weights);

  absl::Status Validate(int dimension) const;
};

absl::StatusOr<PacSample> GeneratePacSample(const DecisionList& target,
                                            const PacDistribution& dist,
                                            int64_t n, RandomSource& source);

// InvalidArgument naming the first row whose label disagrees with target.
absl::Status VerifyRealizable(const DecisionList& target,
                              const PacSample& sample);

struct OnlineDistribution {
  enum class Kind { kUniform, kBoundaryHeavy };
  Kind kind = Kind::kUniform;
  // Boundary-heavy mode keeps a margin-feasible point with probability
  // exp(-kappa (|<v,x>| - rho) / rho), concentrating mass near the margin.
  double kappa = 4.0;
  // When set, the last coordinate is the constant +1 instead of random.
  bool bias_coordinate = false;
};

// T oblivious examples labeled by sgn<v, x>. Points are uniform over
// {-1,+1}^d (subject to the bias setting) and rejected unless
// |<v, x>| >= rho. FailedPrecondition when more than 99.9% of proposals are
// rejected.
absl::StatusOr<std::vector<OnlineExample>> GenerateOnlineStream(
    const MarginHalfspace& target, int64_t horizon,
    const OnlineDistribution& dist, RandomSource& source);

// InvalidArgument naming the first example with y <v,x> < rho.
absl::Status VerifyMarginStream(const MarginHalfspace& target,
                                std::span<const OnlineExample> stream);

// Majority over the first `subset_size` coordinates (odd): v = 1/s on the
// subset, so every +-1 point has margin at least 1/s.
absl::StatusOr<MarginHalfspace> MajorityTarget(int dimension, int subset_size);

// v = e_coordinate, margin 1.
absl::StatusOr<MarginHalfspace> CoordinateTarget(int dimension,
                                                 int coordinate = 0);

// Maps every example through EmbedPm, matching a DoubleNonneg target.
std::vector<OnlineExample> EmbedStream(std::span<const OnlineExample> stream);

// Online view of a PAC sample: bits become +-1 and a bias coordinate is
// appended, matching DecisionListToHalfspace.
std::vector<OnlineExample> PacToOnline(const PacSample& sample);

}  // namespace dplearn

#endif  // DPLEARN_STREAMS_H_
