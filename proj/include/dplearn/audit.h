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

// Empirical checks: likelihood-ratio tests between neighboring inputs,
// Monte Carlo checks of high-probability bounds, and exhaustive search
// oracles for tiny instances.

#ifndef DPLEARN_AUDIT_H_
#define DPLEARN_AUDIT_H_

#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/statusor.h"
#include "dplearn/decision_list.h"
#include "dplearn/random_source.h"

namespace dplearn {

enum class Verdict { kPass, kFail, kInconclusive };
std::string_view VerdictName(Verdict verdict);

struct Interval {
  double lo = 0;
  double hi = 0;
};

// Standard normal quantile and CDF.
double NormalQuantile(double p);
double NormalCdf(double z);

// Wilson score interval for a binomial proportion at normal quantile z.
Interval WilsonInterval(int64_t successes, int64_t trials, double z);

// Runs the mechanism once on input A (neighbor = false) or on its neighbor
// B (neighbor = true) and returns the coarsened output cell.
using MechanismRunner =
    std::function<std::string(bool neighbor, RandomSource& source)>;

struct RatioTestConfig {
  int64_t trials = 0;  // per input
  double epsilon = 1.0;
  double delta = 0.0;
  double confidence = 0.99;
  uint64_t seed = 0;
  int workers = 1;
};

struct CellEstimate {
  std::string cell;
  int64_t count_a = 0;
  int64_t count_b = 0;
  Interval ci_a;
  Interval ci_b;
};

struct RatioReport {
  Verdict verdict = Verdict::kInconclusive;
  // max over cells and both directions of (lower_A - delta) / upper_B, using
  // Bonferroni-corrected Wilson bounds. Compared against `bound`.
  double statistic = 0;
  // Same maximum using the point estimates (P_A - delta) / P_B.
  double point_ratio = 0;
  double bound = 0;  // e^epsilon
  // For the worst cell: [conservative ratio, optimistic ratio].
  Interval ci;
  std::string worst_cell;
  uint64_t seed = 0;
  int64_t trials = 0;
  int64_t required_trials = 0;
  double confidence = 0;
  double epsilon = 0;
  double delta = 0;
  std::vector<CellEstimate> cells;  // sorted by cell name
};

// Minimum trials per input for the test to have a chance of certifying a
// ratio of e^epsilon: ceil(4 z^2 / (1 - e^-epsilon)^2).
int64_t RequiredRatioTrials(double epsilon, double confidence);

// Estimates output-cell probabilities under A and B from independent
// seeded trials and checks P_A(cell) <= e^epsilon P_B(cell) + delta in both
// directions. Fails when even the conservative ratio exceeds e^epsilon;
// inconclusive when the trial count is below RequiredRatioTrials; passes
// otherwise. Trial i under A uses Split("ratio-a", i), under B
// Split("ratio-b", i), so results do not depend on the worker count.
absl::StatusOr<RatioReport> NeighborRatioTest(const MechanismRunner& runner,
                                              const RatioTestConfig& config);

// One seeded trial of a bound check; returns true when the bound was
// violated in this trial.
using BoundTrial =
    std::function<absl::StatusOr<bool>(int64_t trial, RandomSource& source)>;

struct BoundCheckConfig {
  std::string name;
  int64_t trials = 0;
  // The bound's stated failure probability p (0 for worst-case bounds).
  double failure_probability = 0;
  // One-sided confidence for the slack; z = NormalQuantile(confidence).
  double confidence = 0.99;
  uint64_t seed = 0;
  int workers = 1;
};

struct BoundReport {
  std::string name;
  Verdict verdict = Verdict::kInconclusive;
  int64_t violations = 0;
  double statistic = 0;  // violation frequency
  // Allowed frequency p + z sqrt(p (1 - p) / N).
  double bound = 0;
  Interval ci;  // Wilson interval of the violation frequency
  uint64_t seed = 0;
  int64_t trials = 0;
  double confidence = 0;
};

// Trial i draws from Split(config.name, i). The first trial error (by
// index) is returned as the overall status.
absl::StatusOr<BoundReport> BoundCheck(const BoundTrial& trial,
                                       const BoundCheckConfig& config);

struct ErmResult {
  DecisionList list;
  int64_t errors = 0;
  int64_t nodes_visited = 0;
};

// Number of lists of at most max_length distinct non-constant features
// with any term bits and default bit.
double ErmSearchSpace(int64_t num_features, int max_length);

// Exact empirical risk minimizer over decision lists of at most max_length
// distinct features of `family` (the constant feature is covered by the
// default bit). Depth-first in family order, bit 0 before 1, shorter
// prefixes before their extensions; the first list reaching the minimum
// wins. ResourceExhausted when the search space exceeds max_lists.
absl::StatusOr<ErmResult> BruteForceErm(const PacSample& sample,
                                        const FeatureFamily& family,
                                        int max_length,
                                        double max_lists = 1e7);

}  // namespace dplearn

#endif  // DPLEARN_AUDIT_H_
