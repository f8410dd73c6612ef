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

// Canned experiments shared by the CLI audit suites and the acceptance
// checks: neighbor runners for ratio tests and single-trial bound checks.

#ifndef DPLEARN_EXPERIMENTS_H_
#define DPLEARN_EXPERIMENTS_H_

#include <cstdint>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "dplearn/audit.h"
#include "dplearn/dp_winnow.h"
#include "dplearn/random_source.h"
#include "dplearn/transcript.h"
#include "dplearn/winnow.h"

namespace dplearn {

// '1' for every round that updated, '0' otherwise.
std::string UpdatePatternCell(const RunTranscript& transcript);

// Exponential mechanism on `scores_a` (input A) or `scores_b` (its
// neighbor); the cell is the selected index. With zero_noise the mechanism
// degenerates to argmax, which is not private.
MechanismRunner EmSelectNeighborRunner(std::vector<double> scores_a,
                                       std::vector<double> scores_b,
                                       double epsilon, bool zero_noise);

// A pair of neighboring streams for DP-Winnow at d = 2, T = 20 with
// hand-picked parameters small enough for updates to happen.
struct DpWinnowAuditCase {
  DpWinnowParams params;
  std::vector<OnlineExample> stream_a;
  std::vector<OnlineExample> stream_b;
};

// Streams differ only in the label of round 1. Round 1 is a mistake under
// A and not under B, and later mistakes pull the shadow vector in a
// different direction from A's first cached mistake.
DpWinnowAuditCase SmallDpWinnowAuditCase();

// Privacy budget for the update pattern when the neighbors differ in one
// round: that round's threshold instance contributes epsilon_hat, and every
// released vector is an m-sample from a shadow vector whose log-ratio to
// its neighbor is at most 4 eta per coordinate. Total
// epsilon_hat + 4 m eta K, with delta = 0.
double DpWinnowPatternEpsilon(const DpWinnowParams& params);

// Runs DP-Winnow on A or B and returns the update pattern. With zero_noise
// the threshold and query noise vanish and the pattern becomes a
// deterministic function of the input.
MechanismRunner DpWinnowNeighborRunner(DpWinnowAuditCase audit_case,
                                       bool zero_noise);

// One AboveThreshold instance fed a ramp of `horizon` queries from
// L - 2 alpha to L + 2 alpha, alpha = AccuracyAlpha(epsilon_hat, horizon,
// beta). Violated when it halts on a query below L - alpha, or passes a
// query at or above L + alpha without halting.
absl::StatusOr<bool> SvtRampViolation(double epsilon_hat, double threshold,
                                      int64_t horizon, double beta,
                                      RandomSource& source);

}  // namespace dplearn

#endif  // DPLEARN_EXPERIMENTS_H_
