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

#include "dplearn/experiments.h"

#include <memory>
#include <utility>

#include "dplearn/mechanisms.h"

namespace dplearn {

std::string UpdatePatternCell(const RunTranscript& transcript) {
  std::string cell(transcript.rounds.size(), '0');
  for (size_t i = 0; i < transcript.rounds.size(); ++i) {
    if (transcript.rounds[i].update) cell[i] = '1';
  }
  return cell;
}

MechanismRunner EmSelectNeighborRunner(std::vector<double> scores_a,
                                       std::vector<double> scores_b,
                                       double epsilon, bool zero_noise) {
  auto a = std::make_shared<const std::vector<double>>(std::move(scores_a));
  auto b = std::make_shared<const std::vector<double>>(std::move(scores_b));
  return [a, b, epsilon, zero_noise](bool neighbor, RandomSource& source) {
    source.set_zero_noise(zero_noise);
    absl::StatusOr<size_t> pick =
        EmSelect(neighbor ? *b : *a, epsilon, source);
    return pick.ok() ? std::to_string(*pick) : std::string("error");
  };
}

DpWinnowAuditCase SmallDpWinnowAuditCase() {
  DpWinnowAuditCase c;
  c.params = DpWinnowParams::Explicit(
      /*horizon=*/20, /*dimension=*/2, /*epsilon_hat=*/1.0, /*eta=*/0.05,
      /*threshold=*/3.0, /*sample_count=*/4, /*switching_bound=*/2,
      /*beta=*/0.1);
  c.params.epsilon = DpWinnowPatternEpsilon(c.params);
  c.params.delta = 0;
  // Under the uniform starting vector (-1,+1) is predicted +1, so labeling
  // it -1 gives a mistake; (+1,-1) labeled +1 does not.
  const OnlineExample mistake{{-1, 1}, -1};
  const OnlineExample correct{{1, -1}, 1};
  c.stream_a.push_back(OnlineExample{{1, 1}, -1});
  c.stream_b.push_back(OnlineExample{{1, 1}, 1});
  for (int t = 1; t < 20; ++t) {
    const OnlineExample& e = t % 2 == 1 ? mistake : correct;
    c.stream_a.push_back(e);
    c.stream_b.push_back(e);
  }
  return c;
}

double DpWinnowPatternEpsilon(const DpWinnowParams& params) {
  return params.epsilon_hat + 4.0 * static_cast<double>(params.sample_count) *
                                  params.eta *
                                  static_cast<double>(params.switching_bound);
}

MechanismRunner DpWinnowNeighborRunner(DpWinnowAuditCase audit_case,
                                       bool zero_noise) {
  auto c = std::make_shared<const DpWinnowAuditCase>(std::move(audit_case));
  return [c, zero_noise](bool neighbor, RandomSource& source) {
    source.set_zero_noise(zero_noise);
    absl::StatusOr<DpWinnowRun> run = RunDpWinnow(
        neighbor ? c->stream_b : c->stream_a, c->params, source);
    return run.ok() ? UpdatePatternCell(run->transcript)
                    : std::string("error");
  };
}

absl::StatusOr<bool> SvtRampViolation(double epsilon_hat, double threshold,
                                      int64_t horizon, double beta,
                                      RandomSource& source) {
  absl::StatusOr<AboveThreshold> svt =
      AboveThreshold::Create(epsilon_hat, threshold, beta, source);
  if (!svt.ok()) return svt.status();
  const double alpha =
      AboveThreshold::AccuracyAlpha(epsilon_hat, horizon, beta);
  const double lo = threshold - 2 * alpha;
  const double step =
      horizon > 1 ? 4 * alpha / static_cast<double>(horizon - 1) : 0;
  for (int64_t t = 0; t < horizon; ++t) {
    const double q = lo + step * static_cast<double>(t);
    absl::StatusOr<bool> fired = svt->Test(q, source);
    if (!fired.ok()) return fired.status();
    if (*fired) return q < threshold - alpha;
    if (q >= threshold + alpha) return true;
  }
  return false;
}

}  // namespace dplearn
