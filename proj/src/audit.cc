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

#include "dplearn/audit.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <optional>

#include "absl/strings/str_cat.h"
#include "boost/math/distributions/normal.hpp"
#include "dplearn/parallel.h"

namespace dplearn {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Trials are grouped into this many chunks, each with its own tally, so
// that the merge is independent of scheduling.
constexpr int64_t kChunks = 64;

double SafeRatio(double numerator, double denominator) {
  if (numerator <= 0) return 0;
  if (denominator <= 0) return kInf;
  return numerator / denominator;
}

struct Tally {
  std::map<std::string, int64_t> a;
  std::map<std::string, int64_t> b;
};

}  // namespace

std::string_view VerdictName(Verdict verdict) {
  switch (verdict) {
    case Verdict::kPass:
      return "pass";
    case Verdict::kFail:
      return "fail";
    case Verdict::kInconclusive:
      return "inconclusive";
  }
  return "unknown";
}

double NormalQuantile(double p) {
  return boost::math::quantile(boost::math::normal(), p);
}

double NormalCdf(double z) {
  return boost::math::cdf(boost::math::normal(), z);
}

Interval WilsonInterval(int64_t successes, int64_t trials, double z) {
  if (trials <= 0) return {0, 1};
  const double n = static_cast<double>(trials);
  const double p = static_cast<double>(successes) / n;
  const double z2 = z * z;
  const double denom = 1 + z2 / n;
  const double center = (p + z2 / (2 * n)) / denom;
  const double half =
      z * std::sqrt(p * (1 - p) / n + z2 / (4 * n * n)) / denom;
  return {std::max(0.0, center - half), std::min(1.0, center + half)};
}

int64_t RequiredRatioTrials(double epsilon, double confidence) {
  const double z = NormalQuantile(1 - (1 - confidence) / 2);
  const double gap = 1 - std::exp(-epsilon);
  return static_cast<int64_t>(std::ceil(4 * z * z / (gap * gap)));
}

absl::StatusOr<RatioReport> NeighborRatioTest(const MechanismRunner& runner,
                                              const RatioTestConfig& config) {
  if (config.trials < 1) {
    return absl::InvalidArgumentError("Ratio test needs at least one trial");
  }
  if (!(config.epsilon >= 0) || !(config.delta >= 0 && config.delta < 1) ||
      !(config.confidence > 0 && config.confidence < 1)) {
    return absl::InvalidArgumentError(absl::StrCat(
        "Invalid ratio test settings: epsilon=", config.epsilon,
        " delta=", config.delta, " confidence=", config.confidence));
  }
  const RandomSource root(config.seed);
  const int64_t chunks = std::min(kChunks, config.trials);
  std::vector<Tally> tallies(chunks);
  ParallelFor(chunks, config.workers, [&](int64_t c) {
    const int64_t begin = config.trials * c / chunks;
    const int64_t end = config.trials * (c + 1) / chunks;
    Tally& tally = tallies[c];
    for (int64_t i = begin; i < end; ++i) {
      RandomSource sa = root.Split("ratio-a", i);
      ++tally.a[runner(false, sa)];
      RandomSource sb = root.Split("ratio-b", i);
      ++tally.b[runner(true, sb)];
    }
  });
  std::map<std::string, std::pair<int64_t, int64_t>> merged;
  for (const Tally& t : tallies) {
    for (const auto& [cell, n] : t.a) merged[cell].first += n;
    for (const auto& [cell, n] : t.b) merged[cell].second += n;
  }

  RatioReport report;
  report.bound = std::exp(config.epsilon);
  report.seed = config.seed;
  report.trials = config.trials;
  report.confidence = config.confidence;
  report.epsilon = config.epsilon;
  report.delta = config.delta;
  report.required_trials =
      RequiredRatioTrials(config.epsilon, config.confidence);

  // Two intervals per cell; split the error budget across all of them.
  const double per_interval =
      (1 - config.confidence) / (2.0 * static_cast<double>(merged.size()));
  const double z = NormalQuantile(1 - per_interval / 2);
  const double n = static_cast<double>(config.trials);
  const double delta = config.delta;
  report.statistic = 0;
  report.point_ratio = 0;
  report.ci = {0, 0};
  for (const auto& [cell, counts] : merged) {
    CellEstimate e;
    e.cell = cell;
    e.count_a = counts.first;
    e.count_b = counts.second;
    e.ci_a = WilsonInterval(e.count_a, config.trials, z);
    e.ci_b = WilsonInterval(e.count_b, config.trials, z);
    const double pa = static_cast<double>(e.count_a) / n;
    const double pb = static_cast<double>(e.count_b) / n;
    struct Direction {
      double conservative, point, optimistic;
    };
    const Direction directions[] = {
        {SafeRatio(e.ci_a.lo - delta, e.ci_b.hi), SafeRatio(pa - delta, pb),
         SafeRatio(e.ci_a.hi - delta, e.ci_b.lo)},
        {SafeRatio(e.ci_b.lo - delta, e.ci_a.hi), SafeRatio(pb - delta, pa),
         SafeRatio(e.ci_b.hi - delta, e.ci_a.lo)},
    };
    for (const Direction& d : directions) {
      report.point_ratio = std::max(report.point_ratio, d.point);
      if (report.worst_cell.empty() || d.conservative > report.statistic) {
        report.statistic = d.conservative;
        report.ci = {d.conservative, d.optimistic};
        report.worst_cell = cell;
      }
    }
    report.cells.push_back(std::move(e));
  }

  if (report.statistic > report.bound) {
    report.verdict = Verdict::kFail;
  } else if (config.trials < report.required_trials) {
    report.verdict = Verdict::kInconclusive;
  } else {
    report.verdict = Verdict::kPass;
  }
  return report;
}

absl::StatusOr<BoundReport> BoundCheck(const BoundTrial& trial,
                                       const BoundCheckConfig& config) {
  if (config.trials < 1) {
    return absl::InvalidArgumentError("Bound check needs at least one trial");
  }
  const double p = config.failure_probability;
  if (!(p >= 0 && p <= 1) ||
      !(config.confidence > 0 && config.confidence < 1)) {
    return absl::InvalidArgumentError(absl::StrCat(
        "Invalid bound check settings: p=", p,
        " confidence=", config.confidence));
  }
  const RandomSource root(config.seed);
  std::vector<uint8_t> violated(config.trials, 0);
  std::mutex error_mu;
  int64_t error_index = config.trials;
  absl::Status first_error;
  ParallelFor(config.trials, config.workers, [&](int64_t i) {
    RandomSource source = root.Split(config.name, i);
    absl::StatusOr<bool> v = trial(i, source);
    if (!v.ok()) {
      std::lock_guard<std::mutex> lock(error_mu);
      if (i < error_index) {
        error_index = i;
        first_error = v.status();
      }
      return;
    }
    violated[i] = *v ? 1 : 0;
  });
  if (!first_error.ok()) {
    return absl::Status(first_error.code(),
                        absl::StrCat(config.name, " trial ", error_index,
                                     ": ", first_error.message()));
  }

  BoundReport report;
  report.name = config.name;
  report.seed = config.seed;
  report.trials = config.trials;
  report.confidence = config.confidence;
  for (uint8_t v : violated) report.violations += v;
  const double n = static_cast<double>(config.trials);
  const double z = NormalQuantile(config.confidence);
  report.statistic = static_cast<double>(report.violations) / n;
  report.bound = p + z * std::sqrt(p * (1 - p) / n);
  report.ci = WilsonInterval(report.violations, config.trials, z);
  report.verdict =
      report.statistic <= report.bound ? Verdict::kPass : Verdict::kFail;
  return report;
}

double ErmSearchSpace(int64_t num_features, int max_length) {
  // Sum over L of (n)_L 2^L, times 2 for the default bit.
  double total = 0;
  double term = 1;
  for (int len = 0; len <= max_length && len <= num_features; ++len) {
    total += term;
    term *= static_cast<double>(num_features - len) * 2.0;
  }
  return 2.0 * total;
}

namespace {

class ErmSearch {
 public:
  ErmSearch(const PacSample& sample, std::vector<const Feature*> features,
            int max_length)
      : sample_(sample),
        features_(std::move(features)),
        max_length_(max_length),
        used_(features_.size(), false) {}

  void Run() {
    std::vector<int32_t> all(sample_.size());
    for (size_t i = 0; i < all.size(); ++i) all[i] = static_cast<int32_t>(i);
    Visit(all, 0);
  }

  int64_t best_errors() const { return best_errors_; }
  const std::vector<Term>& best_terms() const { return best_terms_; }
  int best_default() const { return best_default_; }
  int64_t nodes() const { return nodes_; }

 private:
  void Visit(const std::vector<int32_t>& remaining, int64_t committed) {
    ++nodes_;
    int64_t ones = 0;
    for (int32_t i : remaining) ones += sample_.examples[i].label;
    const int64_t zeros = static_cast<int64_t>(remaining.size()) - ones;
    for (int b = 0; b <= 1; ++b) {
      const int64_t errors = committed + (b == 0 ? ones : zeros);
      if (errors < best_errors_) {
        best_errors_ = errors;
        best_terms_ = prefix_;
        best_default_ = b;
      }
    }
    if (static_cast<int>(prefix_.size()) >= max_length_) return;
    if (committed >= best_errors_) return;
    std::vector<int32_t> rest;
    for (size_t f = 0; f < features_.size(); ++f) {
      if (used_[f]) continue;
      int64_t covered_ones = 0;
      int64_t covered = 0;
      rest.clear();
      for (int32_t i : remaining) {
        const PacExample& e = sample_.examples[i];
        if (features_[f]->Evaluate(e.x)) {
          ++covered;
          covered_ones += e.label;
        } else {
          rest.push_back(i);
        }
      }
      used_[f] = true;
      for (int b = 0; b <= 1; ++b) {
        const int64_t wrong =
            b == 0 ? covered_ones : covered - covered_ones;
        if (committed + wrong >= best_errors_) continue;
        prefix_.push_back(Term{*features_[f], b});
        Visit(rest, committed + wrong);
        prefix_.pop_back();
      }
      used_[f] = false;
    }
  }

  const PacSample& sample_;
  std::vector<const Feature*> features_;
  int max_length_;
  std::vector<bool> used_;
  std::vector<Term> prefix_;
  int64_t best_errors_ = std::numeric_limits<int64_t>::max();
  std::vector<Term> best_terms_;
  int best_default_ = 0;
  int64_t nodes_ = 0;
};

}  // namespace

absl::StatusOr<ErmResult> BruteForceErm(const PacSample& sample,
                                        const FeatureFamily& family,
                                        int max_length, double max_lists) {
  if (max_length < 0) {
    return absl::InvalidArgumentError("max_length must be >= 0");
  }
  if (sample.dimension != family.dimension()) {
    return absl::InvalidArgumentError(absl::StrCat(
        "Sample dimension ", sample.dimension, " != family dimension ",
        family.dimension()));
  }
  std::vector<const Feature*> features;
  for (const Feature& f : family.features()) {
    if (f.kind() != FeatureKind::kConstantTrue) features.push_back(&f);
  }
  const double space =
      ErmSearchSpace(static_cast<int64_t>(features.size()), max_length);
  if (space > max_lists) {
    return absl::ResourceExhaustedError(absl::StrCat(
        "Exhaustive search over ", space, " lists exceeds the limit of ",
        max_lists, "; reduce the family or max_length"));
  }
  ErmSearch search(sample, std::move(features), max_length);
  search.Run();
  absl::StatusOr<DecisionList> list = DecisionList::Create(
      family.dimension(), search.best_terms(), search.best_default());
  if (!list.ok()) return list.status();
  return ErmResult{*std::move(list), search.best_errors(), search.nodes()};
}

}  // namespace dplearn
