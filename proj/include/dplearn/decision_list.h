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

// Decision lists over Boolean feature families, the greedy consistent
// learner, and its private counterpart built on the exponential mechanism.
//
// Conventions: feature vectors are in {0,1}^d and labels in {0,1}.

#ifndef DPLEARN_DECISION_LIST_H_
#define DPLEARN_DECISION_LIST_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "dplearn/random_source.h"

namespace dplearn {

inline constexpr size_t kDefaultFeatureCap = 1'000'000;

enum class FeatureKind {
  kLiteral,
  kNegatedLiteral,
  kConjunction,
  kConstantTrue,
};

struct SignedLiteral {
  int index;
  bool negated;

  bool operator==(const SignedLiteral&) const = default;
};

// A Boolean predicate on {0,1}^d. Identity (operator==) is structural; the
// id is the feature's position within the family it was drawn from, or -1.
class Feature {
 public:
  static Feature Literal(int index);
  static Feature NegatedLiteral(int index);
  // Conjunction of signed literals; the empty conjunction is always true.
  static Feature Conjunction(std::vector<SignedLiteral> literals);
  static Feature ConstantTrue();

  FeatureKind kind() const { return kind_; }
  int id() const { return id_; }
  Feature WithId(int id) const;
  std::span<const SignedLiteral> literals() const { return literals_; }

  // Largest variable index referenced, or -1.
  int MaxIndex() const;

  // x must have at least MaxIndex() + 1 entries.
  bool Evaluate(std::span<const uint8_t> x) const {
    for (const SignedLiteral& l : literals_) {
      if ((x[l.index] != 0) == l.negated) return false;
    }
    return true;
  }

  // "x3", "!x3", "x1&!x4", "T", "()" for the empty conjunction.
  std::string ToString() const;
  static absl::StatusOr<Feature> Parse(std::string_view text);

  bool operator==(const Feature& other) const {
    return kind_ == other.kind_ && literals_ == other.literals_;
  }

 private:
  Feature(FeatureKind kind, std::vector<SignedLiteral> literals)
      : kind_(kind), literals_(std::move(literals)) {}

  FeatureKind kind_;
  std::vector<SignedLiteral> literals_;
  int id_ = -1;
};

// Ordered, deterministic feature family; feature ids are 0..size()-1.
class FeatureFamily {
 public:
  // x_0..x_{d-1}, then (optionally) !x_0..!x_{d-1}.
  static absl::StatusOr<FeatureFamily> Literals(int dimension,
                                                bool with_negations);

  // All conjunctions of at most k literals over d variables, ordered by
  // width, then variable subset (lexicographic), then sign pattern. Refuses
  // families larger than `cap`.
  static absl::StatusOr<FeatureFamily> Conjunctions(
      int dimension, int k, size_t cap = kDefaultFeatureCap);

  static absl::StatusOr<FeatureFamily> FromFeatures(
      int dimension, std::vector<Feature> features, std::string descriptor);

  // sum_{j<=k} 2^j C(d, j), in floating point so oversize families can be
  // rejected before enumeration.
  static double ConjunctionCount(int dimension, int k);

  int dimension() const { return dimension_; }
  size_t size() const { return features_.size(); }
  const Feature& operator[](size_t i) const { return features_[i]; }
  std::span<const Feature> features() const { return features_; }
  const std::string& descriptor() const { return descriptor_; }

 private:
  FeatureFamily(int dimension, std::vector<Feature> features,
                std::string descriptor)
      : dimension_(dimension),
        features_(std::move(features)),
        descriptor_(std::move(descriptor)) {}

  int dimension_;
  std::vector<Feature> features_;
  std::string descriptor_;
};

struct Term {
  Feature feature;
  int bit;
};

// "if f_1 then b_1, else if f_2 then b_2, ..., else default_bit".
class DecisionList {
 public:
  static absl::StatusOr<DecisionList> Create(int dimension,
                                             std::vector<Term> terms,
                                             int default_bit);

  absl::StatusOr<int> Evaluate(std::span<const uint8_t> x) const;
  // Dimension is the caller's responsibility.
  int EvaluateUnchecked(std::span<const uint8_t> x) const;

  int dimension() const { return dimension_; }
  std::span<const Term> terms() const { return terms_; }
  int default_bit() const { return default_bit_; }

  // Number of bit changes along b_1, ..., b_r (the default is not counted).
  int TermAlternations() const;
  // True when every term is a plain (non-negated) literal.
  bool IsMonotone() const;

  std::string ToString() const;

 private:
  DecisionList(int dimension, std::vector<Term> terms, int default_bit)
      : dimension_(dimension),
        terms_(std::move(terms)),
        default_bit_(default_bit) {}

  int dimension_;
  std::vector<Term> terms_;
  int default_bit_;
};

struct PacExample {
  std::vector<uint8_t> x;
  int label;
};

struct PacSample {
  int dimension = 0;
  std::vector<PacExample> examples;

  static absl::StatusOr<PacSample> Create(int dimension,
                                          std::vector<PacExample> examples);
  size_t size() const { return examples.size(); }
};

// -#{examples in `examples` with label 1-b on which f is true}.
int64_t Quality(std::span<const PacExample> examples, const Feature& f,
                int b);

// Number of examples the list mislabels.
absl::StatusOr<int64_t> EmpiricalError(const DecisionList& h,
                                       const PacSample& sample);

// Greedy consistent learner: repeatedly takes the first (feature, bit), in
// (id, bit) order over the family plus the constant-true feature, that is
// consistent with and covers part of the unclassified sample.
// FailedPrecondition when the sample is not realizable over the family.
absl::StatusOr<DecisionList> RivestGreedy(const PacSample& sample,
                                          const FeatureFamily& family);

struct CoverRound {
  Feature feature;
  int bit;
  int64_t quality;
  // Best quality available among this round's candidates.
  int64_t best_quality;
  size_t remaining_before;
  size_t remaining_after;
  size_t candidate_features;
};

struct GreedyCoverResult {
  // Terms selected before the constant-true feature, with its bit as the
  // default. Terms after it can never fire and are dropped.
  DecisionList list;
  std::vector<CoverRound> rounds;
};

// Private greedy cover: |family| + 1 rounds, each choosing (feature, bit)
// with the exponential mechanism on Quality at `epsilon_per_round`, then
// discarding covered examples and the used feature. Rounds with nothing
// left to cover still select (uniformly).
absl::StatusOr<GreedyCoverResult> DpGreedyCover(const PacSample& sample,
                                                const FeatureFamily& family,
                                                double epsilon_per_round,
                                                RandomSource& source);

// Empirical-error bound (4M/eps) ln(sqrt(2/beta) M) holding with
// probability at least 1 - beta on realizable samples.
double GreedyCoverErrorBound(int64_t num_features, double epsilon,
                             double beta);

// Per-round budget eps / (2 (ln(1/delta) + 3/2)) that makes the whole cover
// (eps, delta)-DP.
absl::StatusOr<double> EpsilonPerRoundFor(double epsilon_total, double delta);

// Sample size sufficient for (alpha, beta)-PAC learning with (eps, delta)-DP:
// ceil(max((64/a)(vc ln(64/a) + ln(16/b)),
//          8 M ln(2M/sqrt(b)) (2 ln(1/delta) + 3/2) / (a eps))).
absl::StatusOr<int64_t> PacSampleBound(int64_t num_features, double alpha,
                                       double beta, double epsilon,
                                       double delta, double vc_dimension);

}  // namespace dplearn

#endif  // DPLEARN_DECISION_LIST_H_
