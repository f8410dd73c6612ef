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

#include "dplearn/decision_list.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <unordered_set>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_join.h"
#include "absl/strings/str_split.h"
#include "dplearn/mechanisms.h"

namespace dplearn {
namespace {

std::string LiteralString(const SignedLiteral& l) {
  return absl::StrCat(l.negated ? "!" : "", "x", l.index);
}

absl::StatusOr<SignedLiteral> ParseLiteral(std::string_view text) {
  SignedLiteral l{0, false};
  if (!text.empty() && text.front() == '!') {
    l.negated = true;
    text.remove_prefix(1);
  }
  if (text.size() < 2 || text.front() != 'x') {
    return absl::InvalidArgumentError(
        absl::StrCat("Malformed literal '", std::string(text), "'"));
  }
  text.remove_prefix(1);
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(),
                                   l.index);
  if (ec != std::errc() || ptr != text.data() + text.size() || l.index < 0) {
    return absl::InvalidArgumentError(
        absl::StrCat("Malformed literal index '", std::string(text), "'"));
  }
  return l;
}

// Enumerates index subsets of size j in lexicographic order.
template <typename Fn>
void ForEachSubset(int n, int j, Fn&& fn) {
  std::vector<int> idx(j);
  for (int i = 0; i < j; ++i) idx[i] = i;
  while (true) {
    fn(idx);
    int i = j - 1;
    while (i >= 0 && idx[i] == n - j + i) --i;
    if (i < 0) return;
    ++idx[i];
    for (int k = i + 1; k < j; ++k) idx[k] = idx[k - 1] + 1;
  }
}

absl::Status ValidateBit(int bit, std::string_view what) {
  if (bit != 0 && bit != 1) {
    return absl::InvalidArgumentError(
        absl::StrCat(std::string(what), " must be 0 or 1, got ", bit));
  }
  return absl::OkStatus();
}

}  // namespace

Feature Feature::Literal(int index) {
  return Feature(FeatureKind::kLiteral, {{index, false}});
}

Feature Feature::NegatedLiteral(int index) {
  return Feature(FeatureKind::kNegatedLiteral, {{index, true}});
}

Feature Feature::Conjunction(std::vector<SignedLiteral> literals) {
  std::sort(literals.begin(), literals.end(),
            [](const SignedLiteral& a, const SignedLiteral& b) {
              return a.index != b.index ? a.index < b.index
                                        : a.negated < b.negated;
            });
  return Feature(FeatureKind::kConjunction, std::move(literals));
}

Feature Feature::ConstantTrue() { return Feature(FeatureKind::kConstantTrue, {}); }

Feature Feature::WithId(int id) const {
  Feature f = *this;
  f.id_ = id;
  return f;
}

int Feature::MaxIndex() const {
  int m = -1;
  for (const SignedLiteral& l : literals_) m = std::max(m, l.index);
  return m;
}

std::string Feature::ToString() const {
  switch (kind_) {
    case FeatureKind::kConstantTrue:
      return "T";
    case FeatureKind::kLiteral:
    case FeatureKind::kNegatedLiteral:
      return LiteralString(literals_.front());
    case FeatureKind::kConjunction:
      break;
  }
  std::vector<std::string> parts;
  for (const SignedLiteral& l : literals_) parts.push_back(LiteralString(l));
  return absl::StrCat("(", absl::StrJoin(parts, "&"), ")");
}

absl::StatusOr<Feature> Feature::Parse(std::string_view text) {
  if (text == "T") return ConstantTrue();
  if (text.size() >= 2 && text.front() == '(' && text.back() == ')') {
    text = text.substr(1, text.size() - 2);
    std::vector<SignedLiteral> literals;
    if (!text.empty()) {
      for (absl::string_view part :
           absl::StrSplit(absl::string_view(text.data(), text.size()), '&')) {
        absl::StatusOr<SignedLiteral> l =
            ParseLiteral(std::string_view(part.data(), part.size()));
        if (!l.ok()) return l.status();
        literals.push_back(*l);
      }
    }
    return Conjunction(std::move(literals));
  }
  absl::StatusOr<SignedLiteral> l = ParseLiteral(text);
  if (!l.ok()) return l.status();
  return l->negated ? NegatedLiteral(l->index) : Literal(l->index);
}

absl::StatusOr<FeatureFamily> FeatureFamily::Literals(int dimension,
                                                      bool with_negations) {
  if (dimension < 1) {
    return absl::InvalidArgumentError("Dimension must be positive");
  }
  std::vector<Feature> features;
  for (int i = 0; i < dimension; ++i) features.push_back(Feature::Literal(i));
  if (with_negations) {
    for (int i = 0; i < dimension; ++i) {
      features.push_back(Feature::NegatedLiteral(i));
    }
  }
  return FromFeatures(dimension, std::move(features),
                      with_negations ? "literals" : "monotone-literals");
}

double FeatureFamily::ConjunctionCount(int dimension, int k) {
  double total = 0;
  double binom = 1;  // C(d, j)
  for (int j = 0; j <= k; ++j) {
    if (j > 0) binom = binom * (dimension - j + 1) / j;
    total += std::ldexp(binom, j);
  }
  return total;
}

absl::StatusOr<FeatureFamily> FeatureFamily::Conjunctions(int dimension, int k,
                                                          size_t cap) {
  if (dimension < 1) {
    return absl::InvalidArgumentError("Dimension must be positive");
  }
  if (k < 0 || k > dimension) {
    return absl::InvalidArgumentError(absl::StrCat(
        "Conjunction width k must lie in [0, d], got k=", k, " d=", dimension));
  }
  const double count = ConjunctionCount(dimension, k);
  if (count > static_cast<double>(cap)) {
    return absl::ResourceExhaustedError(absl::StrCat(
        "Conjunction family has ", count, " features, cap is ", cap));
  }
  std::vector<Feature> features;
  features.reserve(static_cast<size_t>(count));
  for (int j = 0; j <= k; ++j) {
    ForEachSubset(dimension, j, [&](const std::vector<int>& idx) {
      for (uint32_t signs = 0; signs < (1u << j); ++signs) {
        std::vector<SignedLiteral> literals;
        for (int i = 0; i < j; ++i) {
          literals.push_back({idx[i], ((signs >> i) & 1u) != 0});
        }
        features.push_back(Feature::Conjunction(std::move(literals)));
      }
    });
  }
  return FromFeatures(dimension, std::move(features),
                      absl::StrCat("conjunctions-k", k));
}

absl::StatusOr<FeatureFamily> FeatureFamily::FromFeatures(
    int dimension, std::vector<Feature> features, std::string descriptor) {
  // ToString is canonical, so equal features have equal strings.
  std::unordered_set<std::string> seen;
  seen.reserve(features.size());
  for (size_t i = 0; i < features.size(); ++i) {
    if (features[i].MaxIndex() >= dimension) {
      return absl::InvalidArgumentError(absl::StrCat(
          "Feature ", features[i].ToString(), " exceeds dimension ",
          dimension));
    }
    if (!seen.insert(features[i].ToString()).second) {
      return absl::InvalidArgumentError(absl::StrCat(
          "Duplicate feature ", features[i].ToString(), " in family"));
    }
    features[i] = features[i].WithId(static_cast<int>(i));
  }
  return FeatureFamily(dimension, std::move(features), std::move(descriptor));
}

absl::StatusOr<DecisionList> DecisionList::Create(int dimension,
                                                  std::vector<Term> terms,
                                                  int default_bit) {
  if (dimension < 1) {
    return absl::InvalidArgumentError("Dimension must be positive");
  }
  if (absl::Status s = ValidateBit(default_bit, "Default bit"); !s.ok()) {
    return s;
  }
  for (size_t i = 0; i < terms.size(); ++i) {
    if (absl::Status s = ValidateBit(terms[i].bit, "Term bit"); !s.ok()) {
      return s;
    }
    if (terms[i].feature.MaxIndex() >= dimension) {
      return absl::InvalidArgumentError(absl::StrCat(
          "Term ", terms[i].feature.ToString(), " exceeds dimension ",
          dimension));
    }
    for (size_t j = 0; j < i; ++j) {
      if (terms[j].feature == terms[i].feature) {
        return absl::InvalidArgumentError(absl::StrCat(
            "Feature ", terms[i].feature.ToString(), " appears twice"));
      }
    }
  }
  return DecisionList(dimension, std::move(terms), default_bit);
}

absl::StatusOr<int> DecisionList::Evaluate(std::span<const uint8_t> x) const {
  if (x.size() != static_cast<size_t>(dimension_)) {
    return absl::InvalidArgumentError(absl::StrCat(
        "Input has dimension ", x.size(), ", list expects ", dimension_));
  }
  return EvaluateUnchecked(x);
}

int DecisionList::EvaluateUnchecked(std::span<const uint8_t> x) const {
  for (const Term& t : terms_) {
    if (t.feature.Evaluate(x)) return t.bit;
  }
  return default_bit_;
}

int DecisionList::TermAlternations() const {
  int alternations = 0;
  for (size_t i = 1; i < terms_.size(); ++i) {
    if (terms_[i].bit != terms_[i - 1].bit) ++alternations;
  }
  return alternations;
}

bool DecisionList::IsMonotone() const {
  return std::all_of(terms_.begin(), terms_.end(), [](const Term& t) {
    return t.feature.kind() == FeatureKind::kLiteral;
  });
}

std::string DecisionList::ToString() const {
  std::string out;
  for (const Term& t : terms_) {
    absl::StrAppend(&out, "if ", t.feature.ToString(), " then ", t.bit,
                    " else ");
  }
  absl::StrAppend(&out, default_bit_);
  return out;
}

absl::StatusOr<PacSample> PacSample::Create(int dimension,
                                            std::vector<PacExample> examples) {
  if (dimension < 1) {
    return absl::InvalidArgumentError("Dimension must be positive");
  }
  for (size_t i = 0; i < examples.size(); ++i) {
    const PacExample& e = examples[i];
    if (e.x.size() != static_cast<size_t>(dimension)) {
      return absl::InvalidArgumentError(absl::StrCat(
          "Example ", i, " has dimension ", e.x.size(), ", expected ",
          dimension));
    }
    for (uint8_t v : e.x) {
      if (v > 1) {
        return absl::InvalidArgumentError(
            absl::StrCat("Example ", i, " has a non-binary feature"));
      }
    }
    if (absl::Status s = ValidateBit(e.label, "Label"); !s.ok()) return s;
  }
  return PacSample{dimension, std::move(examples)};
}

int64_t Quality(std::span<const PacExample> examples, const Feature& f,
                int b) {
  int64_t count = 0;
  for (const PacExample& e : examples) {
    if (e.label == 1 - b && f.Evaluate(e.x)) ++count;
  }
  return -count;
}

absl::StatusOr<int64_t> EmpiricalError(const DecisionList& h,
                                       const PacSample& sample) {
  if (h.dimension() != sample.dimension) {
    return absl::InvalidArgumentError(absl::StrCat(
        "List dimension ", h.dimension(), " != sample dimension ",
        sample.dimension));
  }
  int64_t errors = 0;
  for (const PacExample& e : sample.examples) {
    if (h.EvaluateUnchecked(e.x) != e.label) ++errors;
  }
  return errors;
}

namespace {

// Candidate features for a cover: the family followed by constant-true,
// which takes id family.size().
std::vector<Feature> CoverCandidates(const FeatureFamily& family) {
  std::vector<Feature> candidates(family.features().begin(),
                                  family.features().end());
  candidates.push_back(
      Feature::ConstantTrue().WithId(static_cast<int>(family.size())));
  return candidates;
}

struct CoverCounts {
  int64_t label0 = 0;
  int64_t label1 = 0;
};

CoverCounts CountCovered(const std::vector<PacExample>& examples,
                         const Feature& f) {
  CoverCounts c;
  for (const PacExample& e : examples) {
    if (f.Evaluate(e.x)) (e.label == 0 ? c.label0 : c.label1)++;
  }
  return c;
}

std::vector<PacExample> Uncovered(std::vector<PacExample> examples,
                                  const Feature& f) {
  std::erase_if(examples, [&](const PacExample& e) { return f.Evaluate(e.x); });
  return examples;
}

}  // namespace

absl::StatusOr<DecisionList> RivestGreedy(const PacSample& sample,
                                          const FeatureFamily& family) {
  if (family.dimension() != sample.dimension) {
    return absl::InvalidArgumentError("Family and sample dimensions differ");
  }
  std::vector<Feature> remaining = CoverCandidates(family);
  std::vector<PacExample> unclassified = sample.examples;
  std::vector<Term> terms;
  int default_bit = 0;
  while (!unclassified.empty()) {
    bool found = false;
    for (size_t i = 0; i < remaining.size() && !found; ++i) {
      const CoverCounts c = CountCovered(unclassified, remaining[i]);
      if (c.label0 + c.label1 == 0) continue;
      int bit;
      if (c.label1 == 0) {
        bit = 0;
      } else if (c.label0 == 0) {
        bit = 1;
      } else {
        continue;
      }
      found = true;
      const Feature f = remaining[i];
      unclassified = Uncovered(std::move(unclassified), f);
      remaining.erase(remaining.begin() + static_cast<std::ptrdiff_t>(i));
      if (f.kind() == FeatureKind::kConstantTrue) {
        default_bit = bit;
      } else {
        terms.push_back({f, bit});
      }
    }
    if (!found) {
      return absl::FailedPreconditionError(absl::StrCat(
          "Sample is not realizable by ", family.descriptor(),
          " decision lists: no consistent term for ", unclassified.size(),
          " remaining examples"));
    }
  }
  return DecisionList::Create(sample.dimension, std::move(terms), default_bit);
}

absl::StatusOr<GreedyCoverResult> DpGreedyCover(const PacSample& sample,
                                                const FeatureFamily& family,
                                                double epsilon_per_round,
                                                RandomSource& source) {
  if (family.dimension() != sample.dimension) {
    return absl::InvalidArgumentError("Family and sample dimensions differ");
  }
  if (!(epsilon_per_round > 0)) {
    return absl::InvalidArgumentError("Per-round epsilon must be positive");
  }
  std::vector<Feature> remaining = CoverCandidates(family);
  std::vector<PacExample> unclassified = sample.examples;
  std::vector<CoverRound> rounds;
  std::vector<Term> terms;
  int default_bit = -1;

  const size_t num_rounds = remaining.size();
  std::vector<double> scores;
  for (size_t round = 0; round < num_rounds; ++round) {
    // Candidates in (feature id, bit) order: q(f, 0) = -#label-1 covered,
    // q(f, 1) = -#label-0 covered.
    scores.clear();
    for (const Feature& f : remaining) {
      const CoverCounts c = CountCovered(unclassified, f);
      scores.push_back(-static_cast<double>(c.label1));
      scores.push_back(-static_cast<double>(c.label0));
    }
    absl::StatusOr<size_t> pick = EmSelect(scores, epsilon_per_round, source);
    if (!pick.ok()) return pick.status();

    const size_t feature_index = *pick / 2;
    const int bit = static_cast<int>(*pick % 2);
    const Feature chosen = remaining[feature_index];
    CoverRound r{chosen,
                 bit,
                 static_cast<int64_t>(scores[*pick]),
                 static_cast<int64_t>(
                     *std::max_element(scores.begin(), scores.end())),
                 unclassified.size(),
                 0,
                 remaining.size()};
    unclassified = Uncovered(std::move(unclassified), chosen);
    r.remaining_after = unclassified.size();
    rounds.push_back(std::move(r));
    remaining.erase(remaining.begin() +
                    static_cast<std::ptrdiff_t>(feature_index));

    if (default_bit < 0) {
      if (chosen.kind() == FeatureKind::kConstantTrue) {
        default_bit = bit;
      } else {
        terms.push_back({chosen, bit});
      }
    }
  }
  absl::StatusOr<DecisionList> list =
      DecisionList::Create(sample.dimension, std::move(terms), default_bit);
  if (!list.ok()) return list.status();
  return GreedyCoverResult{*std::move(list), std::move(rounds)};
}

double GreedyCoverErrorBound(int64_t num_features, double epsilon,
                             double beta) {
  const double m = static_cast<double>(num_features);
  return (4.0 * m / epsilon) * std::log(std::sqrt(2.0 / beta) * m);
}

absl::StatusOr<double> EpsilonPerRoundFor(double epsilon_total, double delta) {
  if (!(epsilon_total > 0)) {
    return absl::InvalidArgumentError("Total epsilon must be positive");
  }
  if (!(delta > 0 && delta < 1)) {
    return absl::InvalidArgumentError("Delta must lie in (0, 1)");
  }
  return epsilon_total / (2.0 * (std::log(1.0 / delta) + 1.5));
}

absl::StatusOr<int64_t> PacSampleBound(int64_t num_features, double alpha,
                                       double beta, double epsilon,
                                       double delta, double vc_dimension) {
  if (num_features < 1 || !(alpha > 0 && alpha < 1) ||
      !(beta > 0 && beta < 1) || !(epsilon > 0) || !(delta > 0 && delta < 1) ||
      !(vc_dimension >= 0)) {
    return absl::InvalidArgumentError(absl::StrCat(
        "Invalid sample-bound parameters: M=", num_features, " alpha=", alpha,
        " beta=", beta, " epsilon=", epsilon, " delta=", delta,
        " vc=", vc_dimension));
  }
  const double m = static_cast<double>(num_features);
  const double generalization =
      (64.0 / alpha) *
      (vc_dimension * std::log(64.0 / alpha) + std::log(16.0 / beta));
  const double privacy = 8.0 * m * std::log(2.0 * m / std::sqrt(beta)) *
                         (2.0 * std::log(1.0 / delta) + 1.5) /
                         (alpha * epsilon);
  return static_cast<int64_t>(std::ceil(std::max(generalization, privacy)));
}

}  // namespace dplearn
