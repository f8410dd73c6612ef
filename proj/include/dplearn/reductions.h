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

// Encodings between concept classes: monotone decision lists as large-margin
// halfspaces, signed weights as nonnegative ones over doubled inputs, and
// point functions as basis-vector halfspaces.
//
// Bit convention at this boundary: bit 1 maps to +1 and bit 0 to -1, for
// features and labels alike.

#ifndef DPLEARN_REDUCTIONS_H_
#define DPLEARN_REDUCTIONS_H_

#include <cstdint>
#include <span>
#include <vector>

#include "absl/status/statusor.h"
#include "dplearn/decision_list.h"

namespace dplearn {

inline int BitToSign(int bit) { return bit != 0 ? 1 : -1; }
std::vector<int8_t> BitsToSigns(std::span<const uint8_t> bits);

struct MarginHalfspace {
  std::vector<double> weights;  // L1 norm 1
  double claimed_margin = 0;
  int dimension = 0;

  double Dot(std::span<const int8_t> x) const;
  int Predict(std::span<const int8_t> x) const;

  static absl::StatusOr<MarginHalfspace> Create(std::vector<double> weights,
                                                double claimed_margin);
};

// Encodes a monotone 1-decision list over d variables as a halfspace over
// d+1 variables, the last coordinate being the constant +1.
//
// Terms are grouped into maximal runs of equal output bit; a term in run i
// gets weight W = (r+1)^(D+2-i), where r is the list length and D its number
// of alternations. The encoding is built so that, on x in {-1,+1}^d,
//   <v, (x,1)> = sum over fired terms of s_j W_j + s_default,
// with s = +-1 the output sign: each variable carries s_j W_j / 2 and the
// bias absorbs s_default + sum_j s_j W_j / 2. The first fired term outweighs
// everything after it, so the sign is the list's output and the unnormalized
// margin is at least 1. claimed_margin = 1 / ||unnormalized v||_1.
//
// InvalidArgument for negated or conjunction features.
absl::StatusOr<MarginHalfspace> DecisionListToHalfspace(
    const DecisionList& list);

// Appends the constant +1 coordinate consumed by DecisionListToHalfspace.
std::vector<int8_t> WithBias(std::span<const int8_t> x);

// w' has |w_i| at i when w_i >= 0 and at i+d otherwise.
std::vector<double> DoubleNonneg(std::span<const double> w);
// z = (x, -x), so <DoubleNonneg(w), EmbedPm(x)> = <w, x>.
std::vector<int8_t> EmbedPm(std::span<const int8_t> x);

// Nonnegative version of a margin halfspace over doubled inputs.
MarginHalfspace DoubleNonneg(const MarginHalfspace& h);

// Point-function embedding over the domain {1..T}: point x maps to the
// all-ones vector with -1 at coordinate x, and the weight vector is e_t.
// sgn<e_t, embed(x)> is -1 exactly when x = t, which is the negation of the
// point function; with negate_labels the caller receives p_t's labels.
struct PointFunctionEmbedding {
  int64_t domain_size = 0;
  int64_t target = 0;
  bool negate_labels = false;
  MarginHalfspace halfspace;

  absl::StatusOr<std::vector<int8_t>> Embed(int64_t x) const;
  // Label of x under the embedding, honoring negate_labels.
  absl::StatusOr<int> Label(int64_t x) const;
};

absl::StatusOr<PointFunctionEmbedding> PointFnEmbed(int64_t target,
                                                    int64_t domain_size,
                                                    bool negate_labels = false);

// Enumerates every x in {-1,+1}^d, evaluates h on (x, 1) and compares it
// with the list's label. Reports min |<v, (x,1)>| and the number of
// disagreements. ResourceExhausted for d > 24.
struct MarginMeasurement {
  double min_margin = 0;
  int64_t disagreements = 0;
  int64_t points = 0;
};

absl::StatusOr<MarginMeasurement> MeasureListMargin(const DecisionList& list,
                                                    const MarginHalfspace& h);

}  // namespace dplearn

#endif  // DPLEARN_REDUCTIONS_H_
