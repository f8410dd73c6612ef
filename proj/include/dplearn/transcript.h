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

#ifndef DPLEARN_TRANSCRIPT_H_
#define DPLEARN_TRANSCRIPT_H_

#include <cstdint>
#include <vector>

namespace dplearn {

// One round of an online run. Rounds are numbered from 1.
struct RoundRecord {
  int64_t round = 0;
  int prediction = 0;
  int label = 0;
  bool mistake = false;
  bool update = false;
  // Updates performed up to and including this round (k for DP-Winnow).
  int64_t cumulative_updates = 0;
  // Threshold instance the round was tested against; 0 for non-private runs.
  int64_t epoch_id = 0;
};

struct RunTranscript {
  std::vector<RoundRecord> rounds;

  int64_t mistakes() const;
  int64_t updates() const;
};

}  // namespace dplearn

#endif  // DPLEARN_TRANSCRIPT_H_
