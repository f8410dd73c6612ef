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

#include "dplearn/transcript.h"

namespace dplearn {

int64_t RunTranscript::mistakes() const {
  int64_t n = 0;
  for (const RoundRecord& r : rounds) n += r.mistake ? 1 : 0;
  return n;
}

int64_t RunTranscript::updates() const {
  return rounds.empty() ? 0 : rounds.back().cumulative_updates;
}

}  // namespace dplearn
