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

// File formats. CSV files open with '#' comment lines carrying provenance
// (seed, config hash, format version) followed by a header row; readers
// skip comment lines. JSON documents are written with sorted keys so that
// identical inputs give byte-identical files.

#ifndef DPLEARN_IO_H_
#define DPLEARN_IO_H_

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "dplearn/audit.h"
#include "dplearn/decision_list.h"
#include "dplearn/dp_winnow.h"
#include "dplearn/reductions.h"
#include "dplearn/transcript.h"
#include "dplearn/winnow.h"
#include "json.hpp"

namespace dplearn {

inline constexpr std::string_view kFormatVersion = "1";

struct Provenance {
  uint64_t seed = 0;
  uint64_t config_hash = 0;
  std::string format_version = std::string(kFormatVersion);
};

// FNV-1a of the canonical (sorted-key, compact) JSON dump.
uint64_t ConfigHash(const nlohmann::json& config);
std::string HexHash(uint64_t hash);

nlohmann::json ToJson(const Provenance& p);

// CSV text. Format* functions produce the full file contents.
std::string FormatPacSampleCsv(const PacSample& sample, const Provenance& p);
absl::StatusOr<PacSample> ParsePacSampleCsv(std::string_view text);

std::string FormatStreamCsv(std::span<const OnlineExample> stream,
                            const Provenance& p);
absl::StatusOr<std::vector<OnlineExample>> ParseStreamCsv(
    std::string_view text);

enum class TranscriptFormat {
  // round,prediction,label,mistake,update,cumulative_updates
  kWinnow,
  // round,prediction,label,mistake,update,k,epoch_id
  kDpWinnow,
};
std::string FormatTranscriptCsv(const RunTranscript& transcript,
                                TranscriptFormat format, const Provenance& p);

// JSON encodings.
nlohmann::json ToJson(const DecisionList& list);
absl::StatusOr<DecisionList> DecisionListFromJson(const nlohmann::json& j);

nlohmann::json ToJson(const MarginHalfspace& h);
absl::StatusOr<MarginHalfspace> MarginHalfspaceFromJson(
    const nlohmann::json& j);

nlohmann::json ToJson(const DpWinnowParams& params);
nlohmann::json ToJson(const ParamResiduals& residuals);
nlohmann::json ToJson(const RatioReport& report);
nlohmann::json ToJson(const BoundReport& report);

// Whole-file helpers. Writes go to a temporary file that is renamed into
// place, so a failed run never leaves a truncated artifact.
absl::StatusOr<std::string> ReadFile(const std::string& path);
absl::Status WriteFileAtomic(const std::string& path,
                             std::string_view contents);
absl::StatusOr<nlohmann::json> ReadJsonFile(const std::string& path);
// Pretty-printed with a trailing newline.
std::string DumpJson(const nlohmann::json& j);

}  // namespace dplearn

#endif  // DPLEARN_IO_H_
