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

// Experiment orchestration behind the dplearn command line.
//
// Configuration precedence, lowest first: built-in defaults for the
// subcommand, the --config JSON document, then explicit flags. The resolved
// configuration is echoed on stdout and stored in run.json.
//
// Exit codes: 0 success, 1 usage or input error (nothing written),
// 3 a check ran but its verdict was "fail".

#ifndef DPLEARN_HARNESS_H_
#define DPLEARN_HARNESS_H_

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "json.hpp"

namespace dplearn {

inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitCheckFailed = 3;

struct HarnessOptions {
  std::string subcommand;
  std::string config_path;
  std::string out_dir;
  std::optional<uint64_t> seed;
  std::optional<int> workers;
  std::optional<int64_t> trials;
  std::optional<std::string> algo;
  std::optional<std::string> input;
  bool zero_noise = false;
};

std::vector<std::string> Subcommands();

// Defaults for a subcommand; NotFound for unknown names.
absl::StatusOr<nlohmann::json> DefaultConfig(const std::string& subcommand);

// Merges defaults, the config file and flags. Unknown keys in the file are
// rejected so that typos do not silently fall back to defaults.
absl::StatusOr<nlohmann::json> ResolveConfig(const HarnessOptions& options);

// Runs one subcommand. Results go to `out`, diagnostics to `err`. Artifacts
// are written to options.out_dir only after the whole run succeeded.
int RunHarness(const HarnessOptions& options, std::ostream& out,
               std::ostream& err);

}  // namespace dplearn

#endif  // DPLEARN_HARNESS_H_
