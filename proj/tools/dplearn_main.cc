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

// dplearn: command-line front end for the private learners and audits.
//
//   dplearn params --config cfg.json
//   dplearn online --algo winnow --zero-noise --out runs/w1
//   dplearn audit --trials 100000 --workers 4

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "dplearn/harness.h"

namespace {

struct Flags {
  std::string config;
  std::string out;
  std::optional<uint64_t> seed;
  std::optional<int> workers;
  std::optional<int64_t> trials;
  std::optional<std::string> algo;
  std::optional<std::string> input;
  bool zero_noise = false;
};

void AddCommonFlags(CLI::App* cmd, Flags& flags) {
  cmd->add_option("--config", flags.config, "JSON config file")
      ->check(CLI::ExistingFile);
  cmd->add_option("--seed", flags.seed, "Root seed (unsigned 64-bit)");
  cmd->add_option("--out", flags.out, "Directory for artifacts");
  cmd->add_option("--workers", flags.workers, "Worker threads")
      ->check(CLI::PositiveNumber);
  cmd->add_flag("--zero-noise", flags.zero_noise,
                "Set every noise draw to zero (not private)");
  cmd->add_option("--trials", flags.trials, "Number of trials or runs");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Differentially private learning of decision lists and "
               "large-margin halfspaces"};
  app.require_subcommand(1);
  Flags flags;

  struct Spec {
    const char* name;
    const char* help;
    bool algo;
    bool input;
  };
  const Spec specs[] = {
      {"pac-dl", "DP greedy cover vs. the greedy learner on decision lists",
       false, true},
      {"online", "Winnow, ConfidentWinnow or DP-Winnow on a stream", true,
       true},
      {"reduce", "Encode a monotone decision list as a margin halfspace",
       false, true},
      {"params", "Solve and check the DP-Winnow parameters", false, false},
      {"audit", "Privacy ratio tests and bound checks", false, false},
      {"oracle", "Exhaustive-search oracles", false, true},
  };
  for (const Spec& s : specs) {
    CLI::App* cmd = app.add_subcommand(s.name, s.help);
    AddCommonFlags(cmd, flags);
    if (s.algo) {
      cmd->add_option("--algo", flags.algo,
                      "winnow, confident-winnow or dp-winnow");
    }
    if (s.input) cmd->add_option("--input", flags.input, "Input file");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  dplearn::HarnessOptions options;
  options.subcommand = app.get_subcommands().front()->get_name();
  options.config_path = flags.config;
  options.out_dir = flags.out;
  options.seed = flags.seed;
  options.workers = flags.workers;
  options.trials = flags.trials;
  options.algo = flags.algo;
  options.input = flags.input;
  options.zero_noise = flags.zero_noise;
  return dplearn::RunHarness(options, std::cout, std::cerr);
}
