// Copyright 2026 The CoTM Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Subcommands of the `cotm` tool, callable without a process.
//
// Commands report progress on `log` and throw cotm::Error subclasses on
// failure; exit_code_for maps those to the process exit status.

#ifndef COTM_CLI_COMMANDS_HPP_
#define COTM_CLI_COMMANDS_HPP_

#include <cstddef>
#include <cstdint>
#include <exception>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "cotm/model.hpp"
#include "cotm_cli/run_config.hpp"

namespace cotm::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 1,       // bad flags or configuration
  kExitData = 2,        // unreadable, malformed or mismatched data
  kExitDivergence = 3,  // oracle-check found a difference
};

// Maps an exception escaping a command to its exit code.
int exit_code_for(const std::exception& error);

// Value of COTM_SEED, if set. Throws ConfigError when it is not an integer.
std::optional<std::uint64_t> seed_from_environment();

struct GenerateXorArgs {
  std::string out_dir = ".";
  std::string prefix = "xor";
  std::size_t train_size = 2500;
  std::size_t test_size = 10000;
  double noise = 0.4;
  std::uint64_t seed = 0;
};

// Writes <prefix>_train.cotd, <prefix>_test.cotd and <prefix>.names (one
// feature name per line).
void cmd_generate_xor(const GenerateXorArgs& args, std::ostream& log);

struct PrepareImagesArgs {
  std::string images;
  std::string labels;
  std::string out;
  std::uint32_t classes = 10;
  std::uint32_t window = 11;
  double threshold = 2.0;
};

void cmd_prepare_images(const PrepareImagesArgs& args, std::ostream& log);

struct PrepareTextArgs {
  std::string corpus;     // "<label>\t<text>" lines
  std::string out;
  std::string vocab_in;   // reuse this vocabulary instead of building one
  std::string vocab_out;  // where to write the vocabulary, optional
  std::size_t max_vocab = 10000;
  std::uint32_t classes = 0;  // 0: one more than the largest label
};

void cmd_prepare_text(const PrepareTextArgs& args, std::ostream& log);

struct SubsampleArgs {
  std::string in;
  std::string out;
  std::optional<std::uint32_t> remove_class;
  double fraction = 0.0;
  std::vector<std::uint32_t> geometric;  // class ranking
  std::uint64_t seed = 0;
};

void cmd_subsample(const SubsampleArgs& args, std::ostream& log);

struct TrainArgs {
  RunConfig config;
  std::size_t threads = 0;  // 0: every available core
};

// Model file of trial k: the configured path for k = 0, otherwise
// "<stem>-trial<k><extension>".
std::string trial_model_path(const std::string& path, std::uint32_t trial);

// Trains config.trials models and writes each one plus the optional CSV
// report and JSON summary. Returns the model of trial 0.
Model cmd_train(const TrainArgs& args, std::ostream& log);

struct EvalArgs {
  std::string model;
  std::string data;
  std::size_t threads = 0;
  bool empty_clause_zero = false;  // all-Exclude clauses vote 0
};

// Sorted-key JSON with both accuracy modes and the per-class F1 scores.
std::string cmd_eval(const EvalArgs& args);

struct PredictArgs {
  std::string model;
  std::string data;
  std::size_t threads = 0;
  bool labels = true;  // argmax label per line, else the raw output bits
};

void cmd_predict(const PredictArgs& args, std::ostream& out);

struct InspectArgs {
  std::string model;
  std::size_t top = 10;
  std::string vocab;   // feature names, one per line
  bool names = false;  // requires vocab
};

// Clauses by decreasing max |weight|, ties by index.
void cmd_inspect(const InspectArgs& args, std::ostream& out);

struct OracleCheckArgs {
  std::uint32_t instances = 1000;
  std::uint32_t steps = 20;
  std::uint32_t seeds = 50;
  std::uint64_t seed = 0;
  std::uint32_t threads = 1;
  bool inject_fault = false;
};

// Returns kExitOk or kExitDivergence; a divergence prints the full trace.
int cmd_oracle_check(const OracleCheckArgs& args, std::ostream& out, std::ostream& err);

}  // namespace cotm::cli

#endif  // COTM_CLI_COMMANDS_HPP_
