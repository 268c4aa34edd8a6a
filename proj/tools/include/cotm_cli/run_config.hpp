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

// Flat key-value run configuration.
//
//   # comment
//   n_clauses = 1024
//   voting_margin = 400
//
// One `key = value` per line. Unknown and repeated keys are rejected. Reals
// are written with 17 significant digits so a written file parses back to
// the identical configuration.

#ifndef COTM_CLI_RUN_CONFIG_HPP_
#define COTM_CLI_RUN_CONFIG_HPP_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cotm/config.hpp"
#include "cotm/eval.hpp"

namespace cotm::cli {

struct RunConfig {
  // Machine. 0 for n_outputs / n_inputs means "take it from the dataset".
  std::uint32_t n_outputs = 0;
  std::uint32_t n_clauses = 1024;
  std::uint32_t n_inputs = 0;
  std::uint32_t memory_depth = 128;
  std::uint32_t voting_margin = 400;
  double specificity = 5.0;
  std::optional<double> multiclass_scalar = 1.0;  // nullopt: one_hot, 1/(m-1)
  bool boost_true_positive = true;
  std::uint64_t seed = 0;

  // Protocol.
  std::string train;
  std::string test;
  std::string model = "model.cotm";
  std::string report;   // per-epoch CSV, skipped when empty
  std::string summary;  // JSON summary, skipped when empty
  std::uint32_t epochs = 100;
  std::uint32_t trials = 10;
  std::uint32_t tail = 25;
  bool shuffle = true;
  bool vanilla = false;
  Scoring scoring = Scoring::kArgmax;

  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

// Every key accepted by parse_run_config, in file order.
const std::vector<std::string>& run_config_keys();

// Sets one key from its text form. Throws ConfigError on an unknown key or a
// malformed value.
void set_run_config_value(RunConfig& config, std::string_view key, std::string_view value);

// Parses a whole file. Errors name the line.
RunConfig parse_run_config(std::string_view text);
RunConfig load_run_config(const std::filesystem::path& path);

// Writes every key, so parse_run_config(format_run_config(c)) == c.
std::string format_run_config(const RunConfig& config);

// Resolves the machine configuration against a dataset's shape. Throws
// ShapeError when an explicit n_inputs / n_outputs disagrees with the data.
Config machine_config(const RunConfig& config, std::uint32_t data_inputs,
                      std::uint32_t data_outputs);

}  // namespace cotm::cli

#endif  // COTM_CLI_RUN_CONFIG_HPP_
