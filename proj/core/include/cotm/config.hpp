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

#ifndef COTM_CONFIG_HPP_
#define COTM_CONFIG_HPP_

#include <cstdint>
#include <string>

namespace cotm {

// Hyperparameters of a coalesced machine.
//
// Memory states span 1..2N; a literal is included in a clause when its state
// is at least N + 1.
struct Config {
  std::uint32_t n_outputs = 1;     // m
  std::uint32_t n_clauses = 1;     // n
  std::uint32_t n_inputs = 1;      // o
  std::uint32_t memory_depth = 1;  // N
  std::uint32_t voting_margin = 1; // t
  double specificity = 1.0;        // s >= 1; Type Ib fires with probability 1/s
  double multiclass_scalar = 1.0;  // e in (0, 1]; damps Type II selection
  bool boost_true_positive = true;
  std::uint64_t seed = 0;

  std::uint32_t n_literals() const { return 2 * n_inputs; }
  std::uint32_t max_state() const { return 2 * memory_depth; }

  // Throws ConfigError naming the first offending field.
  void validate() const;

  friend bool operator==(const Config&, const Config&) = default;
};

// e = 1 / (m - 1) for one-hot multi-class tasks, 1 when m == 1.
double one_hot_multiclass_scalar(std::uint32_t n_outputs);

std::string to_string(const Config& config);

}  // namespace cotm

#endif  // COTM_CONFIG_HPP_
