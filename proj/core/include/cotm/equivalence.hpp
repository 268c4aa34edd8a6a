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

// Randomized lock-step comparison of the engine against the dense oracle.

#ifndef COTM_EQUIVALENCE_HPP_
#define COTM_EQUIVALENCE_HPP_

#include <cstdint>
#include <functional>
#include <optional>
#include <string>

#include "cotm/config.hpp"

namespace cotm {

// Deliberate engine defects, used to prove the harness catches them.
enum class Fault {
  kNone,
  kClipCeiling,  // memory clipped to 2N - 1 instead of 2N
};

struct EquivalenceOptions {
  std::uint32_t instances = 1000;
  std::uint32_t steps = 20;
  std::uint32_t seeds = 50;  // instance i runs under seed base_seed + i % seeds
  std::uint64_t base_seed = 0;
  std::uint32_t max_outputs = 4;
  std::uint32_t max_clauses = 8;
  std::uint32_t max_inputs = 6;
  std::uint32_t max_depth = 4;
  std::uint32_t max_margin = 8;
  std::uint32_t threads = 1;  // > 1 runs the engine's row-parallel path
  Fault fault = Fault::kNone;
};

struct Divergence {
  std::uint64_t seed = 0;
  std::uint32_t instance = 0;
  std::uint32_t step = 0;
  std::string matrix;  // "C", "W", "c", "v", "R1", "R2", "dC", "dW", "y_hat"
  std::string index;   // "[j][k]" style
  std::int64_t expected = 0;
  std::int64_t actual = 0;
  std::string dump;  // full instance and step trace

  std::string summary() const;
};

struct EquivalenceReport {
  std::uint32_t instances = 0;
  std::uint64_t steps = 0;
  std::uint64_t predictions = 0;
  std::uint32_t vanilla_instances = 0;
  std::optional<Divergence> divergence;

  bool passed() const { return !divergence.has_value(); }
};

// Stops at the first divergence. `progress` (optional) is called after each instance.
EquivalenceReport run_equivalence(
    const EquivalenceOptions& options,
    const std::function<void(std::uint32_t done)>& progress = nullptr);

}  // namespace cotm

#endif  // COTM_EQUIVALENCE_HPP_
