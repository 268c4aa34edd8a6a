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

// Dense reference implementation of prediction and the training step.
//
// Every intermediate is a plain std::vector of ints and every operator is a
// separate loop nest. Nothing is packed, fused or parallel. Random draws come
// from the injected RandomSource at the same addresses the engine uses and are
// compared as doubles (pi < p).

#ifndef COTM_ORACLE_HPP_
#define COTM_ORACLE_HPP_

#include <cstdint>
#include <vector>

#include "cotm/config.hpp"
#include "cotm/model.hpp"
#include "cotm/random.hpp"

namespace cotm::oracle {

using IntMatrix = std::vector<std::vector<std::int64_t>>;
using IntVector = std::vector<std::int64_t>;

// Refuses instances with n * o above this.
inline constexpr std::uint64_t kMaxCells = 1'000'000;

struct OracleModel {
  Config config;
  IntMatrix memory;   // n x 2o
  IntMatrix weights;  // m x n
  IntMatrix frozen;   // m x n, 0 or 1

  static OracleModel from_model(const Model& model);
  Model to_model() const;
};

// Every matrix of one step, indexed [output][clause][literal] where relevant.
struct StepTrace {
  IntVector literals;
  IntMatrix actions;
  IntVector clauses;
  IntVector votes;
  IntVector margins;
  std::vector<double> probabilities;
  IntMatrix type_i;                         // R^I
  IntMatrix type_ii;                        // R^II
  std::vector<IntMatrix> type_ia;           // F^Ia_i
  std::vector<IntMatrix> type_ib;           // F^Ib_i
  std::vector<IntMatrix> random_gate;       // B^i
  std::vector<IntMatrix> type_ii_feedback;  // F^II_i
  IntMatrix memory_delta;                   // unclipped sum over outputs
  IntMatrix weight_delta;
};

IntVector oracle_predict(const OracleModel& model, const IntVector& x);

// One training step. Returns the trace of intermediates.
StepTrace oracle_fit_example(OracleModel& model, const IntVector& x, const IntVector& y,
                             const RandomSource& rng, StepKey key);

}  // namespace cotm::oracle

#endif  // COTM_ORACLE_HPP_
