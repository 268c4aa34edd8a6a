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

// Training of the coalesced machine from single examples.
//
// One step on (x, y):
//
//   q_i  = +t if y_i else -t                        margins
//   d_i  = |q_i - clip(v_i, -t, t)| / 2t            update probabilities
//   R1   = [y_i XNOR (w_ij >= 0)] & [pi < d_i]      Type I selection
//   R2   = [y_i XOR  (w_ij >= 0)] & [pi < d_i * e]  Type II selection
//   C   <- clip(C + sum_i Q2_i o F2_i + Q1_i o F1a_i - Q1_i o F1b_i, 1, 2N)
//   W   <- W + (R1 + R2) o c (y - not y)
//
// Every selection and feedback is computed from the pre-step state and then
// applied at once. Pairs whose weight is a frozen zero never participate.
//
// The granular functions below compute that step one matrix at a time.
// plan_example / commit_example run the same step row by row on the packed
// representation and are what fit_example uses.

#ifndef COTM_LEARN_HPP_
#define COTM_LEARN_HPP_

#include <cstdint>
#include <span>
#include <vector>

#include "cotm/bits.hpp"
#include "cotm/config.hpp"
#include "cotm/dataset.hpp"
#include "cotm/model.hpp"
#include "cotm/random.hpp"
#include "cotm/thread_pool.hpp"

namespace cotm {

// q = y t - (not y) t.
std::vector<std::int32_t> margins(const BitVector& y, std::uint32_t t);

// d_i = |q_i - clip(v_i, -t, t)| / (2t), always in [0, 1].
std::vector<double> update_probabilities(std::span<const std::int64_t> votes,
                                         std::span<const std::int32_t> margins, std::uint32_t t);

BitMatrix select_type_i(const WeightMatrix& weights, const BitVector& y,
                        std::span<const double> probabilities, const RandomSource& rng,
                        StepKey key);

BitMatrix select_type_ii(const WeightMatrix& weights, const BitVector& y,
                         std::span<const double> probabilities, double multiclass_scalar,
                         const RandomSource& rng, StepKey key);

// Increments for output `output`: c_j & lit_k, gated per entry with
// probability (s-1)/s unless boost is on.
BitMatrix feedback_type_ia(const BitVector& clauses, const BitVector& literals, bool boost,
                           double specificity, const RandomSource& rng, StepKey key,
                           std::uint32_t output);

// Decrements for output `output`: (NOT c_j | NOT lit_k) & [pi < 1/s].
BitMatrix feedback_type_ib(const BitVector& clauses, const BitVector& literals,
                           double specificity, const RandomSource& rng, StepKey key,
                           std::uint32_t output);

// Increments: c_j & NOT lit_k & NOT a_jk. Deterministic.
BitMatrix feedback_type_ii(const BitVector& clauses, const BitVector& literals,
                           const BitMatrix& actions);

// sum_i (Q2_i o F2_i + Q1_i o F1a_i - Q1_i o F1b_i), one feedback matrix per output.
MemoryDelta combine_feedback(const BitMatrix& type_i, const BitMatrix& type_ii,
                             std::span<const BitMatrix> type_ia, std::span<const BitMatrix> type_ib,
                             std::span<const BitMatrix> type_ii_feedback);

// C <- clip(C + delta, 1, 2N), summed over all outputs before the clip.
void apply_memory_update(Model& model, const MemoryDelta& delta);

// W <- W + (R1 + R2) o c (y - not y), leaving frozen entries untouched.
void apply_weight_update(WeightMatrix& weights, const BitMatrix& type_i, const BitMatrix& type_ii,
                         const BitVector& clauses, const BitVector& y);

// Intermediates of one step. Reused across steps to avoid reallocation; after
// plan_example it holds the full trace of the planned update.
struct TrainScratch {
  TrainScratch() = default;
  explicit TrainScratch(const Config& config);

  BitVector literals;
  BitVector clauses;
  std::vector<std::int64_t> votes;
  std::vector<std::int32_t> margins;
  std::vector<double> probabilities;
  BitMatrix type_i;                      // R1, m x n
  BitMatrix type_ii;                     // R2, m x n
  MemoryDelta memory_delta;              // summed over outputs, unclipped
  std::vector<std::int8_t> weight_delta; // m x n, each in {-1, 0, +1}

  bool fits(const Config& config) const;
};

// Computes the full update for (x, y) from the current model without
// changing it.
void plan_example(const Model& model, const BitVector& x, const BitVector& y,
                  const RandomSource& rng, StepKey key, TrainScratch& scratch,
                  ThreadPool* pool = nullptr);

// Applies a planned update.
void commit_example(Model& model, const TrainScratch& scratch);

void fit_example(Model& model, const BitVector& x, const BitVector& y, const RandomSource& rng,
                 StepKey key, TrainScratch& scratch, ThreadPool* pool = nullptr);
void fit_example(Model& model, const BitVector& x, const BitVector& y, const RandomSource& rng,
                 StepKey key);

// Visitation order of an epoch: storage order, or a Fisher-Yates permutation
// drawn from (seed, epoch).
std::vector<std::uint32_t> epoch_order(const RandomSource& rng, std::uint32_t epoch,
                                       std::size_t count, bool shuffle);

// One pass over `data`. Example i of the dataset trains under key (epoch, i).
void fit_epoch(Model& model, const Dataset& data, const RandomSource& rng, std::uint32_t epoch,
               bool shuffle, ThreadPool* pool = nullptr);

}  // namespace cotm

#endif  // COTM_LEARN_HPP_
