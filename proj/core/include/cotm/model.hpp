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

// Model representation and inference for the coalesced machine.
//
// A model is a shared pool of n conjunctive clauses over 2o literals
// [x_1..x_o, NOT x_1..NOT x_o] plus an m x n integer weight matrix relating
// every clause to every output:
//
//   y_hat = U(W * And(Imply(G(C), literals(x))))
//
// G thresholds the memory states at N, Imply/And evaluate each clause as the
// conjunction of its included literals, and U is the unit step v >= 0.

#ifndef COTM_MODEL_HPP_
#define COTM_MODEL_HPP_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cotm/bits.hpp"
#include "cotm/config.hpp"
#include "cotm/random.hpp"

namespace cotm {

// How an all-Exclude clause evaluates at inference time. Training always uses
// kTrue (an empty conjunction is true).
enum class EmptyClauseOutput { kTrue, kZero };

// n x 2o automaton states, each in [1, 2N].
class MemoryMatrix {
 public:
  MemoryMatrix() = default;
  MemoryMatrix(std::uint32_t clauses, std::uint32_t literals, std::uint32_t depth,
               std::uint32_t fill);
  MemoryMatrix(std::uint32_t clauses, std::uint32_t literals, std::uint32_t depth,
               std::vector<std::uint32_t> states);

  std::uint32_t rows() const { return rows_; }
  std::uint32_t cols() const { return cols_; }
  std::uint32_t depth() const { return depth_; }
  std::uint32_t max_state() const { return 2 * depth_; }

  std::uint32_t at(std::uint32_t j, std::uint32_t k) const {
    return states_[std::size_t{j} * cols_ + k];
  }
  void set(std::uint32_t j, std::uint32_t k, std::uint32_t state);

  std::span<const std::uint32_t> row(std::uint32_t j) const {
    return {states_.data() + std::size_t{j} * cols_, cols_};
  }
  std::span<std::uint32_t> mutable_row(std::uint32_t j) {
    return {states_.data() + std::size_t{j} * cols_, cols_};
  }
  std::span<const std::uint32_t> values() const { return states_; }

  // Throws InvariantError naming the first entry outside [1, 2N].
  void check_invariants() const;
  void check_row(std::uint32_t j) const;

  friend bool operator==(const MemoryMatrix&, const MemoryMatrix&) = default;

 private:
  std::uint32_t rows_ = 0;
  std::uint32_t cols_ = 0;
  std::uint32_t depth_ = 1;
  std::vector<std::uint32_t> states_;
};

// Accumulated per-step change of the memory matrix. Rows that received any
// feedback are flagged; untouched rows stay all-zero.
class MemoryDelta {
 public:
  MemoryDelta() = default;
  MemoryDelta(std::uint32_t rows, std::uint32_t cols);

  std::uint32_t rows() const { return rows_; }
  std::uint32_t cols() const { return cols_; }

  std::int32_t at(std::uint32_t j, std::uint32_t k) const {
    return values_[std::size_t{j} * cols_ + k];
  }
  std::span<std::int32_t> mutable_row(std::uint32_t j) {
    touched_[j] = 1;
    return {values_.data() + std::size_t{j} * cols_, cols_};
  }
  std::span<const std::int32_t> row(std::uint32_t j) const {
    return {values_.data() + std::size_t{j} * cols_, cols_};
  }
  bool touched(std::uint32_t j) const { return touched_[j] != 0; }

  // Zeroes touched rows only.
  void clear();

 private:
  std::uint32_t rows_ = 0;
  std::uint32_t cols_ = 0;
  std::vector<std::int32_t> values_;
  std::vector<std::uint8_t> touched_;
};

// m x n signed clause weights plus the mask of weights that training may not
// change (all set in vanilla mode).
class WeightMatrix {
 public:
  WeightMatrix() = default;
  WeightMatrix(std::uint32_t outputs, std::uint32_t clauses);
  WeightMatrix(std::uint32_t outputs, std::uint32_t clauses, std::vector<std::int32_t> weights,
               BitMatrix frozen);

  std::uint32_t rows() const { return rows_; }
  std::uint32_t cols() const { return cols_; }

  std::int32_t at(std::uint32_t i, std::uint32_t j) const {
    return weights_[std::size_t{i} * cols_ + j];
  }
  void set(std::uint32_t i, std::uint32_t j, std::int32_t w) {
    weights_[std::size_t{i} * cols_ + j] = w;
  }
  bool frozen(std::uint32_t i, std::uint32_t j) const { return frozen_.test(i, j); }
  void set_frozen(std::uint32_t i, std::uint32_t j, bool value) { frozen_.set(i, j, value); }

  // A (i, j) pair takes part in feedback unless its weight is a frozen zero;
  // frozen zeros are how vanilla mode blocks clause sharing.
  bool participates(std::uint32_t i, std::uint32_t j) const {
    return !(at(i, j) == 0 && frozen(i, j));
  }

  std::span<const std::int32_t> row(std::uint32_t i) const {
    return {weights_.data() + std::size_t{i} * cols_, cols_};
  }
  std::span<const std::int32_t> values() const { return weights_; }
  const BitMatrix& frozen_mask() const { return frozen_; }

  friend bool operator==(const WeightMatrix&, const WeightMatrix&) = default;

 private:
  std::uint32_t rows_ = 0;
  std::uint32_t cols_ = 0;
  std::vector<std::int32_t> weights_;
  BitMatrix frozen_;
};

class Model {
 public:
  Model(Config config, MemoryMatrix memory, WeightMatrix weights);

  const Config& config() const { return config_; }
  const MemoryMatrix& memory() const { return memory_; }
  const WeightMatrix& weights() const { return weights_; }
  WeightMatrix& mutable_weights() { return weights_; }

  // Packed Include bits, kept equal to action_map(memory()).
  const BitMatrix& actions() const { return actions_; }

  void set_state(std::uint32_t j, std::uint32_t k, std::uint32_t state);

  // C <- clip(C + delta, lo, hi) on touched rows, then re-derives actions.
  // Throws InvariantError if a resulting state leaves [1, 2N].
  void apply_memory_delta(const MemoryDelta& delta);
  void apply_memory_delta(const MemoryDelta& delta, std::int64_t lo, std::int64_t hi);

  friend bool operator==(const Model& a, const Model& b) {
    return a.config_ == b.config_ && a.memory_ == b.memory_ && a.weights_ == b.weights_;
  }

 private:
  void refresh_actions(std::uint32_t j);

  Config config_;
  MemoryMatrix memory_;
  WeightMatrix weights_;
  BitMatrix actions_;
};

// [x, NOT x]; length 2 * x.size().
BitVector literalize(const BitVector& x);

// Include (1) where state >= N + 1, Exclude (0) where state <= N.
BitMatrix action_map(const MemoryMatrix& memory);

// c_j = 1 iff no included literal is 0.
BitVector clause_outputs(const BitMatrix& actions, const BitVector& literals,
                         EmptyClauseOutput empty = EmptyClauseOutput::kTrue);

// v = W c.
std::vector<std::int64_t> vote_sums(const WeightMatrix& weights, const BitVector& clauses);

// u_i = (v_i >= 0).
BitVector unit_step(std::span<const std::int64_t> votes);

struct Prediction {
  BitVector outputs;
  std::vector<std::int64_t> votes;
};

Prediction predict_votes(const Model& model, const BitVector& x,
                         EmptyClauseOutput empty = EmptyClauseOutput::kTrue);
BitVector predict(const Model& model, const BitVector& x,
                  EmptyClauseOutput empty = EmptyClauseOutput::kTrue);

// Coalesced init: every state at N (all clauses empty), weights uniform over
// {-1, +1}, nothing frozen.
Model init_coalesced(const Config& config, const RandomSource& rng);
Model init_coalesced(const Config& config);

// Vanilla init: clause partition p of size n/m serves output p only, half
// with weight +1 and half -1; every weight is frozen.
Model init_vanilla(const Config& config);

struct RenderedClause {
  std::uint32_t index = 0;
  std::string conjunction;            // "x1 AND NOT x2", or "TRUE" when empty
  std::vector<std::int32_t> weights;  // one per output

  std::int32_t max_abs_weight() const;
  std::string to_string() const;
};

// Feature k is named names[k] when names are given, else "x<k+1>".
RenderedClause render_clause(const Model& model, std::uint32_t j,
                             const std::vector<std::string>* names = nullptr);

}  // namespace cotm

#endif  // COTM_MODEL_HPP_
