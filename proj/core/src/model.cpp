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

#include "cotm/model.hpp"

#include <algorithm>
#include <bit>
#include <cstdlib>
#include <sstream>

#include "cotm/errors.hpp"
#include "pack.hpp"

namespace cotm {
namespace {

std::string where(std::uint32_t j, std::uint32_t k) {
  return "C[" + std::to_string(j) + "][" + std::to_string(k) + "]";
}

}  // namespace

// ---------------------------------------------------------------------------
// MemoryMatrix

MemoryMatrix::MemoryMatrix(std::uint32_t clauses, std::uint32_t literals, std::uint32_t depth,
                           std::uint32_t fill)
    : MemoryMatrix(clauses, literals, depth,
                   std::vector<std::uint32_t>(std::size_t{clauses} * literals, fill)) {}

MemoryMatrix::MemoryMatrix(std::uint32_t clauses, std::uint32_t literals, std::uint32_t depth,
                           std::vector<std::uint32_t> states)
    : rows_(clauses), cols_(literals), depth_(depth), states_(std::move(states)) {
  if (depth_ < 1) throw ConfigError("MemoryMatrix: depth must be >= 1");
  if (states_.size() != std::size_t{rows_} * cols_) {
    throw ShapeError("MemoryMatrix: expected " + std::to_string(std::size_t{rows_} * cols_) +
                     " states, got " + std::to_string(states_.size()));
  }
  check_invariants();
}

void MemoryMatrix::set(std::uint32_t j, std::uint32_t k, std::uint32_t state) {
  if (j >= rows_ || k >= cols_) throw ShapeError("MemoryMatrix::set: index out of range");
  if (state < 1 || state > max_state()) {
    throw InvariantError(where(j, k) + " = " + std::to_string(state) + " outside [1, " +
                         std::to_string(max_state()) + "]");
  }
  states_[std::size_t{j} * cols_ + k] = state;
}

void MemoryMatrix::check_row(std::uint32_t j) const {
  const std::uint32_t hi = max_state();
  auto r = row(j);
  for (std::uint32_t k = 0; k < cols_; ++k) {
    if (r[k] < 1 || r[k] > hi) {
      throw InvariantError(where(j, k) + " = " + std::to_string(r[k]) + " outside [1, " +
                           std::to_string(hi) + "]");
    }
  }
}

void MemoryMatrix::check_invariants() const {
  for (std::uint32_t j = 0; j < rows_; ++j) check_row(j);
}

// ---------------------------------------------------------------------------
// MemoryDelta

MemoryDelta::MemoryDelta(std::uint32_t rows, std::uint32_t cols)
    : rows_(rows), cols_(cols), values_(std::size_t{rows} * cols, 0), touched_(rows, 0) {}

void MemoryDelta::clear() {
  for (std::uint32_t j = 0; j < rows_; ++j) {
    if (touched_[j]) {
      auto r = std::span<std::int32_t>(values_.data() + std::size_t{j} * cols_, cols_);
      std::fill(r.begin(), r.end(), 0);
      touched_[j] = 0;
    }
  }
}

// ---------------------------------------------------------------------------
// WeightMatrix

WeightMatrix::WeightMatrix(std::uint32_t outputs, std::uint32_t clauses)
    : rows_(outputs),
      cols_(clauses),
      weights_(std::size_t{outputs} * clauses, 0),
      frozen_(outputs, clauses) {}

WeightMatrix::WeightMatrix(std::uint32_t outputs, std::uint32_t clauses,
                           std::vector<std::int32_t> weights, BitMatrix frozen)
    : rows_(outputs), cols_(clauses), weights_(std::move(weights)), frozen_(std::move(frozen)) {
  if (weights_.size() != std::size_t{rows_} * cols_) {
    throw ShapeError("WeightMatrix: expected " + std::to_string(std::size_t{rows_} * cols_) +
                     " weights, got " + std::to_string(weights_.size()));
  }
  if (frozen_.rows() != rows_ || frozen_.cols() != cols_) {
    throw ShapeError("WeightMatrix: frozen mask shape mismatch");
  }
}

// ---------------------------------------------------------------------------
// Model

Model::Model(Config config, MemoryMatrix memory, WeightMatrix weights)
    : config_(config), memory_(std::move(memory)), weights_(std::move(weights)) {
  config_.validate();
  if (memory_.rows() != config_.n_clauses || memory_.cols() != config_.n_literals() ||
      memory_.depth() != config_.memory_depth) {
    throw ShapeError("Model: memory matrix does not match config (" + to_string(config_) + ")");
  }
  if (weights_.rows() != config_.n_outputs || weights_.cols() != config_.n_clauses) {
    throw ShapeError("Model: weight matrix does not match config (" + to_string(config_) + ")");
  }
  actions_ = action_map(memory_);
}

void Model::refresh_actions(std::uint32_t j) {
  const std::uint32_t n_state = config_.memory_depth;
  auto states = memory_.row(j);
  auto bits = actions_.mutable_row(j);
  const std::size_t cols = states.size();
  for (std::size_t w = 0; w < bits.size(); ++w) {
    const std::size_t begin = w * kWordBits;
    const std::size_t len = std::min(kWordBits, cols - begin);
    bits[w] = detail::pack_word(len, [&](std::size_t b) { return states[begin + b] > n_state; });
  }
}

void Model::set_state(std::uint32_t j, std::uint32_t k, std::uint32_t state) {
  memory_.set(j, k, state);
  refresh_actions(j);
}

void Model::apply_memory_delta(const MemoryDelta& delta) {
  apply_memory_delta(delta, 1, config_.max_state());
}

namespace {

// states <- clip(states + delta, lo, hi), reporting the extremes written.
// States and deltas may not overlap, which lets the loop vectorize.
void clip_add(std::uint32_t* __restrict states, const std::int32_t* __restrict delta,
              std::uint32_t count, std::int64_t lo, std::int64_t hi, std::int64_t& low,
              std::int64_t& high) {
  std::int64_t mn = low;
  std::int64_t mx = high;
  for (std::uint32_t k = 0; k < count; ++k) {
    std::int64_t next = static_cast<std::int64_t>(states[k]) + delta[k];
    next = next < lo ? lo : next;
    next = next > hi ? hi : next;
    states[k] = static_cast<std::uint32_t>(next);
    mn = next < mn ? next : mn;
    mx = next > mx ? next : mx;
  }
  low = mn;
  high = mx;
}

}  // namespace

void Model::apply_memory_delta(const MemoryDelta& delta, std::int64_t lo, std::int64_t hi) {
  if (delta.rows() != memory_.rows() || delta.cols() != memory_.cols()) {
    throw ShapeError("Model::apply_memory_delta: delta shape mismatch");
  }
  const std::int64_t ceiling = memory_.max_state();
  for (std::uint32_t j = 0; j < memory_.rows(); ++j) {
    if (!delta.touched(j)) continue;
    std::int64_t low = ceiling;
    std::int64_t high = 1;
    clip_add(memory_.mutable_row(j).data(), delta.row(j).data(), memory_.cols(), lo, hi, low, high);
    if (low < 1 || high > ceiling) memory_.check_row(j);
    refresh_actions(j);
  }
}

// ---------------------------------------------------------------------------
// Inference

BitVector literalize(const BitVector& x) {
  const std::size_t o = x.size();
  BitVector out(2 * o);
  for (std::size_t k = 0; k < o; ++k) {
    const bool bit = x.test(k);
    out.set(k, bit);
    out.set(o + k, !bit);
  }
  return out;
}

BitMatrix action_map(const MemoryMatrix& memory) {
  memory.check_invariants();
  BitMatrix out(memory.rows(), memory.cols());
  const std::uint32_t n_state = memory.depth();
  for (std::uint32_t j = 0; j < memory.rows(); ++j) {
    auto states = memory.row(j);
    for (std::uint32_t k = 0; k < memory.cols(); ++k) {
      if (states[k] > n_state) out.set(j, k);
    }
  }
  return out;
}

BitVector clause_outputs(const BitMatrix& actions, const BitVector& literals,
                         EmptyClauseOutput empty) {
  if (actions.cols() != literals.size()) {
    throw ShapeError("clause_outputs: action matrix has " + std::to_string(actions.cols()) +
                     " literal columns, literal vector has " + std::to_string(literals.size()));
  }
  BitVector out(actions.rows());
  auto lits = literals.words();
  const std::size_t words = actions.words_per_row();
  for (std::size_t j = 0; j < actions.rows(); ++j) {
    auto inc = actions.row(j);
    std::uint64_t violated = 0;
    std::uint64_t any = 0;
    for (std::size_t w = 0; w < words && violated == 0; ++w) {
      violated |= inc[w] & ~lits[w];
      any |= inc[w];
    }
    if (violated != 0) continue;
    // No violation means every word was scanned, so `any` is complete.
    if (empty == EmptyClauseOutput::kZero && any == 0) continue;
    out.set(j);
  }
  return out;
}

std::vector<std::int64_t> vote_sums(const WeightMatrix& weights, const BitVector& clauses) {
  if (clauses.size() != weights.cols()) {
    throw ShapeError("vote_sums: " + std::to_string(weights.cols()) + " clause weights, " +
                     std::to_string(clauses.size()) + " clause outputs");
  }
  std::vector<std::int64_t> votes(weights.rows(), 0);
  auto words = clauses.words();
  for (std::uint32_t i = 0; i < weights.rows(); ++i) {
    auto w = weights.row(i);
    std::int64_t sum = 0;
    for (std::size_t wi = 0; wi < words.size(); ++wi) {
      std::uint64_t bits = words[wi];
      while (bits != 0) {
        const std::size_t j = wi * kWordBits + std::countr_zero(bits);
        sum += w[j];
        bits &= bits - 1;
      }
    }
    votes[i] = sum;
  }
  return votes;
}

BitVector unit_step(std::span<const std::int64_t> votes) {
  BitVector out(votes.size());
  for (std::size_t i = 0; i < votes.size(); ++i) out.set(i, votes[i] >= 0);
  return out;
}

Prediction predict_votes(const Model& model, const BitVector& x, EmptyClauseOutput empty) {
  if (x.size() != model.config().n_inputs) {
    throw ShapeError("predict: input has " + std::to_string(x.size()) + " bits, model expects " +
                     std::to_string(model.config().n_inputs));
  }
  const BitVector c = clause_outputs(model.actions(), literalize(x), empty);
  Prediction p;
  p.votes = vote_sums(model.weights(), c);
  p.outputs = unit_step(p.votes);
  return p;
}

BitVector predict(const Model& model, const BitVector& x, EmptyClauseOutput empty) {
  return predict_votes(model, x, empty).outputs;
}

// ---------------------------------------------------------------------------
// Construction

Model init_coalesced(const Config& config, const RandomSource& rng) {
  config.validate();
  MemoryMatrix memory(config.n_clauses, config.n_literals(), config.memory_depth,
                      config.memory_depth);
  WeightMatrix weights(config.n_outputs, config.n_clauses);
  for (std::uint32_t i = 0; i < config.n_outputs; ++i) {
    for (std::uint32_t j = 0; j < config.n_clauses; ++j) {
      // Top bit of the draw picks the sign.
      const std::uint32_t bits = rng.pair_bits(Site::kInit, {}, i, j);
      weights.set(i, j, (bits >> 31) ? 1 : -1);
    }
  }
  return Model(config, std::move(memory), std::move(weights));
}

Model init_coalesced(const Config& config) {
  return init_coalesced(config, RandomSource(config.seed));
}

Model init_vanilla(const Config& config) {
  config.validate();
  if (config.n_clauses % config.n_outputs != 0) {
    throw ConfigError("vanilla mode needs n_clauses divisible by n_outputs (n=" +
                      std::to_string(config.n_clauses) +
                      ", m=" + std::to_string(config.n_outputs) + ")");
  }
  const std::uint32_t part = config.n_clauses / config.n_outputs;
  if (part % 2 != 0) {
    throw ConfigError("vanilla mode needs an even number of clauses per output (got " +
                      std::to_string(part) + ")");
  }
  MemoryMatrix memory(config.n_clauses, config.n_literals(), config.memory_depth,
                      config.memory_depth);
  WeightMatrix weights(config.n_outputs, config.n_clauses);
  for (std::uint32_t i = 0; i < config.n_outputs; ++i) {
    for (std::uint32_t j = 0; j < config.n_clauses; ++j) {
      const std::uint32_t owner = j / part;
      if (owner == i) weights.set(i, j, (j % part) < part / 2 ? 1 : -1);
      weights.set_frozen(i, j, true);
    }
  }
  return Model(config, std::move(memory), std::move(weights));
}

// ---------------------------------------------------------------------------
// Rendering

std::int32_t RenderedClause::max_abs_weight() const {
  std::int32_t best = 0;
  for (std::int32_t w : weights) best = std::max(best, std::abs(w));
  return best;
}

std::string RenderedClause::to_string() const {
  std::ostringstream out;
  out << "#" << index << ": " << conjunction << " -> [";
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (i) out << ", ";
    out << (weights[i] > 0 ? "+" : "") << weights[i];
  }
  out << "]";
  return out.str();
}

RenderedClause render_clause(const Model& model, std::uint32_t j,
                             const std::vector<std::string>* names) {
  const Config& cfg = model.config();
  if (j >= cfg.n_clauses) {
    throw ShapeError("render_clause: clause " + std::to_string(j) + " out of range (n=" +
                     std::to_string(cfg.n_clauses) + ")");
  }
  if (names != nullptr && names->size() != cfg.n_inputs) {
    throw ShapeError("render_clause: " + std::to_string(names->size()) +
                     " feature names for " + std::to_string(cfg.n_inputs) + " inputs");
  }
  auto name = [&](std::uint32_t k) {
    return names != nullptr ? (*names)[k] : "x" + std::to_string(k + 1);
  };
  RenderedClause out;
  out.index = j;
  const BitMatrix& actions = model.actions();
  std::vector<std::string> terms;
  for (std::uint32_t k = 0; k < cfg.n_inputs; ++k) {
    if (actions.test(j, k)) terms.push_back(name(k));
    if (actions.test(j, cfg.n_inputs + k)) terms.push_back("NOT " + name(k));
  }
  if (terms.empty()) {
    out.conjunction = "TRUE";
  } else {
    for (std::size_t t = 0; t < terms.size(); ++t) {
      if (t) out.conjunction += " AND ";
      out.conjunction += terms[t];
    }
  }
  for (std::uint32_t i = 0; i < cfg.n_outputs; ++i) out.weights.push_back(model.weights().at(i, j));
  return out;
}

}  // namespace cotm
