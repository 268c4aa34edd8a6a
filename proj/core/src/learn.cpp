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

#include "cotm/learn.hpp"

#include <algorithm>
#include <bit>
#include <cstdlib>
#include <numeric>

#include "cotm/errors.hpp"
#include "pack.hpp"
#include "wide.hpp"

namespace cotm {
namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw ShapeError(what);
}

// Probability thresholds shared by the granular and fused paths.
double ia_probability(double s) { return (s - 1.0) / s; }
double ib_probability(double s) { return 1.0 / s; }

// Calls fn(k) for every set bit k of `words`, limited to the first `bits`.
template <typename Fn>
inline void for_each_bit(const std::uint64_t* words, std::size_t n_words, Fn&& fn) {
  for (std::size_t w = 0; w < n_words; ++w) {
    std::uint64_t bits = words[w];
    while (bits != 0) {
      fn(w * kWordBits + static_cast<std::size_t>(std::countr_zero(bits)));
      bits &= bits - 1;
    }
  }
}

}  // namespace

std::vector<std::int32_t> margins(const BitVector& y, std::uint32_t t) {
  std::vector<std::int32_t> q(y.size());
  const auto margin = static_cast<std::int32_t>(t);
  for (std::size_t i = 0; i < y.size(); ++i) q[i] = y.test(i) ? margin : -margin;
  return q;
}

std::vector<double> update_probabilities(std::span<const std::int64_t> votes,
                                         std::span<const std::int32_t> margins, std::uint32_t t) {
  if (t == 0) throw ConfigError("update_probabilities: voting margin t must be >= 1");
  require(votes.size() == margins.size(), "update_probabilities: votes and margins differ in length");
  const auto bound = static_cast<std::int64_t>(t);
  std::vector<double> d(votes.size());
  for (std::size_t i = 0; i < votes.size(); ++i) {
    const std::int64_t clipped = std::clamp(votes[i], -bound, bound);
    d[i] = static_cast<double>(std::llabs(margins[i] - clipped)) / (2.0 * static_cast<double>(t));
  }
  return d;
}

BitMatrix select_type_i(const WeightMatrix& weights, const BitVector& y,
                        std::span<const double> probabilities, const RandomSource& rng,
                        StepKey key) {
  require(y.size() == weights.rows() && probabilities.size() == weights.rows(),
          "select_type_i: y / d length does not match the weight matrix");
  BitMatrix r(weights.rows(), weights.cols());
  for (std::uint32_t i = 0; i < weights.rows(); ++i) {
    const Threshold gate(probabilities[i]);
    for (std::uint32_t j = 0; j < weights.cols(); ++j) {
      if (!weights.participates(i, j)) continue;
      if (y.test(i) != (weights.at(i, j) >= 0)) continue;
      if (gate.accept(rng.pair_bits(Site::kTypeI, key, i, j))) r.set(i, j);
    }
  }
  return r;
}

BitMatrix select_type_ii(const WeightMatrix& weights, const BitVector& y,
                         std::span<const double> probabilities, double multiclass_scalar,
                         const RandomSource& rng, StepKey key) {
  require(y.size() == weights.rows() && probabilities.size() == weights.rows(),
          "select_type_ii: y / d length does not match the weight matrix");
  BitMatrix r(weights.rows(), weights.cols());
  for (std::uint32_t i = 0; i < weights.rows(); ++i) {
    const Threshold gate(probabilities[i] * multiclass_scalar);
    for (std::uint32_t j = 0; j < weights.cols(); ++j) {
      if (!weights.participates(i, j)) continue;
      if (y.test(i) == (weights.at(i, j) >= 0)) continue;
      if (gate.accept(rng.pair_bits(Site::kTypeII, key, i, j))) r.set(i, j);
    }
  }
  return r;
}

BitMatrix feedback_type_ia(const BitVector& clauses, const BitVector& literals, bool boost,
                           double specificity, const RandomSource& rng, StepKey key,
                           std::uint32_t output) {
  const auto n_lit = static_cast<std::uint32_t>(literals.size());
  const Threshold gate(ia_probability(specificity));
  BitMatrix f(clauses.size(), n_lit);
  for (std::uint32_t j = 0; j < clauses.size(); ++j) {
    if (!clauses.test(j)) continue;
    for (std::uint32_t k = 0; k < n_lit; ++k) {
      if (!literals.test(k)) continue;
      if (boost || gate.accept(rng.literal_bits(Site::kTypeIa, key, output, j, k, n_lit))) {
        f.set(j, k);
      }
    }
  }
  return f;
}

BitMatrix feedback_type_ib(const BitVector& clauses, const BitVector& literals,
                           double specificity, const RandomSource& rng, StepKey key,
                           std::uint32_t output) {
  if (!(specificity >= 1.0)) throw ConfigError("feedback_type_ib: specificity must be >= 1");
  const auto n_lit = static_cast<std::uint32_t>(literals.size());
  const Threshold gate(ib_probability(specificity));
  BitMatrix f(clauses.size(), n_lit);
  for (std::uint32_t j = 0; j < clauses.size(); ++j) {
    const bool fires = clauses.test(j);
    for (std::uint32_t k = 0; k < n_lit; ++k) {
      if (fires && literals.test(k)) continue;
      if (gate.accept(rng.literal_bits(Site::kTypeIb, key, output, j, k, n_lit))) f.set(j, k);
    }
  }
  return f;
}

BitMatrix feedback_type_ii(const BitVector& clauses, const BitVector& literals,
                           const BitMatrix& actions) {
  require(actions.rows() == clauses.size() && actions.cols() == literals.size(),
          "feedback_type_ii: action matrix shape mismatch");
  BitMatrix f(clauses.size(), literals.size());
  for (std::uint32_t j = 0; j < clauses.size(); ++j) {
    if (!clauses.test(j)) continue;
    for (std::uint32_t k = 0; k < literals.size(); ++k) {
      if (!literals.test(k) && !actions.test(j, k)) f.set(j, k);
    }
  }
  return f;
}

MemoryDelta combine_feedback(const BitMatrix& type_i, const BitMatrix& type_ii,
                             std::span<const BitMatrix> type_ia, std::span<const BitMatrix> type_ib,
                             std::span<const BitMatrix> type_ii_feedback) {
  const std::size_t m = type_i.rows();
  require(type_ii.rows() == m && type_ia.size() == m && type_ib.size() == m &&
              type_ii_feedback.size() == m,
          "combine_feedback: need one feedback matrix per output");
  const auto n = static_cast<std::uint32_t>(type_i.cols());
  const auto n_lit = static_cast<std::uint32_t>(m > 0 ? type_ia[0].cols() : 0);
  MemoryDelta delta(n, n_lit);
  for (std::uint32_t i = 0; i < m; ++i) {
    for (std::uint32_t j = 0; j < n; ++j) {
      const bool r1 = type_i.test(i, j);
      const bool r2 = type_ii.test(i, j);
      if (!r1 && !r2) continue;
      auto row = delta.mutable_row(j);
      for (std::uint32_t k = 0; k < n_lit; ++k) {
        if (r1) row[k] += static_cast<int>(type_ia[i].test(j, k)) - type_ib[i].test(j, k);
        if (r2) row[k] += static_cast<int>(type_ii_feedback[i].test(j, k));
      }
    }
  }
  return delta;
}

void apply_memory_update(Model& model, const MemoryDelta& delta) { model.apply_memory_delta(delta); }

void apply_weight_update(WeightMatrix& weights, const BitMatrix& type_i, const BitMatrix& type_ii,
                         const BitVector& clauses, const BitVector& y) {
  require(type_i.rows() == weights.rows() && type_i.cols() == weights.cols() &&
              type_ii.rows() == weights.rows() && type_ii.cols() == weights.cols() &&
              clauses.size() == weights.cols() && y.size() == weights.rows(),
          "apply_weight_update: shape mismatch");
  for (std::uint32_t i = 0; i < weights.rows(); ++i) {
    const int direction = y.test(i) ? 1 : -1;
    for (std::uint32_t j = 0; j < weights.cols(); ++j) {
      if (!clauses.test(j) || weights.frozen(i, j)) continue;
      const int selected = static_cast<int>(type_i.test(i, j)) + type_ii.test(i, j);
      if (selected != 0) weights.set(i, j, weights.at(i, j) + selected * direction);
    }
  }
}

// ---------------------------------------------------------------------------
// Fused step

TrainScratch::TrainScratch(const Config& config)
    : literals(config.n_literals()),
      clauses(config.n_clauses),
      votes(config.n_outputs),
      margins(config.n_outputs),
      probabilities(config.n_outputs),
      type_i(config.n_outputs, config.n_clauses),
      type_ii(config.n_outputs, config.n_clauses),
      memory_delta(config.n_clauses, config.n_literals()),
      weight_delta(std::size_t{config.n_outputs} * config.n_clauses, 0) {}

bool TrainScratch::fits(const Config& config) const {
  return type_i.rows() == config.n_outputs && type_i.cols() == config.n_clauses &&
         memory_delta.rows() == config.n_clauses && memory_delta.cols() == config.n_literals();
}

void plan_example(const Model& model, const BitVector& x, const BitVector& y,
                  const RandomSource& rng, StepKey key, TrainScratch& s, ThreadPool* pool) {
  const Config& cfg = model.config();
  require(x.size() == cfg.n_inputs, "fit_example: input has " + std::to_string(x.size()) +
                                        " bits, model expects " + std::to_string(cfg.n_inputs));
  require(y.size() == cfg.n_outputs, "fit_example: target has " + std::to_string(y.size()) +
                                         " bits, model expects " + std::to_string(cfg.n_outputs));
  if (!s.fits(cfg)) s = TrainScratch(cfg);
  s.memory_delta.clear();

  const WeightMatrix& weights = model.weights();
  const std::uint32_t m = cfg.n_outputs;
  const std::uint32_t n = cfg.n_clauses;
  const std::uint32_t n_lit = cfg.n_literals();

  s.literals = literalize(x);
  s.clauses = clause_outputs(model.actions(), s.literals);
  s.votes = vote_sums(weights, s.clauses);
  s.margins = margins(y, cfg.voting_margin);
  s.probabilities = update_probabilities(s.votes, s.margins, cfg.voting_margin);

  // Clause selection, built a word at a time. Each output row draws n values
  // per site in one batch.
  s.type_i.reset();
  s.type_ii.reset();
  std::fill(s.weight_delta.begin(), s.weight_delta.end(), 0);
  const std::size_t clause_words = words_for(n);
  const std::uint64_t clause_tail = tail_mask(n);
  const auto fired = s.clauses.words();
  const BitMatrix& frozen = weights.frozen_mask();
  const std::uint32_t pair_blocks = (n + 3) / 4;
  std::vector<std::uint32_t> draws(std::size_t{pair_blocks} * 4);
  std::vector<std::uint64_t> nonnegative(clause_words);
  std::vector<std::uint64_t> eligible(clause_words);
  // Rows that receive any memory feedback this step.
  std::vector<std::uint64_t> touched(clause_words, 0);

  auto select = [&](Site site, const Threshold& gate, std::uint32_t i, bool agree,
                    std::span<std::uint64_t> selected) {
    bool any = false;
    for (std::size_t wi = 0; wi < clause_words; ++wi) {
      eligible[wi] &= agree ? ~(nonnegative[wi] ^ (y.test(i) ? ~0ull : 0ull))
                            : (nonnegative[wi] ^ (y.test(i) ? ~0ull : 0ull));
      any = any || eligible[wi] != 0;
    }
    if (gate.limit() == 0 || !any) return;
    rng.fill_blocks(site, key, i, 0, pair_blocks, draws);
    for (std::size_t wi = 0; wi < clause_words; ++wi) {
      if (eligible[wi] == 0) continue;
      const std::size_t begin = wi * kWordBits;
      const std::size_t len = std::min<std::size_t>(kWordBits, n - begin);
      const std::uint64_t limit = gate.limit();
      selected[wi] = eligible[wi] & detail::pack_word(len, [&](std::size_t b) {
                       return draws[begin + b] < limit;
                     });
    }
  };

  std::vector<std::uint64_t> participating(clause_words);
  for (std::uint32_t i = 0; i < m; ++i) {
    auto w = weights.row(i);
    auto fr = frozen.row(i);
    for (std::size_t wi = 0; wi < clause_words; ++wi) {
      const std::size_t begin = wi * kWordBits;
      const std::size_t len = std::min<std::size_t>(kWordBits, n - begin);
      const std::uint64_t zero =
          detail::pack_word(len, [&](std::size_t b) { return w[begin + b] == 0; });
      nonnegative[wi] = detail::pack_word(len, [&](std::size_t b) { return w[begin + b] >= 0; });
      participating[wi] = ~(zero & fr[wi]) & (wi + 1 == clause_words ? clause_tail : ~0ull);
    }
    auto r1 = s.type_i.mutable_row(i);
    auto r2 = s.type_ii.mutable_row(i);
    std::copy(participating.begin(), participating.end(), eligible.begin());
    select(Site::kTypeI, Threshold(s.probabilities[i]), i, true, r1);
    std::copy(participating.begin(), participating.end(), eligible.begin());
    select(Site::kTypeII, Threshold(s.probabilities[i] * cfg.multiclass_scalar), i, false, r2);

    const std::int8_t direction = y.test(i) ? 1 : -1;
    for (std::size_t wi = 0; wi < clause_words; ++wi) {
      touched[wi] |= r1[wi] | (r2[wi] & fired[wi]);
      const std::uint64_t update = (r1[wi] | r2[wi]) & fired[wi] & ~fr[wi];
      for_each_bit(&update, 1, [&](std::size_t b) {
        s.weight_delta[std::size_t{i} * n + wi * kWordBits + b] = direction;
      });
    }
  }

  // Memory feedback, one clause row at a time. Rows are independent, so any
  // split across threads yields the same delta.
  const std::uint32_t row_blocks = RandomSource::blocks_per_row(n_lit);
  const std::size_t lit_words = s.literals.words().size();
  const std::uint64_t last_mask = tail_mask(n_lit);
  const Threshold gate_ia(ia_probability(cfg.specificity));
  const Threshold gate_ib(ib_probability(cfg.specificity));
  const bool boost = cfg.boost_true_positive;
  const BitMatrix& actions = model.actions();

  parallel_for(pool, n, [&](std::size_t begin, std::size_t end) {
    std::vector<std::uint32_t> ia_draws(std::size_t{m} * row_blocks * 4);
    std::vector<std::uint32_t> ib_draws(std::size_t{m} * row_blocks * 4);
    std::vector<RandomSource::BlockRun> runs;
    std::vector<std::uint64_t> false_lits(lit_words);
    std::vector<std::uint64_t> widen(lit_words);
    auto lits = s.literals.words();
    for (std::size_t w = 0; w < lit_words; ++w) {
      false_lits[w] = ~lits[w] & (w + 1 == lit_words ? last_mask : ~std::uint64_t{0});
    }
    for (std::size_t wi = begin / kWordBits; wi * kWordBits < end; ++wi) {
      std::uint64_t rows = touched[wi];
      const std::size_t lo = wi * kWordBits;
      if (lo < begin) rows &= ~0ull << (begin - lo);
      if (end - lo < kWordBits) rows &= (std::uint64_t{1} << (end - lo)) - 1;
      for_each_bit(&rows, 1, [&](std::size_t b) {
        const auto j = static_cast<std::uint32_t>(lo + b);
        const bool fires = s.clauses.test(j);
        auto row = s.memory_delta.mutable_row(j);
        const std::uint32_t first = j * row_blocks;

        runs.clear();
        std::int32_t type_ii_count = 0;
        for (std::uint32_t i = 0; i < m; ++i) {
          if (s.type_i.test(i, j)) runs.push_back({i, first});
          type_ii_count += fires && s.type_ii.test(i, j);
        }
        const auto n_runs = static_cast<std::uint32_t>(runs.size());
        if (n_runs != 0) {
          rng.fill_block_runs(Site::kTypeIb, key, runs, row_blocks, ib_draws);
          if (fires) {
            if (boost) {
              for_each_bit(lits.data(), lit_words, [&](std::size_t k) {
                row[k] += static_cast<std::int32_t>(n_runs);
              });
            } else {
              rng.fill_block_runs(Site::kTypeIa, key, runs, row_blocks, ia_draws);
              for (std::uint32_t r = 0; r < n_runs; ++r) {
                const std::uint32_t* ia = ia_draws.data() + std::size_t{r} * row_blocks * 4;
                for_each_bit(lits.data(), lit_words, [&](std::size_t k) {
                  row[k] += static_cast<std::int32_t>(gate_ia.accept(ia[k]));
                });
              }
            }
            for (std::uint32_t r = 0; r < n_runs; ++r) {
              const std::uint32_t* ib = ib_draws.data() + std::size_t{r} * row_blocks * 4;
              for_each_bit(false_lits.data(), lit_words, [&](std::size_t k) {
                row[k] -= static_cast<std::int32_t>(gate_ib.accept(ib[k]));
              });
            }
          } else {
            for (std::uint32_t r = 0; r < n_runs; ++r) {
              const std::uint32_t* ib = ib_draws.data() + std::size_t{r} * row_blocks * 4;
              for (std::uint32_t k = 0; k < n_lit; ++k) {
                row[k] -= static_cast<std::int32_t>(gate_ib.accept(ib[k]));
              }
            }
          }
        }
        if (type_ii_count != 0) {
          // F^II is the same matrix for every output, so selections just add up.
          auto inc = actions.row(j);
          for (std::size_t w = 0; w < lit_words; ++w) widen[w] = false_lits[w] & ~inc[w];
          for_each_bit(widen.data(), lit_words, [&](std::size_t k) { row[k] += type_ii_count; });
        }
      });
    }
  });
}

void commit_example(Model& model, const TrainScratch& s) {
  WeightMatrix& weights = model.mutable_weights();
  const std::uint32_t n = weights.cols();
  for (std::uint32_t i = 0; i < weights.rows(); ++i) {
    for (std::uint32_t j = 0; j < n; ++j) {
      const std::int8_t dw = s.weight_delta[std::size_t{i} * n + j];
      if (dw != 0) weights.set(i, j, weights.at(i, j) + dw);
    }
  }
  model.apply_memory_delta(s.memory_delta);
}

void fit_example(Model& model, const BitVector& x, const BitVector& y, const RandomSource& rng,
                 StepKey key, TrainScratch& scratch, ThreadPool* pool) {
  plan_example(model, x, y, rng, key, scratch, pool);
  commit_example(model, scratch);
}

void fit_example(Model& model, const BitVector& x, const BitVector& y, const RandomSource& rng,
                 StepKey key) {
  TrainScratch scratch(model.config());
  fit_example(model, x, y, rng, key, scratch);
}

std::vector<std::uint32_t> epoch_order(const RandomSource& rng, std::uint32_t epoch,
                                       std::size_t count, bool shuffle) {
  std::vector<std::uint32_t> order(count);
  std::iota(order.begin(), order.end(), 0u);
  if (!shuffle) return order;
  for (std::size_t p = count; p-- > 1;) {
    const auto pick = static_cast<std::size_t>(detail::mul_hi(rng.shuffle_bits(epoch, p), p + 1));
    std::swap(order[p], order[pick]);
  }
  return order;
}

void fit_epoch(Model& model, const Dataset& data, const RandomSource& rng, std::uint32_t epoch,
               bool shuffle, ThreadPool* pool) {
  if (data.empty()) throw InputError("fit_epoch: dataset has no examples");
  const Config& cfg = model.config();
  if (data.n_inputs() != cfg.n_inputs || data.n_outputs() != cfg.n_outputs) {
    throw ShapeError("fit_epoch: dataset is " + std::to_string(data.n_inputs()) + " -> " +
                     std::to_string(data.n_outputs()) + ", model is " +
                     std::to_string(cfg.n_inputs) + " -> " + std::to_string(cfg.n_outputs));
  }
  TrainScratch scratch(cfg);
  for (std::uint32_t idx : epoch_order(rng, epoch, data.size(), shuffle)) {
    fit_example(model, data.input(idx), data.output(idx), rng, {epoch, idx}, scratch, pool);
  }
}

}  // namespace cotm
