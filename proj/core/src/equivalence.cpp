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

#include "cotm/equivalence.hpp"

#include <memory>
#include <random>
#include <sstream>

#include "cotm/learn.hpp"
#include "cotm/model.hpp"
#include "cotm/oracle.hpp"
#include "cotm/thread_pool.hpp"

namespace cotm {
namespace {

using oracle::IntMatrix;
using oracle::IntVector;

std::uint32_t pick(std::mt19937_64& gen, std::uint32_t lo, std::uint32_t hi) {
  return std::uniform_int_distribution<std::uint32_t>(lo, hi)(gen);
}

std::string idx(std::size_t a) { return "[" + std::to_string(a) + "]"; }
std::string idx(std::size_t a, std::size_t b) { return idx(a) + idx(b); }

std::string bits_string(const IntVector& v) {
  std::string s;
  for (auto b : v) s += b != 0 ? '1' : '0';
  return s;
}

void dump_matrix(std::ostringstream& os, const char* name, const IntMatrix& mat) {
  os << name << ":\n";
  for (const auto& row : mat) {
    os << "  ";
    for (std::size_t k = 0; k < row.size(); ++k) os << (k ? " " : "") << row[k];
    os << "\n";
  }
}

struct Instance {
  Config config;
  bool vanilla = false;
  std::unique_ptr<Model> model;
};

Instance make_instance(const EquivalenceOptions& opt, std::uint64_t seed, std::uint32_t number,
                       std::mt19937_64& gen) {
  Instance inst;
  Config& c = inst.config;
  c.n_outputs = pick(gen, 1, opt.max_outputs);
  inst.vanilla = number % 5 == 4 && 2 * c.n_outputs <= opt.max_clauses;
  if (inst.vanilla) {
    c.n_clauses = 2 * c.n_outputs * pick(gen, 1, opt.max_clauses / (2 * c.n_outputs));
  } else {
    c.n_clauses = pick(gen, 1, opt.max_clauses);
  }
  c.n_inputs = pick(gen, 1, opt.max_inputs);
  c.memory_depth = pick(gen, 1, opt.max_depth);
  c.voting_margin = pick(gen, 1, opt.max_margin);
  static constexpr double kSpecificities[] = {1.0, 2.0, 4.0};
  c.specificity = kSpecificities[pick(gen, 0, 2)];
  c.multiclass_scalar =
      c.n_outputs >= 2 && pick(gen, 0, 1) == 1 ? one_hot_multiclass_scalar(c.n_outputs) : 1.0;
  c.boost_true_positive = pick(gen, 0, 1) == 1;
  c.seed = seed;

  if (inst.vanilla) {
    inst.model = std::make_unique<Model>(init_vanilla(c));
  } else if (pick(gen, 0, 1) == 0) {
    inst.model = std::make_unique<Model>(init_coalesced(c));
  } else {
    // Arbitrary weights, including zeros and a sprinkling of frozen entries.
    std::vector<std::int32_t> w(std::size_t{c.n_outputs} * c.n_clauses);
    BitMatrix frozen(c.n_outputs, c.n_clauses);
    for (std::size_t p = 0; p < w.size(); ++p) {
      w[p] = static_cast<std::int32_t>(pick(gen, 0, 6)) - 3;
      if (pick(gen, 0, 3) == 0) frozen.set(p / c.n_clauses, p % c.n_clauses);
    }
    inst.model = std::make_unique<Model>(
        c, MemoryMatrix(c.n_clauses, c.n_literals(), c.memory_depth, c.memory_depth),
        WeightMatrix(c.n_outputs, c.n_clauses, std::move(w), std::move(frozen)));
  }
  // Start from scattered states so clipping and Include bits are exercised early.
  for (std::uint32_t j = 0; j < c.n_clauses; ++j) {
    for (std::uint32_t k = 0; k < c.n_literals(); ++k) {
      inst.model->set_state(j, k, pick(gen, 1, c.max_state()));
    }
  }
  return inst;
}

IntVector random_bits(std::mt19937_64& gen, std::size_t count) {
  IntVector v(count);
  for (auto& b : v) b = pick(gen, 0, 1);
  return v;
}

BitVector to_bits(const IntVector& v) {
  BitVector b(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) b.set(i, v[i] != 0);
  return b;
}

void commit(Model& model, const TrainScratch& scratch, Fault fault) {
  if (fault == Fault::kNone) {
    commit_example(model, scratch);
    return;
  }
  WeightMatrix& w = model.mutable_weights();
  for (std::uint32_t i = 0; i < w.rows(); ++i) {
    for (std::uint32_t j = 0; j < w.cols(); ++j) {
      w.set(i, j, w.at(i, j) + scratch.weight_delta[std::size_t{i} * w.cols() + j]);
    }
  }
  model.apply_memory_delta(scratch.memory_delta, 1,
                           static_cast<std::int64_t>(model.config().max_state()) - 1);
}

class Checker {
 public:
  std::optional<Divergence> found;

  void expect(const std::string& matrix, const std::string& index, std::int64_t expected,
              std::int64_t actual) {
    if (found || expected == actual) return;
    Divergence d;
    d.matrix = matrix;
    d.index = index;
    d.expected = expected;
    d.actual = actual;
    found = d;
  }
};

}  // namespace

std::string Divergence::summary() const {
  return "divergence: seed " + std::to_string(seed) + ", instance " + std::to_string(instance) +
         ", step " + std::to_string(step) + ", matrix " + matrix + index + ": oracle " +
         std::to_string(expected) + ", engine " + std::to_string(actual);
}

EquivalenceReport run_equivalence(const EquivalenceOptions& opt,
                                  const std::function<void(std::uint32_t)>& progress) {
  EquivalenceReport report;
  std::unique_ptr<ThreadPool> pool;
  if (opt.threads > 1) pool = std::make_unique<ThreadPool>(opt.threads);
  const std::uint32_t seeds = opt.seeds == 0 ? 1 : opt.seeds;

  for (std::uint32_t number = 0; number < opt.instances; ++number) {
    const std::uint64_t seed = opt.base_seed + number % seeds;
    std::mt19937_64 gen(seed * 0x9E3779B97F4A7C15ull + number);
    Instance inst = make_instance(opt, seed, number, gen);
    Model& model = *inst.model;
    const Config& c = inst.config;
    const RandomSource rng(c.seed);
    oracle::OracleModel reference = oracle::OracleModel::from_model(model);
    report.vanilla_instances += inst.vanilla ? 1 : 0;

    std::ostringstream dump;
    dump << "instance " << number << " seed " << seed << (inst.vanilla ? " (vanilla)" : "") << "\n"
         << "config: " << to_string(c) << "\n";
    dump_matrix(dump, "initial C", reference.memory);
    dump_matrix(dump, "initial W", reference.weights);
    dump_matrix(dump, "frozen", reference.frozen);
    dump << "steps:\n";

    TrainScratch scratch(c);
    Checker check;
    std::uint32_t step = 0;
    for (; step < opt.steps && !check.found; ++step) {
      // Prediction on an unrelated input.
      const IntVector probe = random_bits(gen, c.n_inputs);
      const IntVector want = oracle::oracle_predict(reference, probe);
      const BitVector got = predict(model, to_bits(probe));
      for (std::uint32_t i = 0; i < c.n_outputs; ++i) check.expect("y_hat", idx(i), want[i], got.test(i));
      ++report.predictions;

      const IntVector x = random_bits(gen, c.n_inputs);
      IntVector y(c.n_outputs, 0);
      if (c.multiclass_scalar < 1.0) {
        y[pick(gen, 0, c.n_outputs - 1)] = 1;
      } else {
        y = random_bits(gen, c.n_outputs);
      }
      const StepKey key{step, number};
      dump << "  " << step << ": key=(" << key.epoch << "," << key.example << ") x=" << bits_string(x)
           << " y=" << bits_string(y) << " probe=" << bits_string(probe) << "\n";

      const oracle::StepTrace tr = oracle::oracle_fit_example(reference, x, y, rng, key);
      plan_example(model, to_bits(x), to_bits(y), rng, key, scratch, pool.get());
      commit(model, scratch, opt.fault);
      ++report.steps;

      for (std::uint32_t j = 0; j < c.n_clauses; ++j) check.expect("c", idx(j), tr.clauses[j], scratch.clauses.test(j));
      for (std::uint32_t i = 0; i < c.n_outputs; ++i) {
        check.expect("v", idx(i), tr.votes[i], scratch.votes[i]);
        for (std::uint32_t j = 0; j < c.n_clauses; ++j) {
          check.expect("R1", idx(i, j), tr.type_i[i][j], scratch.type_i.test(i, j));
          check.expect("R2", idx(i, j), tr.type_ii[i][j], scratch.type_ii.test(i, j));
          check.expect("dW", idx(i, j), tr.weight_delta[i][j],
                       scratch.weight_delta[std::size_t{i} * c.n_clauses + j]);
        }
      }
      for (std::uint32_t j = 0; j < c.n_clauses; ++j) {
        for (std::uint32_t k = 0; k < c.n_literals(); ++k) {
          check.expect("dC", idx(j, k), tr.memory_delta[j][k], scratch.memory_delta.at(j, k));
          check.expect("C", idx(j, k), reference.memory[j][k], model.memory().at(j, k));
        }
      }
      for (std::uint32_t i = 0; i < c.n_outputs; ++i) {
        for (std::uint32_t j = 0; j < c.n_clauses; ++j) {
          check.expect("W", idx(i, j), reference.weights[i][j], model.weights().at(i, j));
        }
      }
    }
    report.instances = number + 1;
    if (check.found) {
      Divergence d = *check.found;
      d.seed = seed;
      d.instance = number;
      d.step = step - 1;
      dump_matrix(dump, "oracle C after step", reference.memory);
      dump_matrix(dump, "oracle W after step", reference.weights);
      d.dump = dump.str();
      report.divergence = std::move(d);
      return report;
    }
    if (progress) progress(number + 1);
  }
  return report;
}

}  // namespace cotm
