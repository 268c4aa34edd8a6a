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

#include "cotm/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "cotm/errors.hpp"

namespace cotm::oracle {
namespace {

IntMatrix zeros(std::size_t rows, std::size_t cols) {
  return IntMatrix(rows, IntVector(cols, 0));
}

void check_size(const Config& c) {
  if (std::uint64_t{c.n_clauses} * c.n_inputs > kMaxCells) {
    throw ConfigError("oracle: refusing instance with n * o = " +
                      std::to_string(std::uint64_t{c.n_clauses} * c.n_inputs) + " > " +
                      std::to_string(kMaxCells));
  }
}

void check_shape(const OracleModel& model, const IntVector& x) {
  check_size(model.config);
  if (x.size() != model.config.n_inputs) {
    throw ShapeError("oracle: input has " + std::to_string(x.size()) + " entries, expected " +
                     std::to_string(model.config.n_inputs));
  }
}

// lits = [x, NOT x]
IntVector literals_of(const IntVector& x) {
  IntVector lits(2 * x.size());
  for (std::size_t k = 0; k < x.size(); ++k) {
    lits[k] = x[k] != 0 ? 1 : 0;
    lits[k + x.size()] = 1 - lits[k];
  }
  return lits;
}

// A = G(C)
IntMatrix include_actions(const OracleModel& model) {
  const auto n_clauses = model.memory.size();
  const std::int64_t depth = model.config.memory_depth;
  IntMatrix a = zeros(n_clauses, model.config.n_literals());
  for (std::size_t j = 0; j < n_clauses; ++j) {
    for (std::size_t k = 0; k < a[j].size(); ++k) {
      const std::int64_t state = model.memory[j][k];
      if (state < 1 || state > 2 * depth) {
        throw InvariantError("oracle: C[" + std::to_string(j) + "][" + std::to_string(k) +
                             "] = " + std::to_string(state) + " outside [1, 2N]");
      }
      a[j][k] = state >= depth + 1 ? 1 : 0;
    }
  }
  return a;
}

// c_j = AND_k Imply(a_jk, lit_k)
IntVector clause_values(const IntMatrix& actions, const IntVector& lits) {
  IntVector c(actions.size());
  for (std::size_t j = 0; j < actions.size(); ++j) {
    std::int64_t value = 1;
    for (std::size_t k = 0; k < lits.size(); ++k) {
      const std::int64_t implication = (actions[j][k] == 0 || lits[k] == 1) ? 1 : 0;
      value = value * implication;
    }
    c[j] = value;
  }
  return c;
}

// v = W c
IntVector matrix_vector(const IntMatrix& w, const IntVector& c) {
  IntVector v(w.size(), 0);
  for (std::size_t i = 0; i < w.size(); ++i) {
    for (std::size_t j = 0; j < c.size(); ++j) v[i] += w[i][j] * c[j];
  }
  return v;
}

}  // namespace

OracleModel OracleModel::from_model(const Model& model) {
  OracleModel out;
  out.config = model.config();
  const Config& c = out.config;
  out.memory = zeros(c.n_clauses, c.n_literals());
  for (std::uint32_t j = 0; j < c.n_clauses; ++j) {
    for (std::uint32_t k = 0; k < c.n_literals(); ++k) out.memory[j][k] = model.memory().at(j, k);
  }
  out.weights = zeros(c.n_outputs, c.n_clauses);
  out.frozen = zeros(c.n_outputs, c.n_clauses);
  for (std::uint32_t i = 0; i < c.n_outputs; ++i) {
    for (std::uint32_t j = 0; j < c.n_clauses; ++j) {
      out.weights[i][j] = model.weights().at(i, j);
      out.frozen[i][j] = model.weights().frozen(i, j) ? 1 : 0;
    }
  }
  return out;
}

Model OracleModel::to_model() const {
  const Config& c = config;
  std::vector<std::uint32_t> states;
  for (const auto& row : memory) {
    for (std::int64_t s : row) states.push_back(static_cast<std::uint32_t>(s));
  }
  std::vector<std::int32_t> w;
  BitMatrix mask(c.n_outputs, c.n_clauses);
  for (std::uint32_t i = 0; i < c.n_outputs; ++i) {
    for (std::uint32_t j = 0; j < c.n_clauses; ++j) {
      w.push_back(static_cast<std::int32_t>(weights[i][j]));
      if (frozen[i][j] != 0) mask.set(i, j);
    }
  }
  return Model(c, MemoryMatrix(c.n_clauses, c.n_literals(), c.memory_depth, std::move(states)),
               WeightMatrix(c.n_outputs, c.n_clauses, std::move(w), std::move(mask)));
}

IntVector oracle_predict(const OracleModel& model, const IntVector& x) {
  check_shape(model, x);
  const IntVector c = clause_values(include_actions(model), literals_of(x));
  const IntVector v = matrix_vector(model.weights, c);
  IntVector y(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) y[i] = v[i] >= 0 ? 1 : 0;
  return y;
}

StepTrace oracle_fit_example(OracleModel& model, const IntVector& x, const IntVector& y,
                             const RandomSource& rng, StepKey key) {
  check_shape(model, x);
  const Config& cfg = model.config;
  if (y.size() != cfg.n_outputs) {
    throw ShapeError("oracle: target has " + std::to_string(y.size()) + " entries, expected " +
                     std::to_string(cfg.n_outputs));
  }
  const std::size_t m = cfg.n_outputs;
  const std::size_t n = cfg.n_clauses;
  const std::size_t n_lit = cfg.n_literals();
  const auto t = static_cast<std::int64_t>(cfg.voting_margin);
  const double s = cfg.specificity;
  const double e = cfg.multiclass_scalar;

  StepTrace tr;
  tr.literals = literals_of(x);
  tr.actions = include_actions(model);
  tr.clauses = clause_values(tr.actions, tr.literals);
  tr.votes = matrix_vector(model.weights, tr.clauses);

  // q = y t - (NOT y) t ; d = |q - clip(v, -t, t)| / 2t
  tr.margins.resize(m);
  tr.probabilities.resize(m);
  for (std::size_t i = 0; i < m; ++i) {
    const std::int64_t yi = y[i] != 0 ? 1 : 0;
    tr.margins[i] = yi * t - (1 - yi) * t;
    const std::int64_t clipped = std::min(std::max(tr.votes[i], -t), t);
    tr.probabilities[i] =
        static_cast<double>(std::abs(tr.margins[i] - clipped)) / (2.0 * static_cast<double>(t));
  }

  // R^I = [y XNOR (w >= 0)] [pi < d] ; R^II = [y XOR (w >= 0)] [pi < d e]
  tr.type_i = zeros(m, n);
  tr.type_ii = zeros(m, n);
  for (std::size_t i = 0; i < m; ++i) {
    const std::int64_t yi = y[i] != 0 ? 1 : 0;
    for (std::size_t j = 0; j < n; ++j) {
      const bool frozen_zero = model.frozen[i][j] != 0 && model.weights[i][j] == 0;
      if (frozen_zero) continue;
      const std::int64_t polarity = model.weights[i][j] >= 0 ? 1 : 0;
      const double pi1 = rng.pair_uniform(Site::kTypeI, key, static_cast<std::uint32_t>(i),
                                          static_cast<std::uint32_t>(j));
      const double pi2 = rng.pair_uniform(Site::kTypeII, key, static_cast<std::uint32_t>(i),
                                          static_cast<std::uint32_t>(j));
      const std::int64_t xnor = yi == polarity ? 1 : 0;
      tr.type_i[i][j] = xnor * (pi1 < tr.probabilities[i] ? 1 : 0);
      tr.type_ii[i][j] = (1 - xnor) * (pi2 < tr.probabilities[i] * e ? 1 : 0);
    }
  }

  // Per-output feedback matrices.
  tr.type_ia.assign(m, zeros(n, n_lit));
  tr.type_ib.assign(m, zeros(n, n_lit));
  tr.random_gate.assign(m, zeros(n, n_lit));
  tr.type_ii_feedback.assign(m, zeros(n, n_lit));
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      for (std::size_t k = 0; k < n_lit; ++k) {
        const auto ii = static_cast<std::uint32_t>(i);
        const auto jj = static_cast<std::uint32_t>(j);
        const auto kk = static_cast<std::uint32_t>(k);
        const auto nl = static_cast<std::uint32_t>(n_lit);
        const double pi_ia = rng.literal_uniform(Site::kTypeIa, key, ii, jj, kk, nl);
        const double pi_ib = rng.literal_uniform(Site::kTypeIb, key, ii, jj, kk, nl);
        const std::int64_t cj = tr.clauses[j];
        const std::int64_t lit = tr.literals[k];
        const std::int64_t gate_ia = cfg.boost_true_positive ? 1 : (pi_ia < (s - 1.0) / s ? 1 : 0);
        tr.random_gate[i][j][k] = pi_ib < 1.0 / s ? 1 : 0;
        tr.type_ia[i][j][k] = cj * lit * gate_ia;
        tr.type_ib[i][j][k] = ((1 - cj) + (1 - lit) > 0 ? 1 : 0) * tr.random_gate[i][j][k];
        tr.type_ii_feedback[i][j][k] = cj * (1 - lit) * (1 - tr.actions[j][k]);
      }
    }
  }

  // Delta C = sum_i Q^II_i o F^II_i + Q^I_i o F^Ia_i - Q^I_i o F^Ib_i
  tr.memory_delta = zeros(n, n_lit);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const std::int64_t q1 = tr.type_i[i][j];
      const std::int64_t q2 = tr.type_ii[i][j];
      for (std::size_t k = 0; k < n_lit; ++k) {
        tr.memory_delta[j][k] += q2 * tr.type_ii_feedback[i][j][k] + q1 * tr.type_ia[i][j][k] -
                                 q1 * tr.type_ib[i][j][k];
      }
    }
  }

  // Delta W = (R^I + R^II) o c (y - NOT y), frozen entries excluded.
  tr.weight_delta = zeros(m, n);
  for (std::size_t i = 0; i < m; ++i) {
    const std::int64_t yi = y[i] != 0 ? 1 : 0;
    for (std::size_t j = 0; j < n; ++j) {
      if (model.frozen[i][j] != 0) continue;
      tr.weight_delta[i][j] = (tr.type_i[i][j] + tr.type_ii[i][j]) * tr.clauses[j] * (yi - (1 - yi));
    }
  }

  const std::int64_t ceiling = 2 * static_cast<std::int64_t>(cfg.memory_depth);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t k = 0; k < n_lit; ++k) {
      model.memory[j][k] = std::min(std::max(model.memory[j][k] + tr.memory_delta[j][k],
                                             std::int64_t{1}), ceiling);
    }
  }
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) model.weights[i][j] += tr.weight_delta[i][j];
  }
  return tr;
}

}  // namespace cotm::oracle
