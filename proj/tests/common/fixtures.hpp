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

// Hand-built models shared by the unit and acceptance tests.

#ifndef COTM_TESTS_FIXTURES_HPP_
#define COTM_TESTS_FIXTURES_HPP_

#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "cotm/model.hpp"

namespace cotm::testing {

// Two inputs, N = 4, columns [x1, x2, NOT x1, NOT x2]:
//   clause 0: x1 AND NOT x2   (states 8 and 7 include, 2 and 1 exclude)
//   clause 1: NOT x1 AND x2
//   clause 2: x1 AND x2
//   clause 3: empty, always 1, the bias
// Output 0 computes XOR, output 1 AND, output 2 OR; each subtracts the bias
// so a false case votes -1 and a true case votes >= 0.
inline Model xor_and_or_machine() {
  Config config;
  config.n_outputs = 3;
  config.n_clauses = 4;
  config.n_inputs = 2;
  config.memory_depth = 4;
  config.voting_margin = 4;
  MemoryMatrix memory(4, 4, 4,
                      std::vector<std::uint32_t>{8, 1, 2, 7,  //
                                                 1, 8, 7, 2,  //
                                                 8, 8, 1, 1,  //
                                                 4, 4, 4, 4});
  WeightMatrix weights(3, 4,
                       std::vector<std::int32_t>{1, 1, 0, -1,  //
                                                 0, 0, 1, -1,  //
                                                 1, 1, 1, -1},
                       BitMatrix(3, 4));
  return Model(config, std::move(memory), std::move(weights));
}

// Random model with arbitrary states and weights, for property checks.
inline Model random_model(std::mt19937_64& gen, const Config& config, double frozen_rate = 0.0) {
  std::uniform_int_distribution<std::uint32_t> state(1, 2 * config.memory_depth);
  std::uniform_int_distribution<std::int32_t> weight(-4, 4);
  std::bernoulli_distribution frozen(frozen_rate);
  std::vector<std::uint32_t> states(std::size_t{config.n_clauses} * config.n_literals());
  for (auto& s : states) s = state(gen);
  std::vector<std::int32_t> w(std::size_t{config.n_outputs} * config.n_clauses);
  BitMatrix mask(config.n_outputs, config.n_clauses);
  for (std::uint32_t i = 0; i < config.n_outputs; ++i) {
    for (std::uint32_t j = 0; j < config.n_clauses; ++j) {
      w[std::size_t{i} * config.n_clauses + j] = weight(gen);
      mask.set(i, j, frozen(gen));
    }
  }
  return Model(config,
               MemoryMatrix(config.n_clauses, config.n_literals(), config.memory_depth,
                            std::move(states)),
               WeightMatrix(config.n_outputs, config.n_clauses, std::move(w), std::move(mask)));
}

inline BitVector random_bits(std::mt19937_64& gen, std::size_t size) {
  BitVector out(size);
  for (std::size_t k = 0; k < size; ++k) out.set(k, (gen() >> 17) & 1u);
  return out;
}

// Fresh directory under the system temp dir, removed by the destructor.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() /
            ("cotm-" + tag + "-" + std::to_string(rd()) + std::to_string(rd()));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::string file(const std::string& name) const { return (path_ / name).string(); }

 private:
  std::filesystem::path path_;
};

}  // namespace cotm::testing

#endif  // COTM_TESTS_FIXTURES_HPP_
