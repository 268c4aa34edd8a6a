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

#include <benchmark/benchmark.h>

#include <cstdint>
#include <random>
#include <vector>

#include "cotm/data.hpp"
#include "cotm/learn.hpp"
#include "cotm/model.hpp"
#include "cotm/oracle.hpp"
#include "cotm/random.hpp"

namespace cotm {
namespace {

BitVector random_bits(std::mt19937_64& gen, std::size_t size) {
  BitVector out(size);
  for (std::size_t k = 0; k < size; ++k) out.set(k, gen() & 1u);
  return out;
}

// Image-sized machine: 784 inputs, 10 outputs, args select the clause count.
Config image_config(std::uint32_t clauses) {
  Config c;
  c.n_outputs = 10;
  c.n_clauses = clauses;
  c.n_inputs = 784;
  c.memory_depth = 128;
  c.voting_margin = 625;
  c.specificity = 10.0;
  c.seed = 1;
  return c;
}

// A model after some training has non-trivial clauses; warm it up on noise.
Model warmed_model(const Config& config, std::mt19937_64& gen) {
  Model model = init_coalesced(config);
  const RandomSource rng(config.seed);
  TrainScratch scratch(config);
  for (std::uint32_t step = 0; step < 200; ++step) {
    BitVector y(config.n_outputs);
    y.set(step % config.n_outputs);
    fit_example(model, random_bits(gen, config.n_inputs), y, rng, {0, step}, scratch);
  }
  return model;
}

void BM_Predict(benchmark::State& state) {
  std::mt19937_64 gen(1);
  const Config config = image_config(static_cast<std::uint32_t>(state.range(0)));
  const Model model = warmed_model(config, gen);
  const BitVector x = random_bits(gen, config.n_inputs);
  for (auto _ : state) benchmark::DoNotOptimize(predict_votes(model, x));
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_Predict)->Arg(1000)->Arg(4000);

void BM_FitExample(benchmark::State& state) {
  std::mt19937_64 gen(2);
  const Config config = image_config(static_cast<std::uint32_t>(state.range(0)));
  Model model = warmed_model(config, gen);
  const RandomSource rng(config.seed);
  TrainScratch scratch(config);
  std::vector<BitVector> inputs;
  for (int i = 0; i < 64; ++i) inputs.push_back(random_bits(gen, config.n_inputs));
  std::uint32_t step = 0;
  for (auto _ : state) {
    BitVector y(config.n_outputs);
    y.set(step % config.n_outputs);
    fit_example(model, inputs[step % inputs.size()], y, rng, {1, step}, scratch);
    ++step;
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_FitExample)->Arg(1000)->Arg(4000);

void BM_FitExampleNoisyXor(benchmark::State& state) {
  const SplitDataset data = generate_noisy_xor({});
  Config config;
  config.n_outputs = 2;
  config.n_clauses = 1024;
  config.n_inputs = kXorInputs;
  config.memory_depth = 128;
  config.voting_margin = 400;
  config.specificity = 5.0;
  Model model = init_coalesced(config);
  const RandomSource rng(config.seed);
  TrainScratch scratch(config);
  std::uint32_t step = 0;
  for (auto _ : state) {
    const std::size_t r = step % data.train.size();
    fit_example(model, data.train.input(r), data.train.output(r), rng, {step / 2500u, step},
                scratch);
    ++step;
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_FitExampleNoisyXor);

// Dense reference step on the same small instance, for scale.
void BM_OracleFitExample(benchmark::State& state) {
  std::mt19937_64 gen(3);
  Config config;
  config.n_outputs = 4;
  config.n_clauses = 8;
  config.n_inputs = 6;
  config.memory_depth = 4;
  config.voting_margin = 8;
  const Model start = init_coalesced(config);
  oracle::OracleModel model = oracle::OracleModel::from_model(start);
  const RandomSource rng(config.seed);
  const oracle::IntVector x{1, 0, 1, 1, 0, 0}, y{1, 0, 0, 1};
  std::uint32_t step = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(oracle::oracle_fit_example(model, x, y, rng, {0, step++}));
  }
}
BENCHMARK(BM_OracleFitExample);

void BM_Philox(benchmark::State& state) {
  const RandomSource rng(7);
  std::vector<std::uint32_t> out(4 * 256);
  std::uint32_t example = 0;
  for (auto _ : state) {
    rng.fill_blocks(Site::kTypeIb, {0, example++}, 0, 0, 256, out);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetBytesProcessed(state.iterations() * out.size() * sizeof(std::uint32_t));
}
BENCHMARK(BM_Philox);

void BM_Binarize(benchmark::State& state) {
  std::mt19937_64 gen(4);
  std::vector<std::uint8_t> pixels(28 * 28);
  for (auto& p : pixels) p = static_cast<std::uint8_t>(gen());
  for (auto _ : state) benchmark::DoNotOptimize(binarize_adaptive_gaussian(pixels, 28, 28));
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_Binarize);

}  // namespace
}  // namespace cotm

BENCHMARK_MAIN();
