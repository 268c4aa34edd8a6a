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

// Acceptance suite: one PASS/FAIL line per criterion on stdout, progress on
// stderr. Every threshold, budget and seed is a constant below.
//
// Exit status is 0 when the failing criteria are exactly those named with
// --expect-fail, so a known-unreachable target stays visible as FAIL in the
// output without masking regressions elsewhere.

#include <CLI11.hpp>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <memory>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "cotm/data.hpp"
#include "cotm/equivalence.hpp"
#include "cotm/errors.hpp"
#include "cotm/eval.hpp"
#include "cotm/learn.hpp"
#include "cotm/model.hpp"
#include "cotm/thread_pool.hpp"
#include "cotm_cli/commands.hpp"
#include "fixtures.hpp"

namespace cotm::acceptance {
namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt(const char* format, double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, format, value);
  return buf;
}

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Criterion {
  int id;
  const char* name;
  std::function<Outcome()> run;
};

std::unique_ptr<ThreadPool> make_pool() {
  auto pool = std::make_unique<ThreadPool>(0);
  if (pool->size() <= 1) return nullptr;
  return pool;
}

// ---------------------------------------------------------------------------
// 1. Engine vs dense oracle.

constexpr std::uint32_t kOracleInstances = 1000;
constexpr std::uint32_t kOracleSteps = 20;
constexpr std::uint32_t kOracleSeeds = 50;
constexpr double kOracleSeconds = 60.0;

Outcome oracle_equivalence() {
  const auto start = Clock::now();
  EquivalenceOptions options;
  options.instances = kOracleInstances;
  options.steps = kOracleSteps;
  options.seeds = kOracleSeeds;
  const EquivalenceReport report = run_equivalence(options);
  const double elapsed = seconds_since(start);
  std::ostringstream detail;
  detail << report.instances << " instances (" << report.vanilla_instances << " vanilla), "
         << report.steps << " steps, " << report.predictions << " predictions, "
         << fmt("%.1f s", elapsed) << " (limit " << kOracleSeconds << " s)";
  if (!report.passed()) detail << "; divergence: " << report.divergence->summary();
  return {report.passed() && report.instances == kOracleInstances && elapsed < kOracleSeconds,
          detail.str()};
}

// ---------------------------------------------------------------------------
// 2. Noisy XOR accuracy.

constexpr std::uint32_t kXorClauses = 1024;
constexpr std::uint32_t kXorMargin = 400;
constexpr double kXorSpecificity = 5.0;
constexpr std::uint32_t kXorDepth = 128;
constexpr std::uint32_t kXorEpochs = 100;
constexpr std::uint32_t kXorSeeds = 5;
constexpr double kXorTarget = 0.97;
constexpr double kXorSeconds = 300.0;

Config xor_config(std::uint64_t seed) {
  Config c;
  c.n_outputs = 2;
  c.n_clauses = kXorClauses;
  c.n_inputs = kXorInputs;
  c.memory_depth = kXorDepth;
  c.voting_margin = kXorMargin;
  c.specificity = kXorSpecificity;
  c.seed = seed;
  return c;
}

double test_accuracy(const Model& model, const Dataset& test, ThreadPool* pool) {
  return score(predict_dataset(model, test, pool), test, Scoring::kArgmax);
}

Outcome xor_accuracy() {
  const auto start = Clock::now();
  const auto pool = make_pool();
  std::vector<double> accuracies;
  for (std::uint64_t seed = 0; seed < kXorSeeds; ++seed) {
    NoisyXorOptions data_options;
    data_options.seed = seed;
    const SplitDataset data = generate_noisy_xor(data_options);
    const Config config = xor_config(seed);
    Model model = init_coalesced(config);
    const RandomSource rng(config.seed);
    for (std::uint32_t epoch = 0; epoch < kXorEpochs; ++epoch) {
      fit_epoch(model, data.train, rng, epoch, true, pool.get());
    }
    accuracies.push_back(test_accuracy(model, data.test, pool.get()));
    std::cerr << "  xor seed " << seed << ": test accuracy " << accuracies.back() << "\n";
  }
  double mean = 0.0;
  for (double a : accuracies) mean += a;
  mean /= static_cast<double>(accuracies.size());
  const double elapsed = seconds_since(start);
  std::ostringstream detail;
  detail << "mean test accuracy " << fmt("%.4f", mean) << " over " << kXorSeeds
         << " seeds (target >= " << kXorTarget << "), per seed [";
  for (std::size_t i = 0; i < accuracies.size(); ++i) {
    detail << (i ? " " : "") << fmt("%.4f", accuracies[i]);
  }
  detail << "], " << fmt("%.0f s", elapsed) << " (limit " << kXorSeconds << " s)";
  return {mean >= kXorTarget && elapsed < kXorSeconds, detail.str()};
}

// ---------------------------------------------------------------------------
// 3. MNIST at desk scale. e = 1: the one-hot scalar 1/(m - 1) also damps
// Type II on the target output and stalls learning at this size.

constexpr std::uint32_t kMnistClauses = 1000;
constexpr std::uint32_t kMnistMargin = 625;
constexpr double kMnistSpecificity = 10.0;
constexpr std::uint32_t kMnistDepth = 128;
constexpr std::uint32_t kMnistEpochs = 30;
constexpr std::uint32_t kMnistWindow = 11;
constexpr double kMnistThreshold = 2.0;
constexpr double kMnistMulticlassScalar = 1.0;
constexpr std::uint64_t kMnistSeed = 0;
constexpr double kMnistTarget = 0.92;

Outcome mnist_accuracy(const std::filesystem::path& dir) {
  const auto start = Clock::now();
  const char* files[] = {"train-images-idx3-ubyte", "train-labels-idx1-ubyte",
                         "t10k-images-idx3-ubyte", "t10k-labels-idx1-ubyte"};
  for (const char* f : files) {
    if (!std::filesystem::exists(dir / f)) {
      return {false, "MNIST file " + (dir / f).string() + " not found"};
    }
  }
  const Dataset train = images_to_dataset(load_idx(dir / files[0]), load_idx(dir / files[1]), 10,
                                          kMnistWindow, kMnistThreshold);
  const Dataset test = images_to_dataset(load_idx(dir / files[2]), load_idx(dir / files[3]), 10,
                                         kMnistWindow, kMnistThreshold);
  std::cerr << "  mnist: binarized " << train.size() << " + " << test.size() << " images in "
            << fmt("%.1f s", seconds_since(start)) << "\n";
  Config config;
  config.n_outputs = 10;
  config.n_clauses = kMnistClauses;
  config.n_inputs = train.n_inputs();
  config.memory_depth = kMnistDepth;
  config.voting_margin = kMnistMargin;
  config.specificity = kMnistSpecificity;
  config.multiclass_scalar = kMnistMulticlassScalar;
  config.seed = kMnistSeed;
  const auto pool = make_pool();
  Model model = init_coalesced(config);
  const RandomSource rng(config.seed);
  double accuracy = 0.0;
  for (std::uint32_t epoch = 0; epoch < kMnistEpochs; ++epoch) {
    fit_epoch(model, train, rng, epoch, true, pool.get());
    // Scored every fifth epoch for progress; the criterion uses the last one.
    if ((epoch + 1) % 5 == 0 || epoch + 1 == kMnistEpochs) {
      accuracy = test_accuracy(model, test, pool.get());
      std::cerr << "  mnist epoch " << epoch + 1 << ": test accuracy " << accuracy << " ("
                << fmt("%.0f s", seconds_since(start)) << ")\n";
    }
  }
  std::ostringstream detail;
  detail << "argmax test accuracy " << fmt("%.4f", accuracy) << " after " << kMnistEpochs
         << " epochs (target >= " << kMnistTarget << "), e = " << kMnistMulticlassScalar << ", "
         << fmt("%.0f s", seconds_since(start));
  return {accuracy >= kMnistTarget, detail.str()};
}

// ---------------------------------------------------------------------------
// 4. Imbalance: the coalesced machine loses no more accuracy than the
// vanilla machine when 90% of class-1 training examples are removed.
// Class 1 is thinned by its clean label, then 40% of the survivors' labels
// are flipped, so both training sets carry the same noise rate.

constexpr double kImbalanceRemoved = 0.9;
constexpr std::uint32_t kImbalanceEpochs = 20;
constexpr std::uint32_t kImbalanceTail = 5;
constexpr std::uint32_t kImbalanceSeeds = 5;
constexpr std::uint32_t kImbalanceRequired = 4;
constexpr double kImbalanceNoise = 0.4;

// Mean test accuracy over the last kImbalanceTail epochs.
double tail_accuracy(const Config& config, bool vanilla, const Dataset& train, const Dataset& test,
                     ThreadPool* pool) {
  Model model = vanilla ? init_vanilla(config) : init_coalesced(config);
  const RandomSource rng(config.seed);
  double sum = 0.0;
  for (std::uint32_t epoch = 0; epoch < kImbalanceEpochs; ++epoch) {
    fit_epoch(model, train, rng, epoch, true, pool);
    if (epoch + kImbalanceTail >= kImbalanceEpochs) sum += test_accuracy(model, test, pool);
  }
  return sum / kImbalanceTail;
}

Outcome imbalance_direction() {
  const auto start = Clock::now();
  const auto pool = make_pool();
  std::uint32_t wins = 0;
  std::ostringstream per_seed;
  for (std::uint64_t seed = 0; seed < kImbalanceSeeds; ++seed) {
    NoisyXorOptions options;
    options.label_noise = 0.0;
    options.seed = 1000 + seed;
    const SplitDataset clean = generate_noisy_xor(options);
    const std::uint64_t flip_seed = seed ^ 0x5bd1e995ull;
    const Dataset balanced = flip_labels(clean.train, kImbalanceNoise, flip_seed);
    const Dataset thinned = flip_labels(
        subsample_imbalance(clean.train, RemoveFraction{1, kImbalanceRemoved}, seed),
        kImbalanceNoise, flip_seed);
    const Config config = xor_config(seed);
    double drop[2];
    for (int vanilla = 0; vanilla <= 1; ++vanilla) {
      const double full = tail_accuracy(config, vanilla, balanced, clean.test, pool.get());
      const double thin = tail_accuracy(config, vanilla, thinned, clean.test, pool.get());
      drop[vanilla] = full - thin;
      std::cerr << "  imbalance seed " << seed << (vanilla ? " vanilla" : " coalesced")
                << ": balanced " << full << ", thinned " << thin << "\n";
    }
    const bool win = drop[0] <= drop[1];
    wins += win;
    per_seed << (seed ? "; " : "") << "seed " << seed << " drop coalesced "
             << fmt("%+.4f", drop[0]) << " vanilla " << fmt("%+.4f", drop[1]);
  }
  std::ostringstream detail;
  detail << wins << "/" << kImbalanceSeeds << " seeds with coalesced drop <= vanilla drop (need >= "
         << kImbalanceRequired << "): " << per_seed.str() << ", "
         << fmt("%.0f s", seconds_since(start));
  return {wins >= kImbalanceRequired, detail.str()};
}

// ---------------------------------------------------------------------------
// 5. Invariants under fuzzed training.

constexpr std::uint32_t kFuzzSteps = 10000;
constexpr std::uint32_t kFuzzStepsPerInstance = 40;
constexpr std::uint64_t kFuzzSeed = 0xC0FFEE;

Outcome invariant_suite() {
  std::mt19937_64 gen(kFuzzSeed);
  auto pick = [&](std::uint32_t lo, std::uint32_t hi) {
    return std::uniform_int_distribution<std::uint32_t>(lo, hi)(gen);
  };
  std::uint64_t violations[5] = {};
  const char* names[5] = {"state bounds", "R1 and R2 overlap", "frozen weight changed",
                          "update with d = 0", "weight step outside {-1,0,+1}"};
  std::uint32_t steps = 0, instances = 0, vanilla_instances = 0;
  while (steps < kFuzzSteps) {
    Config config;
    config.n_outputs = pick(1, 5);
    config.n_clauses = 2 * config.n_outputs * pick(1, 4);
    config.n_inputs = pick(1, 12);
    config.memory_depth = pick(1, 8);
    config.voting_margin = pick(1, 12);
    config.specificity = 1.0 + 0.5 * pick(0, 8);
    config.multiclass_scalar =
        pick(0, 1) ? 1.0 : one_hot_multiclass_scalar(config.n_outputs);
    config.boost_true_positive = pick(0, 1);
    config.seed = gen();
    const bool vanilla = instances % 3 == 2;
    Model model = vanilla ? init_vanilla(config) : testing::random_model(gen, config, 0.2);
    vanilla_instances += vanilla;
    ++instances;
    const WeightMatrix initial_weights = model.weights();
    const RandomSource rng(config.seed);
    TrainScratch scratch(config);
    for (std::uint32_t s = 0; s < kFuzzStepsPerInstance && steps < kFuzzSteps; ++s, ++steps) {
      const BitVector x = testing::random_bits(gen, config.n_inputs);
      const BitVector y = testing::random_bits(gen, config.n_outputs);
      const WeightMatrix before = model.weights();
      plan_example(model, x, y, rng, {0, s}, scratch);
      commit_example(model, scratch);
      for (std::uint32_t state : model.memory().values()) {
        violations[0] += state < 1 || state > config.max_state();
      }
      for (std::uint32_t i = 0; i < config.n_outputs; ++i) {
        const bool saturated = scratch.probabilities[i] == 0.0;
        for (std::uint32_t j = 0; j < config.n_clauses; ++j) {
          const bool r1 = scratch.type_i.test(i, j), r2 = scratch.type_ii.test(i, j);
          const std::int64_t step = std::int64_t{model.weights().at(i, j)} - before.at(i, j);
          violations[1] += r1 && r2;
          violations[2] += before.frozen(i, j) && step != 0;
          violations[3] += saturated && (r1 || r2 || step != 0);
          violations[4] += step < -1 || step > 1;
        }
      }
    }
    if (vanilla && !(model.weights() == initial_weights)) ++violations[2];
  }
  std::ostringstream detail;
  std::uint64_t total = 0;
  detail << steps << " steps over " << instances << " random configs (" << vanilla_instances
         << " vanilla): ";
  for (int v = 0; v < 5; ++v) {
    total += violations[v];
    detail << (v ? ", " : "") << names[v] << " " << violations[v];
  }
  return {total == 0 && steps == kFuzzSteps, detail.str()};
}

// ---------------------------------------------------------------------------
// 6. Byte-identical model files from repeated cmd_train runs.

Outcome determinism() {
  testing::TempDir dir("acceptance");
  cli::GenerateXorArgs data;
  data.out_dir = dir.path().string();
  data.seed = 6;
  std::ostringstream log;
  cli::cmd_generate_xor(data, log);
  cli::RunConfig rc;
  rc.train = dir.file("xor_train.cotd");
  rc.test = dir.file("xor_test.cotd");
  rc.n_clauses = 128;
  rc.voting_margin = 64;
  rc.epochs = 3;
  rc.trials = 1;
  rc.seed = 17;
  auto bytes_of = [&](std::size_t threads, const std::string& name) {
    rc.model = dir.file(name);
    cli::cmd_train({rc, threads}, log);
    std::ifstream in(rc.model, std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(in), {});
  };
  const std::string a = bytes_of(1, "a.cotm");
  const std::string b = bytes_of(1, "b.cotm");
  const std::string c = bytes_of(2, "c.cotm");
  const std::string d = bytes_of(4, "d.cotm");
  const bool same = !a.empty() && a == b && a == c && a == d;
  return {same, std::to_string(a.size()) + "-byte model files; threads 1, 1, 2, 4 " +
                    (same ? "identical" : "differ")};
}

// ---------------------------------------------------------------------------
// 7. The hand-built XOR / AND / OR machine.

Outcome worked_example() {
  const Model model = testing::xor_and_or_machine();
  const BitVector headline = predict(model, BitVector::from_values({0, 1}));
  bool table = true;
  std::ostringstream detail;
  detail << "x=[0,1] -> " << headline.to_string() << "; truth table";
  for (int a = 0; a <= 1; ++a) {
    for (int b = 0; b <= 1; ++b) {
      const BitVector y = predict(model, BitVector::from_values({a, b}));
      table = table && y == BitVector::from_values({a ^ b, a & b, a | b});
      detail << " " << a << b << "->" << y.to_string();
    }
  }
  const bool headline_ok = headline == BitVector::from_values({1, 0, 1});
  return {headline_ok && table, detail.str()};
}

// ---------------------------------------------------------------------------
// 8. Selection frequencies. Every clause is empty so every clause fires and
// the votes, hence d, stay fixed while only the step key changes.

constexpr std::uint32_t kRateClausesPerSign = 500;
constexpr std::uint32_t kRateSteps = 200;  // 200 steps x 500 pairs = 10^5 draws
constexpr double kRateScalar = 0.25;
constexpr double kRateSigmas = 3.0;

Outcome selection_rates() {
  Config config;
  config.n_outputs = 2;
  config.n_clauses = 2 * kRateClausesPerSign;
  config.n_inputs = 2;
  config.memory_depth = 4;
  config.voting_margin = 1000;
  config.multiclass_scalar = kRateScalar;
  config.seed = 88;
  // Both outputs: 500 weights +2 and 500 weights -1, so v = 500. Output 0
  // has y = 1 and d = 500 / 2000; output 1 has y = 0 and d = 1500 / 2000.
  // Each (output, type) then has exactly 500 eligible pairs per step.
  std::vector<std::int32_t> w(2 * config.n_clauses);
  for (std::uint32_t j = 0; j < config.n_clauses; ++j) {
    w[j] = w[config.n_clauses + j] = j < kRateClausesPerSign ? 2 : -1;
  }
  const Model model(config, MemoryMatrix(config.n_clauses, 4, 4, 4u),
                    WeightMatrix(2, config.n_clauses, w, BitMatrix(2, config.n_clauses)));
  const RandomSource rng(config.seed);
  const BitVector x = BitVector::from_values({1, 0});
  const BitVector y = BitVector::from_values({1, 0});
  TrainScratch scratch(config);
  std::uint64_t eligible[2][2] = {}, selected[2][2] = {};
  std::vector<double> d;
  for (std::uint32_t step = 0; step < kRateSteps; ++step) {
    plan_example(model, x, y, rng, {0, step}, scratch);
    d = scratch.probabilities;
    for (std::uint32_t i = 0; i < 2; ++i) {
      for (std::uint32_t j = 0; j < config.n_clauses; ++j) {
        const bool agrees = y.test(i) == (model.weights().at(i, j) >= 0);
        const int type = agrees ? 0 : 1;
        ++eligible[i][type];
        selected[i][type] += type == 0 ? scratch.type_i.test(i, j) : scratch.type_ii.test(i, j);
      }
    }
  }
  bool pass = true;
  std::ostringstream detail;
  const char* type_names[2] = {"Type I", "Type II"};
  for (std::uint32_t i = 0; i < 2; ++i) {
    for (int type = 0; type < 2; ++type) {
      const double p = type == 0 ? d[i] : d[i] * kRateScalar;
      const double n = static_cast<double>(eligible[i][type]);
      const double rate = static_cast<double>(selected[i][type]) / n;
      const double se = std::sqrt(p * (1.0 - p) / n);
      const double z = (rate - p) / se;
      pass = pass && std::abs(z) <= kRateSigmas && n >= 1e5;
      detail << (i || type ? "; " : "") << "y" << i << " " << type_names[type] << " "
             << fmt("%.5f", rate) << " vs " << fmt("%.5f", p) << " (" << fmt("%+.2f", z)
             << " SE, " << eligible[i][type] << " draws)";
    }
  }
  return {pass, detail.str()};
}

}  // namespace
}  // namespace cotm::acceptance

int main(int argc, char** argv) {
  using namespace cotm::acceptance;
  CLI::App app{"Acceptance criteria; one PASS/FAIL line each"};
  std::vector<int> only;
  std::vector<int> expect_fail;
  std::string mnist_dir = COTM_DEFAULT_MNIST_DIR;
  app.add_option("--only", only, "Run only these criteria")->delimiter(',');
  app.add_option("--expect-fail", expect_fail,
                 "Criteria known to be unreachable; they still print FAIL")
      ->delimiter(',');
  app.add_option("--mnist-dir", mnist_dir, "Directory of the four MNIST IDX files")
      ->capture_default_str();
  CLI11_PARSE(app, argc, argv);

  const std::vector<Criterion> criteria = {
      {1, "oracle equivalence", oracle_equivalence},
      {2, "noisy XOR accuracy", xor_accuracy},
      {3, "MNIST desk scale", [&] { return mnist_accuracy(mnist_dir); }},
      {4, "imbalance robustness direction", imbalance_direction},
      {5, "invariant suite", invariant_suite},
      {6, "determinism", determinism},
      {7, "worked example", worked_example},
      {8, "selection-rate statistics", selection_rates},
  };
  const std::set<int> selected(only.begin(), only.end());
  const std::set<int> expected(expect_fail.begin(), expect_fail.end());
  int unexpected = 0;
  for (const Criterion& c : criteria) {
    if (!selected.empty() && !selected.count(c.id)) continue;
    std::cerr << "criterion " << c.id << ": " << c.name << "\n";
    Outcome outcome;
    try {
      outcome = c.run();
    } catch (const std::exception& e) {
      outcome = {false, std::string("exception: ") + e.what()};
    }
    const bool known = expected.count(c.id) > 0;
    std::cout << (outcome.pass ? "PASS" : "FAIL") << " [" << c.id << "] " << c.name << ": "
              << outcome.detail << (known && !outcome.pass ? " (known unreachable)" : "")
              << std::endl;
    if (outcome.pass == known) ++unexpected;
  }
  return unexpected == 0 ? 0 : 1;
}
