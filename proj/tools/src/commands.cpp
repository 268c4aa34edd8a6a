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

#include "cotm_cli/commands.hpp"

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <memory>
#include <nlohmann/json.hpp>
#include <string_view>

#include "cotm/data.hpp"
#include "cotm/dataset.hpp"
#include "cotm/equivalence.hpp"
#include "cotm/errors.hpp"
#include "cotm/eval.hpp"
#include "cotm/model_io.hpp"
#include "cotm/thread_pool.hpp"

namespace cotm::cli {
namespace {

namespace fs = std::filesystem;

std::ofstream open_output(const fs::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  return out;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out = open_output(path);
  out << text;
  if (!out.flush()) throw IoError("write failed: " + path.string());
}

void require(const std::string& value, const char* flag) {
  if (value.empty()) throw ConfigError(std::string("missing required ") + flag);
}

// One worker for single-threaded runs so the pool is bypassed entirely.
std::unique_ptr<ThreadPool> make_pool(std::size_t threads) {
  auto pool = std::make_unique<ThreadPool>(threads);
  if (pool->size() <= 1) return nullptr;
  return pool;
}

Dataset load_checked(const std::string& path, const char* what) {
  Dataset data = load_dataset(path);
  if (data.empty()) throw InputError(std::string(what) + " " + path + " has no examples");
  return data;
}

}  // namespace

int exit_code_for(const std::exception& error) {
  if (dynamic_cast<const ConfigError*>(&error) != nullptr) return kExitUsage;
  return kExitData;
}

std::optional<std::uint64_t> seed_from_environment() {
  const char* raw = std::getenv("COTM_SEED");
  if (raw == nullptr || *raw == '\0') return std::nullopt;
  const std::string_view text(raw);
  std::uint64_t seed = 0;
  const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), seed);
  if (ec != std::errc() || end != text.data() + text.size()) {
    throw ConfigError("COTM_SEED must be an unsigned integer, got \"" + std::string(text) + "\"");
  }
  return seed;
}

void cmd_generate_xor(const GenerateXorArgs& args, std::ostream& log) {
  if (!(args.noise >= 0.0 && args.noise <= 1.0)) throw ConfigError("--noise must lie in [0, 1]");
  NoisyXorOptions options;
  options.n_train = args.train_size;
  options.n_test = args.test_size;
  options.label_noise = args.noise;
  options.seed = args.seed;
  const SplitDataset split = generate_noisy_xor(options);
  const fs::path dir(args.out_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());
  const fs::path train = dir / (args.prefix + "_train.cotd");
  const fs::path test = dir / (args.prefix + "_test.cotd");
  const fs::path names = dir / (args.prefix + ".names");
  save_dataset(train, split.train);
  save_dataset(test, split.test);
  save_vocabulary(names, Vocabulary(split.train.feature_names));
  log << "wrote " << train.string() << " (" << split.train.size() << " examples), "
      << test.string() << " (" << split.test.size() << " examples), " << names.string() << "\n";
}

void cmd_prepare_images(const PrepareImagesArgs& args, std::ostream& log) {
  require(args.images, "--images");
  require(args.labels, "--labels");
  require(args.out, "--out");
  if (args.window % 2 == 0) {
    throw ConfigError("--window must be odd, got " + std::to_string(args.window));
  }
  const Dataset data = images_to_dataset(load_idx(args.images), load_idx(args.labels),
                                         args.classes, args.window, args.threshold);
  save_dataset(args.out, data);
  log << "wrote " << args.out << " (" << data.size() << " examples x " << data.n_inputs()
      << " bits, " << data.n_outputs() << " classes)\n";
}

void cmd_prepare_text(const PrepareTextArgs& args, std::ostream& log) {
  require(args.corpus, "--corpus");
  require(args.out, "--out");
  const std::vector<LabeledText> texts = load_labeled_texts(args.corpus);
  if (texts.empty()) throw InputError("corpus " + args.corpus + " has no examples");
  Vocabulary vocabulary;
  if (!args.vocab_in.empty()) {
    vocabulary = load_vocabulary(args.vocab_in);
  } else {
    if (args.max_vocab == 0) throw ConfigError("--max-vocab must be >= 1");
    std::vector<std::string> bodies;
    bodies.reserve(texts.size());
    for (const auto& t : texts) bodies.push_back(t.text);
    vocabulary = build_vocabulary(bodies, args.max_vocab);
  }
  std::uint32_t classes = args.classes;
  if (classes == 0) {
    for (const auto& t : texts) classes = std::max(classes, t.label + 1);
  }
  const Dataset data = texts_to_dataset(texts, vocabulary, classes);
  save_dataset(args.out, data);
  if (!args.vocab_out.empty()) save_vocabulary(args.vocab_out, vocabulary);
  log << "wrote " << args.out << " (" << data.size() << " examples, vocabulary "
      << vocabulary.size() << ", " << classes << " classes)\n";
}

void cmd_subsample(const SubsampleArgs& args, std::ostream& log) {
  require(args.in, "--in");
  require(args.out, "--out");
  if (args.remove_class.has_value() == !args.geometric.empty()) {
    throw ConfigError("give exactly one of --remove-class or --geometric");
  }
  const Dataset data = load_dataset(args.in);
  ImbalanceMode mode = args.remove_class
                           ? ImbalanceMode(RemoveFraction{*args.remove_class, args.fraction})
                           : ImbalanceMode(Geometric{args.geometric});
  const Dataset kept = subsample_imbalance(data, mode, args.seed);
  save_dataset(args.out, kept);
  log << "kept " << kept.size() << " of " << data.size() << " examples in " << args.out << "\n";
}

std::string trial_model_path(const std::string& path, std::uint32_t trial) {
  if (trial == 0) return path;
  const fs::path p(path);
  fs::path out = p.parent_path() / p.stem();
  out += "-trial" + std::to_string(trial);
  out += p.extension();
  return out.string();
}

Model cmd_train(const TrainArgs& args, std::ostream& log) {
  const RunConfig& rc = args.config;
  require(rc.train, "train dataset");
  require(rc.model, "model path");
  if (rc.trials == 0) throw ConfigError("trials must be >= 1");
  const Dataset train = load_checked(rc.train, "training set");
  std::optional<Dataset> test;
  if (!rc.test.empty()) {
    test = load_checked(rc.test, "test set");
    if (test->n_inputs() != train.n_inputs() || test->n_outputs() != train.n_outputs()) {
      throw ShapeError("test set shape (o=" + std::to_string(test->n_inputs()) +
                       ", m=" + std::to_string(test->n_outputs()) +
                       ") differs from the training set (o=" + std::to_string(train.n_inputs()) +
                       ", m=" + std::to_string(train.n_outputs()) + ")");
    }
  }
  const Config config = machine_config(rc, train.n_inputs(), train.n_outputs());
  if (!rc.summary.empty()) {
    if (!test.has_value() || rc.epochs == 0) {
      throw ConfigError("a summary needs a test set and epochs >= 1");
    }
    if (rc.tail == 0 || rc.tail > rc.epochs) {
      throw ConfigError("tail must lie in [1, epochs], got " + std::to_string(rc.tail));
    }
  }

  const std::unique_ptr<ThreadPool> pool = make_pool(args.threads);
  TrialOptions options;
  options.trials = rc.trials;
  options.epochs = rc.epochs;
  options.tail = rc.tail;
  options.shuffle = rc.shuffle;
  options.vanilla = rc.vanilla;
  options.scoring = rc.scoring;
  options.train_accuracy = true;
  options.pool = pool.get();

  std::ofstream report;
  if (!rc.report.empty()) {
    report = open_output(rc.report);
    write_epoch_csv_header(report);
  }
  log << "training " << to_string(config) << (rc.vanilla ? " vanilla" : "") << "\n";
  TrialSummary summary;
  std::optional<Model> first;
  for (std::uint32_t trial = 0; trial < rc.trials; ++trial) {
    TrialReport trial_report;
    Model model = run_trial(config, train, test ? &*test : nullptr, options, trial, trial_report,
                            [&](const TrialReport& r, std::uint32_t epoch) {
                              if (report.is_open()) write_epoch_csv_row(report, r, epoch);
                              log << "trial " << r.trial << " epoch " << epoch
                                  << " train " << r.train_accuracy.back();
                              if (!r.test_accuracy.empty()) {
                                log << " test " << r.test_accuracy.back();
                              }
                              log << "\n";
                            });
    const std::string path = trial_model_path(rc.model, trial);
    save_model(path, model);
    log << "wrote " << path << "\n";
    summary.trials.push_back(std::move(trial_report));
    if (trial == 0) first.emplace(std::move(model));
  }
  if (report.is_open() && !report.flush()) throw IoError("write failed: " + rc.report);
  if (!rc.summary.empty()) {
    summarize(summary, rc.tail);
    write_text(rc.summary, summary_json(summary));
  }
  return std::move(*first);
}

std::string cmd_eval(const EvalArgs& args) {
  require(args.model, "--model");
  require(args.data, "--data");
  const Model model = load_model(args.model);
  const Dataset data = load_checked(args.data, "dataset");
  const Config& config = model.config();
  if (data.n_inputs() != config.n_inputs || data.n_outputs() != config.n_outputs) {
    throw ShapeError("dataset shape (o=" + std::to_string(data.n_inputs()) + ", m=" +
                     std::to_string(data.n_outputs()) + ") does not match the model (o=" +
                     std::to_string(config.n_inputs) + ", m=" +
                     std::to_string(config.n_outputs) + ")");
  }
  const std::unique_ptr<ThreadPool> pool = make_pool(args.threads);
  const EmptyClauseOutput empty =
      args.empty_clause_zero ? EmptyClauseOutput::kZero : EmptyClauseOutput::kTrue;
  const DatasetPredictions predictions = predict_dataset(model, data, pool.get(), empty);
  const std::vector<std::uint32_t> labels = predictions.labels();
  const std::vector<std::uint32_t> truth = argmax_rows(data.y);
  nlohmann::json doc;
  doc["examples"] = data.size();
  doc["n_outputs"] = config.n_outputs;
  doc["accuracy_argmax"] = score(predictions, data, Scoring::kArgmax);
  doc["accuracy_per_output"] = score(predictions, data, Scoring::kPerOutput);
  nlohmann::json f1 = nlohmann::json::array();
  for (std::uint32_t cls = 0; cls < config.n_outputs; ++cls) {
    f1.push_back(per_class_f1(labels, truth, cls));
  }
  doc["f1"] = std::move(f1);
  return doc.dump(2);
}

void cmd_predict(const PredictArgs& args, std::ostream& out) {
  require(args.model, "--model");
  require(args.data, "--data");
  const Model model = load_model(args.model);
  const Dataset data = load_dataset(args.data);
  if (data.n_inputs() != model.config().n_inputs) {
    throw ShapeError("dataset has " + std::to_string(data.n_inputs()) +
                     " inputs, the model expects " + std::to_string(model.config().n_inputs));
  }
  const std::unique_ptr<ThreadPool> pool = make_pool(args.threads);
  // Outputs are not needed for prediction; give the dataset a matching width.
  Dataset inputs(data.x, BitMatrix(data.size(), model.config().n_outputs));
  const DatasetPredictions predictions = predict_dataset(model, inputs, pool.get());
  if (args.labels) {
    for (std::uint32_t label : predictions.labels()) out << label << '\n';
    return;
  }
  for (std::size_t r = 0; r < data.size(); ++r) {
    for (std::uint32_t i = 0; i < predictions.n_outputs; ++i) {
      out << (predictions.outputs.test(r, i) ? '1' : '0');
    }
    out << '\n';
  }
}

void cmd_inspect(const InspectArgs& args, std::ostream& out) {
  require(args.model, "--model");
  if (args.names && args.vocab.empty()) throw ConfigError("--names needs --vocab");
  const Model model = load_model(args.model);
  std::optional<std::vector<std::string>> names;
  if (!args.vocab.empty()) names = load_vocabulary(args.vocab).tokens();
  const std::uint32_t n = model.config().n_clauses;
  std::vector<RenderedClause> clauses;
  clauses.reserve(n);
  for (std::uint32_t j = 0; j < n; ++j) {
    clauses.push_back(render_clause(model, j, names ? &*names : nullptr));
  }
  std::stable_sort(clauses.begin(), clauses.end(), [](const auto& a, const auto& b) {
    return a.max_abs_weight() > b.max_abs_weight();
  });
  const std::size_t shown = std::min(args.top, clauses.size());
  for (std::size_t r = 0; r < shown; ++r) out << clauses[r].to_string() << '\n';
}

int cmd_oracle_check(const OracleCheckArgs& args, std::ostream& out, std::ostream& err) {
  if (args.instances == 0) {
    err << "warning: --instances 0 checks nothing; passing vacuously\n";
    out << "PASS 0 instances\n";
    return kExitOk;
  }
  EquivalenceOptions options;
  options.instances = args.instances;
  options.steps = args.steps;
  options.seeds = args.seeds;
  options.base_seed = args.seed;
  options.threads = args.threads;
  options.fault = args.inject_fault ? Fault::kClipCeiling : Fault::kNone;
  const EquivalenceReport report = run_equivalence(options);
  if (!report.passed()) {
    out << "FAIL " << report.divergence->summary() << "\n";
    err << report.divergence->dump << "\n";
    return kExitDivergence;
  }
  out << "PASS " << report.instances << " instances, " << report.steps << " steps, "
      << report.predictions << " predictions (" << report.vanilla_instances << " vanilla)\n";
  return kExitOk;
}

}  // namespace cotm::cli
