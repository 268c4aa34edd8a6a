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

#include <CLI11.hpp>
#include <iostream>
#include <string>
#include <vector>

#include "cotm/errors.hpp"
#include "cotm_cli/commands.hpp"
#include "cotm_cli/run_config.hpp"

namespace {

using namespace cotm::cli;

// Later sources win: config file, then COTM_SEED, then --set and the
// dedicated flags.
RunConfig resolve_run_config(const std::string& file, const std::vector<std::string>& sets) {
  RunConfig config = file.empty() ? RunConfig{} : load_run_config(file);
  if (auto seed = seed_from_environment()) config.seed = *seed;
  for (const std::string& assignment : sets) {
    const auto eq = assignment.find('=');
    if (eq == std::string::npos) {
      throw cotm::ConfigError("--set expects key=value, got \"" + assignment + "\"");
    }
    set_run_config_value(config, assignment.substr(0, eq), assignment.substr(eq + 1));
  }
  return config;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Coalesced Tsetlin Machine: data preparation, training and inspection"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "cotm 0.1.0");

  // generate-xor
  GenerateXorArgs xor_args;
  std::optional<std::uint64_t> xor_seed;
  auto* gen = app.add_subcommand("generate-xor", "Write the 2D noisy XOR train/test datasets");
  gen->add_option("--out-dir", xor_args.out_dir, "Output directory")->capture_default_str();
  gen->add_option("--prefix", xor_args.prefix, "File name prefix")->capture_default_str();
  gen->add_option("--train-size", xor_args.train_size, "Training examples")->capture_default_str();
  gen->add_option("--test-size", xor_args.test_size, "Test examples")->capture_default_str();
  gen->add_option("--noise", xor_args.noise, "Fraction of training labels flipped")
      ->capture_default_str();
  gen->add_option("--seed", xor_seed, "Generator seed (default: COTM_SEED or 0)");

  // prepare images | text
  auto* prepare = app.add_subcommand("prepare", "Convert raw data to a binary dataset");
  prepare->require_subcommand(1);
  PrepareImagesArgs image_args;
  auto* images = prepare->add_subcommand("images", "Binarize an IDX image/label pair");
  images->add_option("--images", image_args.images, "IDX image tensor")->required();
  images->add_option("--labels", image_args.labels, "IDX label vector")->required();
  images->add_option("--out", image_args.out, "Output dataset")->required();
  images->add_option("--classes", image_args.classes, "Number of classes")->capture_default_str();
  images->add_option("--window", image_args.window, "Gaussian window (odd)")->capture_default_str();
  images->add_option("--threshold", image_args.threshold, "Offset below the local mean")
      ->capture_default_str();
  PrepareTextArgs text_args;
  auto* text = prepare->add_subcommand("text", "Set-of-words encode a labeled text corpus");
  text->add_option("--corpus", text_args.corpus, "Lines of <label><TAB><text>")->required();
  text->add_option("--out", text_args.out, "Output dataset")->required();
  text->add_option("--vocab", text_args.vocab_in, "Reuse an existing vocabulary");
  text->add_option("--vocab-out", text_args.vocab_out, "Write the vocabulary here");
  text->add_option("--max-vocab", text_args.max_vocab, "Vocabulary size cap")
      ->capture_default_str();
  text->add_option("--classes", text_args.classes, "Number of classes (0: from labels)")
      ->capture_default_str();

  // subsample
  SubsampleArgs sub_args;
  std::optional<std::uint64_t> sub_seed;
  auto* sub = app.add_subcommand("subsample", "Make a class-imbalanced copy of a dataset");
  sub->add_option("--in", sub_args.in, "Input dataset")->required();
  sub->add_option("--out", sub_args.out, "Output dataset")->required();
  sub->add_option("--remove-class", sub_args.remove_class, "Class to thin out");
  sub->add_option("--fraction", sub_args.fraction, "Fraction of that class removed");
  sub->add_option("--geometric", sub_args.geometric, "Class ranking; rank r keeps 0.5^r")
      ->delimiter(',');
  sub->add_option("--seed", sub_seed, "Sampling seed (default: COTM_SEED or 0)");

  // config
  auto* show = app.add_subcommand("config", "Print a run configuration with every key");
  std::string show_file;
  std::vector<std::string> show_sets;
  show->add_option("--config", show_file, "Start from this file");
  show->add_option("--set", show_sets, "Override one key (key=value)");

  // train
  TrainArgs train_args;
  std::string train_file;
  std::vector<std::string> train_sets;
  std::string train_path, test_path, model_path, report_path, summary_path;
  std::optional<std::uint32_t> epochs, trials;
  bool vanilla = false;
  auto* train = app.add_subcommand("train", "Train and write a model file");
  train->add_option("--config", train_file, "Run configuration file");
  train->add_option("--set", train_sets, "Override one config key (key=value)");
  train->add_option("--train", train_path, "Training dataset");
  train->add_option("--test", test_path, "Test dataset, scored after every epoch");
  train->add_option("--model", model_path, "Model output path");
  train->add_option("--report", report_path, "Per-epoch CSV output");
  train->add_option("--summary", summary_path, "JSON summary output");
  train->add_option("--epochs", epochs, "Epochs per trial");
  train->add_option("--trials", trials, "Independent trials");
  train->add_flag("--vanilla", vanilla, "Per-output clause pools with frozen weights");
  train->add_option("--threads", train_args.threads, "Worker threads (0: all cores)");

  // eval
  EvalArgs eval_args;
  auto* eval = app.add_subcommand("eval", "Score a model; prints sorted-key JSON");
  eval->add_option("--model", eval_args.model, "Model file")->required();
  eval->add_option("--data", eval_args.data, "Dataset")->required();
  eval->add_option("--threads", eval_args.threads, "Worker threads (0: all cores)");
  eval->add_flag("--empty-clause-zero", eval_args.empty_clause_zero,
                 "All-Exclude clauses output 0 instead of 1");

  // predict
  PredictArgs predict_args;
  bool raw_bits = false;
  auto* predict = app.add_subcommand("predict", "Print one prediction per example");
  predict->add_option("--model", predict_args.model, "Model file")->required();
  predict->add_option("--data", predict_args.data, "Dataset (outputs ignored)")->required();
  predict->add_option("--threads", predict_args.threads, "Worker threads (0: all cores)");
  predict->add_flag("--bits", raw_bits, "Print the output bits instead of the argmax label");

  // inspect
  InspectArgs inspect_args;
  auto* inspect = app.add_subcommand("inspect", "List the clauses with the largest weights");
  inspect->add_option("--model", inspect_args.model, "Model file")->required();
  inspect->add_option("--top", inspect_args.top, "Clauses to print")->capture_default_str();
  inspect->add_option("--vocab", inspect_args.vocab, "Feature names, one per line");
  inspect->add_flag("--names", inspect_args.names, "Render with names from --vocab");

  // oracle-check
  OracleCheckArgs oracle_args;
  std::optional<std::uint64_t> oracle_seed;
  auto* oracle = app.add_subcommand("oracle-check", "Compare the engine to the dense oracle");
  oracle->add_option("--instances", oracle_args.instances, "Random instances")
      ->capture_default_str();
  oracle->add_option("--steps", oracle_args.steps, "Training steps per instance")
      ->capture_default_str();
  oracle->add_option("--seeds", oracle_args.seeds, "Distinct seeds cycled over instances")
      ->capture_default_str();
  oracle->add_option("--seed", oracle_seed, "First seed (default: COTM_SEED or 0)");
  oracle->add_option("--threads", oracle_args.threads, "Engine worker threads")
      ->capture_default_str();
  oracle->add_flag("--inject-fault", oracle_args.inject_fault,
                   "Clip memory one state low, to prove the check fails");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    const auto env_seed = [] { return seed_from_environment().value_or(0); };
    if (*gen) {
      xor_args.seed = xor_seed.value_or(env_seed());
      cmd_generate_xor(xor_args, std::cout);
    } else if (*images) {
      cmd_prepare_images(image_args, std::cout);
    } else if (*text) {
      cmd_prepare_text(text_args, std::cout);
    } else if (*sub) {
      sub_args.seed = sub_seed.value_or(env_seed());
      cmd_subsample(sub_args, std::cout);
    } else if (*show) {
      std::cout << format_run_config(resolve_run_config(show_file, show_sets));
    } else if (*train) {
      RunConfig& rc = train_args.config;
      rc = resolve_run_config(train_file, train_sets);
      if (!train_path.empty()) rc.train = train_path;
      if (!test_path.empty()) rc.test = test_path;
      if (!model_path.empty()) rc.model = model_path;
      if (!report_path.empty()) rc.report = report_path;
      if (!summary_path.empty()) rc.summary = summary_path;
      if (epochs) rc.epochs = *epochs;
      if (trials) rc.trials = *trials;
      if (vanilla) rc.vanilla = true;
      cmd_train(train_args, std::cerr);
    } else if (*eval) {
      std::cout << cmd_eval(eval_args) << "\n";
    } else if (*predict) {
      predict_args.labels = !raw_bits;
      cmd_predict(predict_args, std::cout);
    } else if (*inspect) {
      cmd_inspect(inspect_args, std::cout);
    } else if (*oracle) {
      oracle_args.seed = oracle_seed.value_or(env_seed());
      return cmd_oracle_check(oracle_args, std::cout, std::cerr);
    }
  } catch (const cotm::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  }
  return kExitOk;
}
