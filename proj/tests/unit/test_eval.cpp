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

#include <gtest/gtest.h>

#include <cstdint>
#include <nlohmann/json.hpp>
#include <sstream>
#include <string>
#include <vector>

#include "cotm/data.hpp"
#include "cotm/errors.hpp"
#include "cotm/eval.hpp"
#include "fixtures.hpp"

namespace cotm {
namespace {

BitMatrix rows_of(std::initializer_list<std::initializer_list<int>> rows) {
  BitMatrix m(rows.size(), rows.begin()->size());
  std::size_t r = 0;
  for (const auto& row : rows) m.set_row(r++, BitVector::from_values(row));
  return m;
}

TEST(Accuracy, IdenticalAndComplement) {
  const BitMatrix a = rows_of({{1, 0, 1}, {0, 1, 1}});
  const BitMatrix complement = rows_of({{0, 1, 0}, {1, 0, 0}});
  EXPECT_EQ(accuracy(a, a, Scoring::kPerOutput), 1.0);
  EXPECT_EQ(accuracy(a, a, Scoring::kArgmax), 1.0);
  EXPECT_EQ(accuracy(complement, a, Scoring::kPerOutput), 0.0);
}

TEST(Accuracy, ArgmaxCountsRows) {
  const std::vector<std::uint32_t> predicted{0, 1, 2, 2}, truth{0, 1, 2, 0};
  EXPECT_EQ(label_accuracy(predicted, truth), 0.75);
  EXPECT_THROW(label_accuracy(std::vector<std::uint32_t>{}, std::vector<std::uint32_t>{}),
               InputError);
}

TEST(ArgmaxRows, TiesGoLow) {
  const std::vector<std::int64_t> votes{3, 3, 1, -5, -2, -2};
  EXPECT_EQ(argmax_rows(votes, 3), (std::vector<std::uint32_t>{0, 1}));
  EXPECT_EQ(argmax_rows(rows_of({{0, 1, 1}, {0, 0, 0}})), (std::vector<std::uint32_t>{1, 0}));
}

TEST(PerClassF1, Examples) {
  const std::vector<std::uint32_t> truth{0, 0, 1, 1};
  EXPECT_EQ(per_class_f1(truth, truth, 0), 1.0);
  const std::vector<std::uint32_t> never_one{0, 0, 0, 0};
  EXPECT_EQ(per_class_f1(never_one, truth, 1), 0.0);
  // Class 0: one hit, one false alarm, one miss.
  const std::vector<std::uint32_t> half{0, 1, 0, 1};
  const std::vector<std::uint32_t> half_truth{0, 0, 1, 1};
  EXPECT_DOUBLE_EQ(per_class_f1(half, half_truth, 0), 0.5);
}

TEST(Percentile, LinearInterpolation) {
  EXPECT_EQ(percentile({4, 1, 3, 2}, 0.0), 1.0);
  EXPECT_EQ(percentile({4, 1, 3, 2}, 1.0), 4.0);
  EXPECT_DOUBLE_EQ(percentile({1, 2, 3, 4, 5}, 0.95), 4.8);
  EXPECT_THROW(percentile({}, 0.5), InputError);
  EXPECT_THROW(percentile({1.0}, 1.5), ConfigError);
}

TEST(Scoring, NamesRoundTrip) {
  EXPECT_EQ(parse_scoring(scoring_name(Scoring::kArgmax)), Scoring::kArgmax);
  EXPECT_EQ(parse_scoring(scoring_name(Scoring::kPerOutput)), Scoring::kPerOutput);
  EXPECT_THROW(parse_scoring("top5"), ConfigError);
}

TEST(PredictDataset, MatchesSinglePredictions) {
  const Model model = testing::xor_and_or_machine();
  BitMatrix x = rows_of({{0, 0}, {0, 1}, {1, 0}, {1, 1}});
  const Dataset data(x, rows_of({{0, 0, 0}, {1, 0, 1}, {1, 0, 1}, {0, 1, 1}}));
  ThreadPool pool(2);
  const DatasetPredictions p = predict_dataset(model, data, &pool);
  for (std::size_t r = 0; r < 4; ++r) {
    EXPECT_EQ(p.outputs.row_vector(r), predict(model, data.input(r)));
  }
  EXPECT_EQ(score(p, data, Scoring::kPerOutput), 1.0);
}

struct SmallRun {
  Config config;
  SplitDataset data;
};

SmallRun small_run() {
  SmallRun run;
  run.data = generate_noisy_xor({.n_train = 300, .n_test = 200, .label_noise = 0.1, .seed = 2});
  run.config.n_outputs = 2;
  run.config.n_clauses = 20;
  run.config.n_inputs = kXorInputs;
  run.config.memory_depth = 16;
  run.config.voting_margin = 10;
  run.config.specificity = 3.0;
  run.config.seed = 70;
  return run;
}

TEST(RunTrials, TailOfOneIsTheFinalEpoch) {
  const SmallRun run = small_run();
  TrialOptions options;
  options.trials = 1;
  options.epochs = 3;
  options.tail = 1;
  const TrialSummary summary = run_trials(run.config, run.data.train, run.data.test, options);
  ASSERT_EQ(summary.trials.size(), 1u);
  const auto& curve = summary.trials[0].test_accuracy;
  ASSERT_EQ(curve.size(), 3u);
  EXPECT_EQ(summary.mean, curve.back());
  EXPECT_EQ(summary.peak, curve.back());
  EXPECT_EQ(summary.p95, curve.back());
  EXPECT_EQ(summary.trials[0].final_f1.size(), 2u);
}

TEST(RunTrials, SeedsAdvancePerTrialAndRerunsMatch) {
  const SmallRun run = small_run();
  TrialOptions options;
  options.trials = 2;
  options.epochs = 2;
  options.tail = 2;
  const TrialSummary a = run_trials(run.config, run.data.train, run.data.test, options);
  const TrialSummary b = run_trials(run.config, run.data.train, run.data.test, options);
  EXPECT_EQ(a.trials[0].config.seed, 70u);
  EXPECT_EQ(a.trials[1].config.seed, 71u);
  EXPECT_EQ(summary_json(a, false), summary_json(b, false));
}

TEST(RunTrials, RejectsBadProtocol) {
  const SmallRun run = small_run();
  TrialOptions options;
  options.epochs = 2;
  options.tail = 3;
  EXPECT_THROW(run_trials(run.config, run.data.train, run.data.test, options), ConfigError);
  options.tail = 1;
  options.trials = 0;
  EXPECT_THROW(run_trials(run.config, run.data.train, run.data.test, options), ConfigError);
}

TEST(RunTrial, ZeroEpochsReturnsTheInitialModel) {
  const SmallRun run = small_run();
  TrialReport report;
  TrialOptions options;
  options.epochs = 0;
  const Model model = run_trial(run.config, run.data.train, nullptr, options, 0, report);
  EXPECT_EQ(model, init_coalesced(run.config));
  EXPECT_TRUE(report.test_accuracy.empty());
}

TEST(Reports, CsvAndJsonShapes) {
  const SmallRun run = small_run();
  TrialOptions options;
  options.trials = 2;
  options.epochs = 2;
  options.tail = 1;
  const TrialSummary summary = run_trials(run.config, run.data.train, run.data.test, options);

  std::ostringstream csv;
  write_epoch_csv(csv, summary);
  std::istringstream lines(csv.str());
  std::string line;
  std::getline(lines, line);
  EXPECT_EQ(line, "trial,seed,epoch,train_accuracy,test_accuracy,train_seconds,test_seconds");
  int rows = 0;
  while (std::getline(lines, line)) {
    ++rows;
    EXPECT_EQ(std::count(line.begin(), line.end(), ','), 6) << line;
  }
  EXPECT_EQ(rows, 4);

  const auto doc = nlohmann::json::parse(summary_json(summary, false));
  EXPECT_EQ(doc["tail"], 1);
  EXPECT_EQ(doc["trials"].size(), 2u);
  EXPECT_FALSE(doc.contains("mean_train_seconds_per_epoch"));
  EXPECT_DOUBLE_EQ(doc["mean_test_accuracy"].get<double>(), summary.mean);
  EXPECT_TRUE(nlohmann::json::parse(summary_json(summary)).contains("mean_train_seconds_per_epoch"));
}

}  // namespace
}  // namespace cotm
