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

// Metrics and the repeated-trial protocol.

#ifndef COTM_EVAL_HPP_
#define COTM_EVAL_HPP_

#include <cstdint>
#include <functional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "cotm/bits.hpp"
#include "cotm/config.hpp"
#include "cotm/dataset.hpp"
#include "cotm/model.hpp"
#include "cotm/thread_pool.hpp"

namespace cotm {

enum class Scoring {
  kPerOutput,  // every output bit scored on its own
  kArgmax,     // one label per row: largest vote sum, ties to the lowest index
};

const char* scoring_name(Scoring scoring);
Scoring parse_scoring(const std::string& name);  // "per_output" | "argmax"

struct DatasetPredictions {
  BitMatrix outputs;                // examples x m, unit step of the votes
  std::vector<std::int64_t> votes;  // examples x m, row-major
  std::uint32_t n_outputs = 0;

  // Row-wise argmax of the votes.
  std::vector<std::uint32_t> labels() const;
};

DatasetPredictions predict_dataset(const Model& model, const Dataset& data,
                                   ThreadPool* pool = nullptr,
                                   EmptyClauseOutput empty = EmptyClauseOutput::kTrue);

// Index of the largest value per row of a rows x width matrix; ties go low.
std::vector<std::uint32_t> argmax_rows(std::span<const std::int64_t> values, std::uint32_t width);
// Lowest set bit per row, or 0 for an all-zero row.
std::vector<std::uint32_t> argmax_rows(const BitMatrix& bits);

// per_output: matching bits / all bits. argmax: rows whose argmax agrees.
double accuracy(const BitMatrix& predicted, const BitMatrix& truth, Scoring scoring);
double label_accuracy(std::span<const std::uint32_t> predicted,
                      std::span<const std::uint32_t> truth);

// Accuracy of a model on a dataset; argmax scoring ranks vote sums.
double score(const DatasetPredictions& predictions, const Dataset& data, Scoring scoring);

// 2PR / (P + R), or 0 when P + R = 0.
double per_class_f1(std::span<const std::uint32_t> predicted, std::span<const std::uint32_t> truth,
                    std::uint32_t cls);

// Linear interpolation between closest ranks, q in [0, 1].
double percentile(std::vector<double> values, double q);

struct TrialOptions {
  std::uint32_t trials = 10;
  std::uint32_t epochs = 100;
  std::uint32_t tail = 25;
  bool shuffle = true;
  bool vanilla = false;
  Scoring scoring = Scoring::kArgmax;
  EmptyClauseOutput empty_clause = EmptyClauseOutput::kTrue;
  bool train_accuracy = true;  // also score the training set each epoch
  ThreadPool* pool = nullptr;
};

struct TrialReport {
  std::uint32_t trial = 0;
  Config config;  // seed = base seed + trial
  std::vector<double> train_accuracy;  // empty when not recorded
  std::vector<double> test_accuracy;
  std::vector<double> train_seconds;
  std::vector<double> test_seconds;
  std::vector<double> final_f1;  // per class, test set, after the last epoch
};

struct TrialSummary {
  std::vector<TrialReport> trials;
  std::uint32_t tail = 0;
  double mean = 0.0;  // mean over trials of the mean over the last `tail` epochs
  double p95 = 0.0;   // over the pooled tail-epoch accuracies
  double peak = 0.0;  // over the pooled tail-epoch accuracies
  double mean_train_seconds = 0.0;
  double mean_test_seconds = 0.0;
};

// Called after each epoch with the trial's report so far.
using EpochCallback = std::function<void(const TrialReport& report, std::uint32_t epoch)>;

// Trains one fresh model under seed config.seed + trial and returns it. With
// no test set the test fields of `report` stay empty; epochs may be 0.
Model run_trial(const Config& config, const Dataset& train, const Dataset* test,
                const TrialOptions& options, std::uint32_t trial, TrialReport& report,
                const EpochCallback& on_epoch = nullptr);

// Trains a fresh model per trial, seed config.seed + trial, and scores the
// test set after every epoch.
TrialSummary run_trials(const Config& config, const Dataset& train, const Dataset& test,
                        const TrialOptions& options, const EpochCallback& on_epoch = nullptr);

// Recomputes mean / p95 / peak from the per-trial curves.
void summarize(TrialSummary& summary, std::uint32_t tail);

// One row per (trial, epoch); accuracy columns without data are left empty:
// trial,seed,epoch,train_accuracy,test_accuracy,train_seconds,test_seconds
void write_epoch_csv_header(std::ostream& out);
void write_epoch_csv_row(std::ostream& out, const TrialReport& report, std::uint32_t epoch);
void write_epoch_csv(std::ostream& out, const TrialSummary& summary);

// Sorted-key JSON document; wall-clock fields omitted unless `timing`.
std::string summary_json(const TrialSummary& summary, bool timing = true);

}  // namespace cotm

#endif  // COTM_EVAL_HPP_
