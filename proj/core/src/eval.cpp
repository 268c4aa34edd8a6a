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

#include "cotm/eval.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <nlohmann/json.hpp>

#include "cotm/errors.hpp"
#include "cotm/learn.hpp"

namespace cotm {
namespace {

std::string number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

double mean_of(std::span<const double> v) {
  double sum = 0.0;
  for (double x : v) sum += x;
  return v.empty() ? 0.0 : sum / static_cast<double>(v.size());
}

}  // namespace

const char* scoring_name(Scoring scoring) {
  return scoring == Scoring::kArgmax ? "argmax" : "per_output";
}

Scoring parse_scoring(const std::string& name) {
  if (name == "argmax") return Scoring::kArgmax;
  if (name == "per_output") return Scoring::kPerOutput;
  throw ConfigError("unknown scoring mode \"" + name + "\" (expected argmax or per_output)");
}

std::vector<std::uint32_t> DatasetPredictions::labels() const {
  return argmax_rows(votes, n_outputs);
}

DatasetPredictions predict_dataset(const Model& model, const Dataset& data, ThreadPool* pool,
                                   EmptyClauseOutput empty) {
  const Config& c = model.config();
  if (data.n_inputs() != c.n_inputs || data.n_outputs() != c.n_outputs) {
    throw ShapeError("predict_dataset: dataset is " + std::to_string(data.n_inputs()) + " -> " +
                     std::to_string(data.n_outputs()) + ", model is " + std::to_string(c.n_inputs) +
                     " -> " + std::to_string(c.n_outputs));
  }
  DatasetPredictions out;
  out.n_outputs = c.n_outputs;
  out.outputs = BitMatrix(data.size(), c.n_outputs);
  out.votes.assign(data.size() * c.n_outputs, 0);
  parallel_for(pool, data.size(), [&](std::size_t begin, std::size_t end) {
    for (std::size_t r = begin; r < end; ++r) {
      const Prediction p = predict_votes(model, data.input(r), empty);
      std::copy(p.votes.begin(), p.votes.end(), out.votes.begin() + r * c.n_outputs);
    }
  });
  // Written serially: rows of the bit matrix may share words.
  for (std::size_t r = 0; r < data.size(); ++r) {
    for (std::uint32_t i = 0; i < c.n_outputs; ++i) {
      out.outputs.set(r, i, out.votes[r * c.n_outputs + i] >= 0);
    }
  }
  return out;
}

std::vector<std::uint32_t> argmax_rows(std::span<const std::int64_t> values, std::uint32_t width) {
  if (width == 0 || values.size() % width != 0) {
    throw ShapeError("argmax_rows: " + std::to_string(values.size()) +
                     " values do not form rows of width " + std::to_string(width));
  }
  std::vector<std::uint32_t> out(values.size() / width);
  for (std::size_t r = 0; r < out.size(); ++r) {
    auto row = values.subspan(r * width, width);
    out[r] = static_cast<std::uint32_t>(std::max_element(row.begin(), row.end()) - row.begin());
  }
  return out;
}

std::vector<std::uint32_t> argmax_rows(const BitMatrix& bits) {
  std::vector<std::uint32_t> out(bits.rows(), 0);
  for (std::size_t r = 0; r < bits.rows(); ++r) {
    for (std::size_t i = 0; i < bits.cols(); ++i) {
      if (bits.test(r, i)) {
        out[r] = static_cast<std::uint32_t>(i);
        break;
      }
    }
  }
  return out;
}

double accuracy(const BitMatrix& predicted, const BitMatrix& truth, Scoring scoring) {
  if (predicted.rows() != truth.rows() || predicted.cols() != truth.cols()) {
    throw ShapeError("accuracy: predicted is " + std::to_string(predicted.rows()) + "x" +
                     std::to_string(predicted.cols()) + ", truth is " +
                     std::to_string(truth.rows()) + "x" + std::to_string(truth.cols()));
  }
  if (truth.rows() == 0) throw InputError("accuracy: no examples");
  if (scoring == Scoring::kArgmax) {
    return label_accuracy(argmax_rows(predicted), argmax_rows(truth));
  }
  std::size_t correct = 0;
  for (std::size_t r = 0; r < truth.rows(); ++r) {
    for (std::size_t i = 0; i < truth.cols(); ++i) correct += predicted.test(r, i) == truth.test(r, i);
  }
  return static_cast<double>(correct) / static_cast<double>(truth.rows() * truth.cols());
}

double label_accuracy(std::span<const std::uint32_t> predicted,
                      std::span<const std::uint32_t> truth) {
  if (predicted.size() != truth.size()) {
    throw ShapeError("label_accuracy: " + std::to_string(predicted.size()) + " predictions for " +
                     std::to_string(truth.size()) + " labels");
  }
  if (truth.empty()) throw InputError("label_accuracy: no examples");
  std::size_t correct = 0;
  for (std::size_t r = 0; r < truth.size(); ++r) correct += predicted[r] == truth[r];
  return static_cast<double>(correct) / static_cast<double>(truth.size());
}

double score(const DatasetPredictions& predictions, const Dataset& data, Scoring scoring) {
  if (scoring == Scoring::kPerOutput) return accuracy(predictions.outputs, data.y, scoring);
  return label_accuracy(predictions.labels(), argmax_rows(data.y));
}

double per_class_f1(std::span<const std::uint32_t> predicted, std::span<const std::uint32_t> truth,
                    std::uint32_t cls) {
  if (predicted.size() != truth.size()) {
    throw ShapeError("per_class_f1: " + std::to_string(predicted.size()) + " predictions for " +
                     std::to_string(truth.size()) + " labels");
  }
  std::size_t tp = 0, fp = 0, fn = 0;
  for (std::size_t r = 0; r < truth.size(); ++r) {
    const bool p = predicted[r] == cls;
    const bool t = truth[r] == cls;
    tp += p && t;
    fp += p && !t;
    fn += !p && t;
  }
  const double precision = tp + fp == 0 ? 0.0 : static_cast<double>(tp) / static_cast<double>(tp + fp);
  const double recall = tp + fn == 0 ? 0.0 : static_cast<double>(tp) / static_cast<double>(tp + fn);
  if (precision + recall == 0.0) return 0.0;
  return 2.0 * precision * recall / (precision + recall);
}

double percentile(std::vector<double> values, double q) {
  if (values.empty()) throw InputError("percentile: no values");
  if (!(q >= 0.0 && q <= 1.0)) throw ConfigError("percentile: q must be in [0, 1]");
  std::sort(values.begin(), values.end());
  const double rank = q * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(rank));
  const std::size_t hi = std::min(lo + 1, values.size() - 1);
  const double frac = rank - static_cast<double>(lo);
  return values[lo] + frac * (values[hi] - values[lo]);
}

void summarize(TrialSummary& s, std::uint32_t tail) {
  s.tail = tail;
  std::vector<double> pooled;
  double mean_sum = 0.0;
  std::vector<double> train_seconds;
  std::vector<double> test_seconds;
  for (const auto& t : s.trials) {
    if (tail == 0 || tail > t.test_accuracy.size()) {
      throw ConfigError("summarize: tail " + std::to_string(tail) + " outside [1, " +
                        std::to_string(t.test_accuracy.size()) + "]");
    }
    std::span<const double> last(t.test_accuracy.end() - tail, t.test_accuracy.end());
    mean_sum += mean_of(last);
    pooled.insert(pooled.end(), last.begin(), last.end());
    train_seconds.insert(train_seconds.end(), t.train_seconds.begin(), t.train_seconds.end());
    test_seconds.insert(test_seconds.end(), t.test_seconds.begin(), t.test_seconds.end());
  }
  if (s.trials.empty()) throw ConfigError("summarize: no trials");
  s.mean = mean_sum / static_cast<double>(s.trials.size());
  s.p95 = percentile(pooled, 0.95);
  s.peak = *std::max_element(pooled.begin(), pooled.end());
  s.mean_train_seconds = mean_of(train_seconds);
  s.mean_test_seconds = mean_of(test_seconds);
}

Model run_trial(const Config& config, const Dataset& train, const Dataset* test,
                const TrialOptions& opt, std::uint32_t trial, TrialReport& report,
                const EpochCallback& on_epoch) {
  config.validate();
  if (test != nullptr && test->empty()) throw InputError("run_trial: test set is empty");
  report = TrialReport{};
  report.trial = trial;
  report.config = config;
  report.config.seed = config.seed + trial;
  Model model = opt.vanilla ? init_vanilla(report.config) : init_coalesced(report.config);
  const RandomSource rng(report.config.seed);
  for (std::uint32_t epoch = 0; epoch < opt.epochs; ++epoch) {
    auto start = std::chrono::steady_clock::now();
    fit_epoch(model, train, rng, epoch, opt.shuffle, opt.pool);
    report.train_seconds.push_back(seconds_since(start));
    if (test != nullptr) {
      start = std::chrono::steady_clock::now();
      report.test_accuracy.push_back(
          score(predict_dataset(model, *test, opt.pool, opt.empty_clause), *test, opt.scoring));
      report.test_seconds.push_back(seconds_since(start));
    }
    if (opt.train_accuracy) {
      report.train_accuracy.push_back(
          score(predict_dataset(model, train, opt.pool, opt.empty_clause), train, opt.scoring));
    }
    if (on_epoch) on_epoch(report, epoch);
  }
  if (test != nullptr) {
    const std::vector<std::uint32_t> truth = argmax_rows(test->y);
    const std::vector<std::uint32_t> labels =
        predict_dataset(model, *test, opt.pool, opt.empty_clause).labels();
    for (std::uint32_t cls = 0; cls < test->n_outputs(); ++cls) {
      report.final_f1.push_back(per_class_f1(labels, truth, cls));
    }
  }
  return model;
}

TrialSummary run_trials(const Config& config, const Dataset& train, const Dataset& test,
                        const TrialOptions& opt, const EpochCallback& on_epoch) {
  if (opt.trials == 0) throw ConfigError("run_trials: trials must be >= 1");
  if (opt.epochs == 0) throw ConfigError("run_trials: epochs must be >= 1");
  if (opt.tail == 0 || opt.tail > opt.epochs) {
    throw ConfigError("run_trials: tail must be in [1, epochs]");
  }
  if (test.empty()) throw InputError("run_trials: test set is empty");

  TrialSummary summary;
  for (std::uint32_t trial = 0; trial < opt.trials; ++trial) {
    TrialReport report;
    run_trial(config, train, &test, opt, trial, report, on_epoch);
    summary.trials.push_back(std::move(report));
  }
  summarize(summary, opt.tail);
  return summary;
}

void write_epoch_csv_header(std::ostream& out) {
  out << "trial,seed,epoch,train_accuracy,test_accuracy,train_seconds,test_seconds\n";
}

void write_epoch_csv_row(std::ostream& out, const TrialReport& r, std::uint32_t epoch) {
  out << r.trial << ',' << r.config.seed << ',' << epoch << ','
      << (epoch < r.train_accuracy.size() ? number(r.train_accuracy[epoch]) : std::string()) << ','
      << (epoch < r.test_accuracy.size() ? number(r.test_accuracy[epoch]) : std::string()) << ','
      << number(r.train_seconds.at(epoch)) << ','
      << (epoch < r.test_seconds.size() ? number(r.test_seconds[epoch]) : std::string()) << '\n';
}

void write_epoch_csv(std::ostream& out, const TrialSummary& summary) {
  write_epoch_csv_header(out);
  for (const auto& r : summary.trials) {
    for (std::uint32_t e = 0; e < r.train_seconds.size(); ++e) write_epoch_csv_row(out, r, e);
  }
}

std::string summary_json(const TrialSummary& s, bool timing) {
  nlohmann::json doc;
  doc["tail"] = s.tail;
  doc["mean_test_accuracy"] = s.mean;
  doc["p95_test_accuracy"] = s.p95;
  doc["peak_test_accuracy"] = s.peak;
  if (timing) {
    doc["mean_train_seconds_per_epoch"] = s.mean_train_seconds;
    doc["mean_test_seconds_per_epoch"] = s.mean_test_seconds;
  }
  nlohmann::json trials = nlohmann::json::array();
  for (const auto& t : s.trials) {
    nlohmann::json j;
    j["trial"] = t.trial;
    j["seed"] = t.config.seed;
    j["config"] = to_string(t.config);
    j["test_accuracy"] = t.test_accuracy;
    if (!t.train_accuracy.empty()) j["train_accuracy"] = t.train_accuracy;
    j["final_f1"] = t.final_f1;
    if (timing) {
      j["train_seconds"] = t.train_seconds;
      j["test_seconds"] = t.test_seconds;
    }
    trials.push_back(std::move(j));
  }
  doc["trials"] = std::move(trials);
  return doc.dump(2) + "\n";
}

}  // namespace cotm
