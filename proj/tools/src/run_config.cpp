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

#include "cotm_cli/run_config.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "cotm/errors.hpp"

namespace cotm::cli {
namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

[[noreturn]] void bad_value(std::string_view key, std::string_view value, const char* expected) {
  throw ConfigError("bad value \"" + std::string(value) + "\" for " + std::string(key) +
                    " (expected " + expected + ")");
}

template <typename Int>
Int parse_int(std::string_view key, std::string_view value) {
  Int out{};
  const auto [end, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc() || end != value.data() + value.size()) {
    bad_value(key, value, "an unsigned integer");
  }
  return out;
}

double parse_real(std::string_view key, std::string_view value) {
  double out = 0.0;
  const auto [end, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc() || end != value.data() + value.size()) bad_value(key, value, "a number");
  return out;
}

bool parse_bool(std::string_view key, std::string_view value) {
  if (value == "true") return true;
  if (value == "false") return false;
  bad_value(key, value, "true or false");
}

std::string real(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

const char* boolean(bool v) { return v ? "true" : "false"; }

}  // namespace

const std::vector<std::string>& run_config_keys() {
  static const std::vector<std::string> keys = {
      "n_outputs", "n_clauses", "n_inputs", "memory_depth", "voting_margin",
      "specificity", "multiclass_scalar", "boost_true_positive", "seed",
      "train", "test", "model", "report", "summary",
      "epochs", "trials", "tail", "shuffle", "vanilla", "scoring",
  };
  return keys;
}

void set_run_config_value(RunConfig& c, std::string_view key, std::string_view value) {
  if (key == "n_outputs") c.n_outputs = parse_int<std::uint32_t>(key, value);
  else if (key == "n_clauses") c.n_clauses = parse_int<std::uint32_t>(key, value);
  else if (key == "n_inputs") c.n_inputs = parse_int<std::uint32_t>(key, value);
  else if (key == "memory_depth") c.memory_depth = parse_int<std::uint32_t>(key, value);
  else if (key == "voting_margin") c.voting_margin = parse_int<std::uint32_t>(key, value);
  else if (key == "specificity") c.specificity = parse_real(key, value);
  else if (key == "multiclass_scalar") {
    if (value == "one_hot") c.multiclass_scalar.reset();
    else c.multiclass_scalar = parse_real(key, value);
  }
  else if (key == "boost_true_positive") c.boost_true_positive = parse_bool(key, value);
  else if (key == "seed") c.seed = parse_int<std::uint64_t>(key, value);
  else if (key == "train") c.train = value;
  else if (key == "test") c.test = value;
  else if (key == "model") c.model = value;
  else if (key == "report") c.report = value;
  else if (key == "summary") c.summary = value;
  else if (key == "epochs") c.epochs = parse_int<std::uint32_t>(key, value);
  else if (key == "trials") c.trials = parse_int<std::uint32_t>(key, value);
  else if (key == "tail") c.tail = parse_int<std::uint32_t>(key, value);
  else if (key == "shuffle") c.shuffle = parse_bool(key, value);
  else if (key == "vanilla") c.vanilla = parse_bool(key, value);
  else if (key == "scoring") c.scoring = parse_scoring(std::string(value));
  else throw ConfigError("unknown config key \"" + std::string(key) + "\"");
}

RunConfig parse_run_config(std::string_view text) {
  RunConfig config;
  std::set<std::string, std::less<>> seen;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto newline = text.find('\n');
    std::string_view line = text.substr(0, newline);
    text = newline == std::string_view::npos ? std::string_view{} : text.substr(newline + 1);
    ++line_no;
    line = trim(line);
    if (line.empty() || line.front() == '#') continue;
    const auto eq = line.find('=');
    const std::string where = "line " + std::to_string(line_no) + ": ";
    if (eq == std::string_view::npos) {
      throw ConfigError(where + "expected key = value, got \"" + std::string(line) + "\"");
    }
    const std::string_view key = trim(line.substr(0, eq));
    const std::string_view value = trim(line.substr(eq + 1));
    if (!seen.insert(std::string(key)).second) {
      throw ConfigError(where + "repeated key \"" + std::string(key) + "\"");
    }
    try {
      set_run_config_value(config, key, value);
    } catch (const ConfigError& e) {
      throw ConfigError(where + e.what());
    }
  }
  return config;
}

RunConfig load_run_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open config " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  try {
    return parse_run_config(buffer.str());
  } catch (const ConfigError& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

std::string format_run_config(const RunConfig& c) {
  std::ostringstream out;
  out << "n_outputs = " << c.n_outputs << '\n'
      << "n_clauses = " << c.n_clauses << '\n'
      << "n_inputs = " << c.n_inputs << '\n'
      << "memory_depth = " << c.memory_depth << '\n'
      << "voting_margin = " << c.voting_margin << '\n'
      << "specificity = " << real(c.specificity) << '\n'
      << "multiclass_scalar = "
      << (c.multiclass_scalar ? real(*c.multiclass_scalar) : std::string("one_hot")) << '\n'
      << "boost_true_positive = " << boolean(c.boost_true_positive) << '\n'
      << "seed = " << c.seed << '\n'
      << "train = " << c.train << '\n'
      << "test = " << c.test << '\n'
      << "model = " << c.model << '\n'
      << "report = " << c.report << '\n'
      << "summary = " << c.summary << '\n'
      << "epochs = " << c.epochs << '\n'
      << "trials = " << c.trials << '\n'
      << "tail = " << c.tail << '\n'
      << "shuffle = " << boolean(c.shuffle) << '\n'
      << "vanilla = " << boolean(c.vanilla) << '\n'
      << "scoring = " << scoring_name(c.scoring) << '\n';
  return out.str();
}

Config machine_config(const RunConfig& c, std::uint32_t data_inputs, std::uint32_t data_outputs) {
  if (c.n_inputs != 0 && c.n_inputs != data_inputs) {
    throw ShapeError("config n_inputs = " + std::to_string(c.n_inputs) + " but the dataset has " +
                     std::to_string(data_inputs) + " inputs");
  }
  if (c.n_outputs != 0 && c.n_outputs != data_outputs) {
    throw ShapeError("config n_outputs = " + std::to_string(c.n_outputs) +
                     " but the dataset has " + std::to_string(data_outputs) + " outputs");
  }
  Config out;
  out.n_outputs = data_outputs;
  out.n_clauses = c.n_clauses;
  out.n_inputs = data_inputs;
  out.memory_depth = c.memory_depth;
  out.voting_margin = c.voting_margin;
  out.specificity = c.specificity;
  out.multiclass_scalar =
      c.multiclass_scalar ? *c.multiclass_scalar : one_hot_multiclass_scalar(data_outputs);
  out.boost_true_positive = c.boost_true_positive;
  out.seed = c.seed;
  out.validate();
  return out;
}

}  // namespace cotm::cli
