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

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "../byte_io.hpp"
#include "cotm/data.hpp"
#include "cotm/errors.hpp"

namespace cotm {
namespace {

bool word_char(unsigned char ch) {
  return (ch >= 'a' && ch <= 'z') || (ch >= 'A' && ch <= 'Z') || (ch >= '0' && ch <= '9') ||
         ch >= 0x80;
}

}  // namespace

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> tokens;
  std::string current;
  for (char raw : text) {
    const auto ch = static_cast<unsigned char>(raw);
    if (word_char(ch)) {
      current += (ch >= 'A' && ch <= 'Z') ? static_cast<char>(ch - 'A' + 'a') : raw;
    } else if (!current.empty()) {
      tokens.push_back(std::move(current));
      current.clear();
    }
  }
  if (!current.empty()) tokens.push_back(std::move(current));
  return tokens;
}

Vocabulary::Vocabulary(std::vector<std::string> tokens) : tokens_(std::move(tokens)) {
  for (std::size_t v = 0; v < tokens_.size(); ++v) {
    if (tokens_[v].empty()) throw InputError("vocabulary: empty token at index " + std::to_string(v));
    if (!index_.emplace(tokens_[v], static_cast<std::uint32_t>(v)).second) {
      throw InputError("vocabulary: duplicate token \"" + tokens_[v] + "\" at index " +
                       std::to_string(v));
    }
  }
}

std::optional<std::uint32_t> Vocabulary::find(std::string_view token) const {
  auto it = index_.find(std::string(token));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

Vocabulary build_vocabulary(std::span<const std::string> texts, std::size_t max_size) {
  if (max_size == 0) throw ConfigError("build_vocabulary: max_size must be >= 1");
  if (texts.empty()) throw InputError("build_vocabulary: corpus is empty");
  std::map<std::string, std::size_t> document_frequency;
  for (const auto& text : texts) {
    auto tokens = tokenize(text);
    for (const auto& token : std::set<std::string>(tokens.begin(), tokens.end())) {
      ++document_frequency[token];
    }
  }
  if (document_frequency.empty()) throw InputError("build_vocabulary: corpus has no tokens");
  std::vector<std::pair<std::string, std::size_t>> ranked(document_frequency.begin(),
                                                          document_frequency.end());
  // The map is already lexicographic, so a stable sort on frequency keeps ties ordered.
  std::stable_sort(ranked.begin(), ranked.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });
  if (ranked.size() > max_size) ranked.resize(max_size);
  std::vector<std::string> tokens;
  for (auto& [token, df] : ranked) tokens.push_back(token);
  return Vocabulary(std::move(tokens));
}

BitVector sow_vectorize(std::string_view text, const Vocabulary& vocabulary) {
  BitVector bits(vocabulary.size());
  for (const auto& token : tokenize(text)) {
    if (auto v = vocabulary.find(token)) bits.set(*v);
  }
  return bits;
}

void save_vocabulary(const std::filesystem::path& path, const Vocabulary& vocabulary) {
  std::string content;
  for (const auto& token : vocabulary.tokens()) content += token + "\n";
  detail::write_file(path, std::span<const std::uint8_t>(
                               reinterpret_cast<const std::uint8_t*>(content.data()), content.size()));
}

Vocabulary load_vocabulary(const std::filesystem::path& path) {
  const auto bytes = detail::read_file(path);
  std::vector<std::string> tokens;
  std::string line;
  for (std::uint8_t b : bytes) {
    if (b == '\n') {
      if (!line.empty() && line.back() == '\r') line.pop_back();
      tokens.push_back(std::move(line));
      line.clear();
    } else {
      line += static_cast<char>(b);
    }
  }
  if (!line.empty()) tokens.push_back(std::move(line));
  try {
    return Vocabulary(std::move(tokens));
  } catch (const InputError& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

std::vector<LabeledText> parse_labeled_texts(std::string_view content) {
  std::vector<LabeledText> out;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < content.size()) {
    std::size_t end = content.find('\n', pos);
    if (end == std::string_view::npos) end = content.size();
    std::string_view line = content.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    const std::size_t tab = line.find('\t');
    const std::string_view label = line.substr(0, tab);
    bool digits = !label.empty() && tab != std::string_view::npos;
    for (char ch : label) digits = digits && ch >= '0' && ch <= '9';
    if (!digits || label.size() > 9) {
      throw FormatError("text corpus: line " + std::to_string(line_no) +
                        ": expected \"<label>\\t<text>\" with a non-negative integer label");
    }
    out.push_back({static_cast<std::uint32_t>(std::stoul(std::string(label))),
                   std::string(line.substr(tab + 1))});
  }
  return out;
}

std::vector<LabeledText> load_labeled_texts(const std::filesystem::path& path) {
  const auto bytes = detail::read_file(path);
  try {
    return parse_labeled_texts(
        std::string_view(reinterpret_cast<const char*>(bytes.data()), bytes.size()));
  } catch (const FormatError& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

Dataset texts_to_dataset(std::span<const LabeledText> texts, const Vocabulary& vocabulary,
                         std::uint32_t n_classes) {
  if (vocabulary.size() == 0) throw InputError("texts_to_dataset: vocabulary is empty");
  BitMatrix x(texts.size(), vocabulary.size());
  std::vector<std::uint32_t> labels(texts.size());
  for (std::size_t r = 0; r < texts.size(); ++r) {
    if (texts[r].label >= n_classes) {
      throw InputError("texts_to_dataset: label " + std::to_string(texts[r].label) +
                       " of example " + std::to_string(r) + " exceeds " +
                       std::to_string(n_classes) + " classes");
    }
    x.set_row(r, sow_vectorize(texts[r].text, vocabulary));
    labels[r] = texts[r].label;
  }
  Dataset d(std::move(x), one_hot(labels, n_classes));
  d.feature_names = vocabulary.tokens();
  for (std::uint32_t c = 0; c < n_classes; ++c) d.class_names.push_back(std::to_string(c));
  return d;
}

}  // namespace cotm
