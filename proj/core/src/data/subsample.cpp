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

#include <cmath>
#include <set>
#include <string>

#include "cotm/data.hpp"
#include "cotm/errors.hpp"
#include "sampling.hpp"

namespace cotm {
namespace {

void check_class(std::uint32_t cls, const Dataset& data) {
  if (cls >= data.n_outputs()) {
    throw InputError("subsample_imbalance: unknown class " + std::to_string(cls) + " (dataset has " +
                     std::to_string(data.n_outputs()) + ")");
  }
}

}  // namespace

Dataset subsample_imbalance(const Dataset& data, const ImbalanceMode& mode, std::uint64_t seed) {
  const std::vector<std::uint32_t> labels = class_labels(data);
  // keep_count[c] = examples of class c to retain; classes without an entry stay whole.
  std::vector<std::optional<std::size_t>> keep_count(data.n_outputs());
  std::vector<std::size_t> class_size(data.n_outputs() + 1, 0);
  for (auto c : labels) ++class_size[c];

  if (const auto* remove = std::get_if<RemoveFraction>(&mode)) {
    check_class(remove->cls, data);
    if (!(remove->fraction >= 0.0 && remove->fraction <= 1.0)) {
      throw ConfigError("subsample_imbalance: fraction must be in [0, 1]");
    }
    const std::size_t count = class_size[remove->cls];
    keep_count[remove->cls] =
        count - static_cast<std::size_t>(std::llround(remove->fraction * static_cast<double>(count)));
  } else {
    const auto& ranking = std::get<Geometric>(mode).ranking;
    std::set<std::uint32_t> seen;
    for (std::size_t r = 0; r < ranking.size(); ++r) {
      check_class(ranking[r], data);
      if (!seen.insert(ranking[r]).second) {
        throw ConfigError("subsample_imbalance: class " + std::to_string(ranking[r]) +
                          " ranked twice");
      }
      const std::size_t count = class_size[ranking[r]];
      keep_count[ranking[r]] = r >= 64 ? 0 : count >> r;  // floor(0.5^r * count)
    }
  }

  std::mt19937_64 gen(seed);
  std::vector<bool> keep(data.size(), true);
  for (std::uint32_t c = 0; c < data.n_outputs(); ++c) {
    if (!keep_count[c]) continue;
    std::vector<std::size_t> members;
    for (std::size_t r = 0; r < data.size(); ++r) {
      if (labels[r] == c) members.push_back(r);
    }
    for (std::size_t r : members) keep[r] = false;
    for (std::size_t pos : detail::choose(gen, members.size(), *keep_count[c])) {
      keep[members[pos]] = true;
    }
  }
  std::vector<std::size_t> rows;
  for (std::size_t r = 0; r < data.size(); ++r) {
    if (keep[r]) rows.push_back(r);
  }
  return data.select(rows);
}

}  // namespace cotm
