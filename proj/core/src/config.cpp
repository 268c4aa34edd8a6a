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

#include "cotm/config.hpp"

#include <cmath>
#include <sstream>

#include "cotm/errors.hpp"
#include "cotm/random.hpp"

namespace cotm {

void Config::validate() const {
  auto fail = [](const std::string& what) { throw ConfigError("invalid config: " + what); };
  if (n_outputs < 1) fail("n_outputs must be >= 1");
  if (n_clauses < 1) fail("n_clauses must be >= 1");
  if (n_inputs < 1) fail("n_inputs must be >= 1");
  if (memory_depth < 1) fail("memory_depth must be >= 1");
  if (memory_depth > (1u << 30)) fail("memory_depth must be <= 2^30");
  if (voting_margin < 1) fail("voting_margin must be >= 1");
  if (!std::isfinite(specificity) || specificity < 1.0) fail("specificity must be >= 1");
  if (!(multiclass_scalar > 0.0 && multiclass_scalar <= 1.0)) {
    fail("multiclass_scalar must lie in (0, 1]");
  }
  if (n_outputs > RandomSource::kMaxOutputs) fail("n_outputs exceeds the random addressing range");
  const std::uint64_t blocks =
      std::uint64_t{n_clauses} * RandomSource::blocks_per_row(n_literals());
  if (blocks > RandomSource::kMaxBlocks) {
    fail("n_clauses * n_inputs exceeds the random addressing range");
  }
}

double one_hot_multiclass_scalar(std::uint32_t n_outputs) {
  return n_outputs <= 1 ? 1.0 : 1.0 / static_cast<double>(n_outputs - 1);
}

std::string to_string(const Config& c) {
  std::ostringstream out;
  out.precision(17);
  out << "m=" << c.n_outputs << " n=" << c.n_clauses << " o=" << c.n_inputs
      << " N=" << c.memory_depth << " t=" << c.voting_margin << " s=" << c.specificity
      << " e=" << c.multiclass_scalar << " boost=" << (c.boost_true_positive ? 1 : 0)
      << " seed=" << c.seed;
  return out.str();
}

}  // namespace cotm
