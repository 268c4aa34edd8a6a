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

// Counter-based randomness for training.
//
// Every random value used by a training step is addressed by its coordinates
// (epoch, example, site, output i, clause j, literal k) and computed with
// Philox4x32-10, so the value never depends on evaluation order or on how the
// work is split across threads. The Philox counter is laid out as
//
//   c0 = epoch
//   c1 = example index
//   c2 = site << 24 | output
//   c3 = block index
//
// with the 64-bit seed as the key. Pair sites (Type I / Type II selection)
// pack four consecutive clauses into one block; literal sites (Type Ia / Ib
// gating) give each clause row ceil(2o / 4) blocks.

#ifndef COTM_RANDOM_HPP_
#define COTM_RANDOM_HPP_

#include <array>
#include <cstdint>
#include <span>

namespace cotm {

using PhiloxCounter = std::array<std::uint32_t, 4>;
using PhiloxKey = std::array<std::uint32_t, 2>;

PhiloxCounter philox4x32_10(PhiloxCounter counter, PhiloxKey key);

enum class Site : std::uint32_t {
  kTypeI = 1,
  kTypeII = 2,
  kTypeIa = 3,
  kTypeIb = 4,
  kShuffle = 5,
  kInit = 6,
};

const char* site_name(Site site);

// Position of one training step within a run.
struct StepKey {
  std::uint32_t epoch = 0;
  std::uint32_t example = 0;
  friend bool operator==(const StepKey&, const StepKey&) = default;
};

class RandomSource {
 public:
  static constexpr std::uint32_t kMaxOutputs = 1u << 24;
  static constexpr std::uint64_t kMaxBlocks = std::uint64_t{1} << 32;

  static constexpr std::uint32_t blocks_per_row(std::uint32_t n_literals) {
    return (n_literals + 3) / 4;
  }
  static double to_unit(std::uint32_t bits) { return bits * 0x1p-32; }

  explicit RandomSource(std::uint64_t seed) : seed_(seed) {}
  std::uint64_t seed() const { return seed_; }

  PhiloxCounter block(Site site, StepKey key, std::uint32_t output,
                      std::uint32_t block_index) const;

  // Writes 4 * count words: lanes of blocks first_block .. first_block+count-1.
  void fill_blocks(Site site, StepKey key, std::uint32_t output, std::uint32_t first_block,
                   std::uint32_t count, std::span<std::uint32_t> out) const;

  // Several equally long block runs in one batch, which keeps more Philox
  // chains in flight than one short run. Run r lands at out[4 * r * count].
  struct BlockRun {
    std::uint32_t output = 0;
    std::uint32_t first_block = 0;
  };
  void fill_block_runs(Site site, StepKey key, std::span<const BlockRun> runs,
                       std::uint32_t count, std::span<std::uint32_t> out) const;

  // Raw 32-bit draw for an (output, clause) pair.
  std::uint32_t pair_bits(Site site, StepKey key, std::uint32_t output,
                          std::uint32_t clause) const;
  // Raw 32-bit draw for an (output, clause, literal) triple.
  std::uint32_t literal_bits(Site site, StepKey key, std::uint32_t output, std::uint32_t clause,
                             std::uint32_t literal, std::uint32_t n_literals) const;

  // Uniform in [0, 1) with 2^-32 resolution.
  double pair_uniform(Site site, StepKey key, std::uint32_t output, std::uint32_t clause) const {
    return to_unit(pair_bits(site, key, output, clause));
  }
  double literal_uniform(Site site, StepKey key, std::uint32_t output, std::uint32_t clause,
                         std::uint32_t literal, std::uint32_t n_literals) const {
    return to_unit(literal_bits(site, key, output, clause, literal, n_literals));
  }

  // 64 bits for shuffle position `position` of epoch `epoch`.
  std::uint64_t shuffle_bits(std::uint32_t epoch, std::uint64_t position) const;

 private:
  std::uint64_t seed_;
};

// Integer form of the test `uniform < p` where uniform = bits * 2^-32.
// p <= 0 accepts nothing and p >= 1 accepts everything.
class Threshold {
 public:
  explicit Threshold(double probability);
  bool accept(std::uint32_t bits) const { return bits < limit_; }
  std::uint64_t limit() const { return limit_; }

 private:
  std::uint64_t limit_;
};

}  // namespace cotm

#endif  // COTM_RANDOM_HPP_
