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

#include <algorithm>
#include <cmath>
#include <set>
#include <vector>

#include "cotm/random.hpp"

namespace cotm {
namespace {

// Known-answer vectors of the reference Philox4x32-10 distribution.
TEST(Philox, KnownAnswerZero) {
  EXPECT_EQ(philox4x32_10({0, 0, 0, 0}, {0, 0}),
            (PhiloxCounter{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8}));
}

TEST(Philox, KnownAnswerOnes) {
  EXPECT_EQ(philox4x32_10({0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff},
                          {0xffffffff, 0xffffffff}),
            (PhiloxCounter{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd}));
}

TEST(Philox, KnownAnswerPiDigits) {
  EXPECT_EQ(philox4x32_10({0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344},
                          {0xa4093822, 0x299f31d0}),
            (PhiloxCounter{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1}));
}

// Addressed draws, frozen from tests/oracles/derive_values.py.
constexpr std::uint64_t kSeed = 0x0123456789abcdefull;

TEST(RandomSource, PairAddressing) {
  const RandomSource rng(kSeed);
  EXPECT_EQ(rng.pair_bits(Site::kTypeI, {3, 7}, 2, 5), 0xff1a2ec0u);
  EXPECT_EQ(rng.pair_bits(Site::kTypeII, {0, 0}, 0, 0), 0x6f7ce58cu);
  EXPECT_EQ(RandomSource(7).pair_bits(Site::kInit, {}, 1, 9), 0x00546510u);
}

TEST(RandomSource, LiteralAddressing) {
  const RandomSource rng(kSeed);
  EXPECT_EQ(rng.literal_bits(Site::kTypeIb, {1, 2}, 0, 3, 9, 12), 0x7fd13c55u);
  EXPECT_EQ(rng.literal_bits(Site::kTypeIa, {5, 1}, 3, 2, 6, 6), 0xdd24b725u);
}

TEST(RandomSource, ShuffleAddressing) {
  EXPECT_EQ(RandomSource(kSeed).shuffle_bits(4, 5), 0x6a9d3d122137bfb0ull);
}

TEST(RandomSource, SitesAreIndependentStreams) {
  const RandomSource rng(11);
  std::set<std::uint32_t> seen;
  for (Site site : {Site::kTypeI, Site::kTypeII, Site::kTypeIa, Site::kTypeIb}) {
    seen.insert(rng.pair_bits(site, {0, 0}, 0, 0));
  }
  EXPECT_EQ(seen.size(), 4u);
}

TEST(RandomSource, SameKeySameValue) {
  const RandomSource a(99);
  const RandomSource b(99);
  for (std::uint32_t j = 0; j < 50; ++j) {
    EXPECT_EQ(a.pair_bits(Site::kTypeI, {2, 3}, 1, j), b.pair_bits(Site::kTypeI, {2, 3}, 1, j));
  }
  EXPECT_NE(RandomSource(1).pair_bits(Site::kTypeI, {}, 0, 0),
            RandomSource(2).pair_bits(Site::kTypeI, {}, 0, 0));
}

TEST(RandomSource, FillBlocksMatchesSingleBlocks) {
  const RandomSource rng(kSeed);
  for (std::uint32_t count : {1u, 3u, 7u, 8u, 9u, 31u, 64u, 100u}) {
    std::vector<std::uint32_t> out(4 * count);
    rng.fill_blocks(Site::kTypeIb, {4, 9}, 3, 17, count, out);
    for (std::uint32_t b = 0; b < count; ++b) {
      const PhiloxCounter expected = rng.block(Site::kTypeIb, {4, 9}, 3, 17 + b);
      for (std::uint32_t lane = 0; lane < 4; ++lane) {
        ASSERT_EQ(out[4 * b + lane], expected[lane]) << "count " << count << " block " << b;
      }
    }
  }
}

TEST(RandomSource, FillBlockRunsMatchesSingleBlocks) {
  const RandomSource rng(5);
  const std::vector<RandomSource::BlockRun> runs = {{0, 0}, {2, 40}, {1, 7}, {0, 1000}, {5, 3}};
  for (std::uint32_t count : {1u, 5u, 12u, 33u}) {
    std::vector<std::uint32_t> out(4 * count * runs.size());
    rng.fill_block_runs(Site::kTypeIa, {1, 2}, runs, count, out);
    for (std::size_t r = 0; r < runs.size(); ++r) {
      for (std::uint32_t b = 0; b < count; ++b) {
        const PhiloxCounter expected =
            rng.block(Site::kTypeIa, {1, 2}, runs[r].output, runs[r].first_block + b);
        for (std::uint32_t lane = 0; lane < 4; ++lane) {
          ASSERT_EQ(out[4 * (r * count + b) + lane], expected[lane]);
        }
      }
    }
  }
}

TEST(RandomSource, ToUnitRange) {
  EXPECT_EQ(RandomSource::to_unit(0), 0.0);
  EXPECT_LT(RandomSource::to_unit(0xffffffffu), 1.0);
  EXPECT_EQ(RandomSource::to_unit(0x80000000u), 0.5);
}

TEST(Threshold, ExtremeProbabilities) {
  const Threshold never(0.0);
  const Threshold always(1.0);
  for (std::uint32_t bits : {0u, 1u, 0x80000000u, 0xffffffffu}) {
    EXPECT_FALSE(never.accept(bits));
    EXPECT_TRUE(always.accept(bits));
  }
  EXPECT_FALSE(Threshold(-0.5).accept(0));
  EXPECT_TRUE(Threshold(2.0).accept(0xffffffffu));
}

// bits < ceil(p 2^32) must agree with to_unit(bits) < p for every p.
TEST(Threshold, AgreesWithRealComparison) {
  const std::vector<double> probabilities = {0.5, 0.25, 1.0 / 3.0, 0.1, 0.9, 1.0 / 9.0,
                                             0x1p-32, 1.0 - 0x1p-32, 0.2, 0.8};
  for (double p : probabilities) {
    const Threshold gate(p);
    const auto limit = static_cast<std::uint32_t>(std::min<std::uint64_t>(gate.limit(), 0xffffffffu));
    for (std::int64_t delta = -2; delta <= 2; ++delta) {
      const std::int64_t probe = static_cast<std::int64_t>(limit) + delta;
      if (probe < 0 || probe > 0xffffffffll) continue;
      const auto bits = static_cast<std::uint32_t>(probe);
      EXPECT_EQ(gate.accept(bits), RandomSource::to_unit(bits) < p) << "p=" << p << " bits=" << bits;
    }
  }
}

TEST(Threshold, EmpiricalRate) {
  const RandomSource rng(3);
  const double p = 0.3;
  const Threshold gate(p);
  const int draws = 100000;
  int hits = 0;
  for (int j = 0; j < draws; ++j) {
    hits += gate.accept(rng.pair_bits(Site::kTypeI, {0, static_cast<std::uint32_t>(j / 4096)}, 0,
                                      static_cast<std::uint32_t>(j % 4096)));
  }
  const double se = std::sqrt(p * (1 - p) / draws);
  EXPECT_NEAR(hits / static_cast<double>(draws), p, 4 * se);
}

}  // namespace
}  // namespace cotm
