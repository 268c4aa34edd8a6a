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

#include "cotm/random.hpp"

#include <algorithm>
#if defined(__AVX512F__)
#include <immintrin.h>
#endif
#include <cmath>
#include <vector>

#include "cotm/errors.hpp"

namespace cotm {
namespace {

constexpr std::uint32_t kMul0 = 0xD2511F53;
constexpr std::uint32_t kMul1 = 0xCD9E8D57;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85;
constexpr int kRounds = 10;

inline std::uint32_t site_word(Site site, std::uint32_t output) {
  return (static_cast<std::uint32_t>(site) << 24) | output;
}

}  // namespace

PhiloxCounter philox4x32_10(PhiloxCounter ctr, PhiloxKey key) {
  for (int round = 0; round < kRounds; ++round) {
    if (round > 0) {
      key[0] += kWeyl0;
      key[1] += kWeyl1;
    }
    const std::uint64_t p0 = std::uint64_t{kMul0} * ctr[0];
    const std::uint64_t p1 = std::uint64_t{kMul1} * ctr[2];
    ctr = {static_cast<std::uint32_t>(p1 >> 32) ^ ctr[1] ^ key[0], static_cast<std::uint32_t>(p1),
           static_cast<std::uint32_t>(p0 >> 32) ^ ctr[3] ^ key[1], static_cast<std::uint32_t>(p0)};
  }
  return ctr;
}

const char* site_name(Site site) {
  switch (site) {
    case Site::kTypeI: return "type1";
    case Site::kTypeII: return "type2";
    case Site::kTypeIa: return "ia";
    case Site::kTypeIb: return "ib";
    case Site::kShuffle: return "shuffle";
    case Site::kInit: return "init";
  }
  return "unknown";
}

PhiloxCounter RandomSource::block(Site site, StepKey key, std::uint32_t output,
                                  std::uint32_t block_index) const {
  return philox4x32_10({key.epoch, key.example, site_word(site, output), block_index},
                       {static_cast<std::uint32_t>(seed_), static_cast<std::uint32_t>(seed_ >> 32)});
}

namespace {

// Eight 64-bit lanes, each holding one 32-bit Philox word in its low half.
// The upper halves may hold garbage between rounds: every consumer either
// multiplies (which reads only the low half) or truncates.
typedef std::uint64_t Lanes __attribute__((vector_size(64)));
constexpr std::uint32_t kLanes = 8;

// Low 32 bits of each lane times a 32-bit constant, as a full 64-bit product.
inline Lanes mul_low32(Lanes a, std::uint32_t b) {
#if defined(__AVX512F__)
  return reinterpret_cast<Lanes>(
      _mm512_mul_epu32(reinterpret_cast<__m512i>(a), _mm512_set1_epi64(b)));
#else
  return (a & 0xffffffffu) * std::uint64_t{b};
#endif
}

struct LaneInput {
  std::uint32_t c0, c1, k0, k1;
  const std::uint32_t* c2;
  const std::uint32_t* c3;
};

// Runs `Groups` independent 8-lane Philox chains side by side so the
// multiplier latency of one chain overlaps the others.
template <int Groups>
inline void philox_groups(const LaneInput& in, std::size_t first, std::uint32_t* out) {
  Lanes c0[Groups], c1[Groups], c2[Groups], c3[Groups];
  for (int g = 0; g < Groups; ++g) {
    for (std::uint32_t l = 0; l < kLanes; ++l) {
      const std::size_t lane = first + g * kLanes + l;
      c0[g][l] = in.c0;
      c1[g][l] = in.c1;
      c2[g][l] = in.c2[lane];
      c3[g][l] = in.c3[lane];
    }
  }
  std::uint64_t k0 = in.k0;
  std::uint64_t k1 = in.k1;
  for (int round = 0; round < kRounds; ++round) {
    if (round > 0) {
      k0 = static_cast<std::uint32_t>(k0 + kWeyl0);
      k1 = static_cast<std::uint32_t>(k1 + kWeyl1);
    }
    for (int g = 0; g < Groups; ++g) {
      const Lanes p0 = mul_low32(c0[g], kMul0);
      const Lanes p1 = mul_low32(c2[g], kMul1);
      c0[g] = (p1 >> 32) ^ c1[g] ^ k0;
      c2[g] = (p0 >> 32) ^ c3[g] ^ k1;
      c1[g] = p1;
      c3[g] = p0;
    }
  }
  for (int g = 0; g < Groups; ++g) {
    for (std::uint32_t l = 0; l < kLanes; ++l) {
      std::uint32_t* dst = out + (g * kLanes + l) * 4;
      dst[0] = static_cast<std::uint32_t>(c0[g][l]);
      dst[1] = static_cast<std::uint32_t>(c1[g][l]);
      dst[2] = static_cast<std::uint32_t>(c2[g][l]);
      dst[3] = static_cast<std::uint32_t>(c3[g][l]);
    }
  }
}

// Evaluates `n` blocks into out[4 * i .. 4 * i + 3]; lane i uses counter
// words (c0, c1, c2[i], c3[i]). c2 and c3 must be readable up to n rounded up
// to a multiple of kLanes.
void philox_lanes(const LaneInput& in, std::size_t n, std::uint32_t* out) {
  std::size_t lane = 0;
  for (; lane + 4 * kLanes <= n; lane += 4 * kLanes) philox_groups<4>(in, lane, out + lane * 4);
  for (; lane + 2 * kLanes <= n; lane += 2 * kLanes) philox_groups<2>(in, lane, out + lane * 4);
  for (; lane + kLanes <= n; lane += kLanes) philox_groups<1>(in, lane, out + lane * 4);
  if (lane < n) {
    std::uint32_t tail[kLanes * 4];
    philox_groups<1>(in, lane, tail);
    std::copy(tail, tail + (n - lane) * 4, out + lane * 4);
  }
}

}  // namespace

void RandomSource::fill_blocks(Site site, StepKey key, std::uint32_t output,
                               std::uint32_t first_block, std::uint32_t count,
                               std::span<std::uint32_t> out) const {
  const BlockRun run{output, first_block};
  fill_block_runs(site, key, std::span<const BlockRun>(&run, 1), count, out);
}

void RandomSource::fill_block_runs(Site site, StepKey key, std::span<const BlockRun> runs,
                                   std::uint32_t count, std::span<std::uint32_t> out) const {
  const std::size_t n = runs.size() * std::size_t{count};
  if (out.size() < n * 4) throw ShapeError("RandomSource::fill_block_runs: output span too small");
  if (n == 0) return;
  thread_local std::vector<std::uint32_t> c2, c3;
  const std::size_t padded = (n + kLanes - 1) / kLanes * kLanes;
  if (c2.size() < padded) {
    c2.resize(padded);
    c3.resize(padded);
  }
  std::size_t lane = 0;
  for (const BlockRun& run : runs) {
    const std::uint32_t word = site_word(site, run.output);
    for (std::uint32_t b = 0; b < count; ++b, ++lane) {
      c2[lane] = word;
      c3[lane] = run.first_block + b;
    }
  }
  const LaneInput in{key.epoch, key.example, static_cast<std::uint32_t>(seed_),
                     static_cast<std::uint32_t>(seed_ >> 32), c2.data(), c3.data()};
  philox_lanes(in, n, out.data());
}

std::uint32_t RandomSource::pair_bits(Site site, StepKey key, std::uint32_t output,
                                      std::uint32_t clause) const {
  return block(site, key, output, clause / 4)[clause % 4];
}

std::uint32_t RandomSource::literal_bits(Site site, StepKey key, std::uint32_t output,
                                         std::uint32_t clause, std::uint32_t literal,
                                         std::uint32_t n_literals) const {
  const std::uint64_t index =
      std::uint64_t{clause} * blocks_per_row(n_literals) + literal / 4;
  return block(site, key, output, static_cast<std::uint32_t>(index))[literal % 4];
}

std::uint64_t RandomSource::shuffle_bits(std::uint32_t epoch, std::uint64_t position) const {
  const PhiloxCounter b = block(Site::kShuffle, {epoch, static_cast<std::uint32_t>(position >> 33)},
                                0, static_cast<std::uint32_t>(position >> 1));
  const std::size_t lane = (position & 1) * 2;
  return (std::uint64_t{b[lane]} << 32) | b[lane + 1];
}

Threshold::Threshold(double probability) {
  if (!(probability > 0.0)) {
    limit_ = 0;
  } else if (probability >= 1.0) {
    limit_ = std::uint64_t{1} << 32;
  } else {
    // bits < p * 2^32 holds exactly when bits < ceil(p * 2^32); the scaling by
    // a power of two is exact in binary64.
    limit_ = static_cast<std::uint64_t>(std::ceil(probability * 0x1p32));
  }
}

}  // namespace cotm
