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

// Portable sampling on top of std::mt19937_64, whose raw output sequence is
// fixed by the standard. Distribution objects are avoided because their
// algorithms vary between standard libraries.

#ifndef COTM_SRC_DATA_SAMPLING_HPP_
#define COTM_SRC_DATA_SAMPLING_HPP_

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <random>
#include <vector>

#include "../wide.hpp"

namespace cotm::detail {

// Unbiased integer in [0, bound), bound > 0.
inline std::uint64_t bounded(std::mt19937_64& gen, std::uint64_t bound) {
  const std::uint64_t reject_below = (0 - bound) % bound;
  for (;;) {
    const std::uint64_t draw = gen();
    if (mul_lo(draw, bound) >= reject_below) return mul_hi(draw, bound);
  }
}

inline bool coin(std::mt19937_64& gen) { return (gen() >> 63) != 0; }

// k distinct values of [0, n), uniformly chosen, returned in increasing order.
inline std::vector<std::size_t> choose(std::mt19937_64& gen, std::size_t n, std::size_t k) {
  std::vector<std::size_t> pool(n);
  std::iota(pool.begin(), pool.end(), std::size_t{0});
  for (std::size_t p = 0; p < k; ++p) {
    std::swap(pool[p], pool[p + bounded(gen, n - p)]);
  }
  pool.resize(k);
  std::sort(pool.begin(), pool.end());
  return pool;
}

}  // namespace cotm::detail

#endif  // COTM_SRC_DATA_SAMPLING_HPP_
