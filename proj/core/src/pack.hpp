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

#ifndef COTM_SRC_PACK_HPP_
#define COTM_SRC_PACK_HPP_

#include <cstddef>
#include <cstdint>
#include <cstring>

namespace cotm::detail {

// Bit b of the result is pred(b) for b < len <= 64. The predicate is first
// evaluated into bytes, which vectorizes, and then packed eight at a time.
template <typename Pred>
inline std::uint64_t pack_word(std::size_t len, Pred pred) {
  alignas(64) std::uint8_t flags[64] = {};
  for (std::size_t b = 0; b < len; ++b) flags[b] = pred(b) ? 1 : 0;
  std::uint64_t word = 0;
  for (std::size_t g = 0; g < 8; ++g) {
    std::uint64_t v;
    std::memcpy(&v, flags + 8 * g, 8);
    word |= ((v * 0x0102040810204080ull) >> 56) << (8 * g);
  }
  return word;
}

}  // namespace cotm::detail

#endif  // COTM_SRC_PACK_HPP_
