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

#ifndef COTM_SRC_WIDE_HPP_
#define COTM_SRC_WIDE_HPP_

#include <cstdint>

namespace cotm::detail {

__extension__ using Uint128 = unsigned __int128;

// Upper and lower halves of the 128-bit product a * b.
inline std::uint64_t mul_hi(std::uint64_t a, std::uint64_t b) {
  return static_cast<std::uint64_t>((static_cast<Uint128>(a) * b) >> 64);
}
inline std::uint64_t mul_lo(std::uint64_t a, std::uint64_t b) { return a * b; }

}  // namespace cotm::detail

#endif  // COTM_SRC_WIDE_HPP_
