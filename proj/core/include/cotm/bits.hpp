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

// Packed bit containers. Bits are stored LSB-first in 64-bit words and every
// unused tail bit of the last word is kept at zero, so word-wise equality and
// popcount are exact.

#ifndef COTM_BITS_HPP_
#define COTM_BITS_HPP_

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace cotm {

inline constexpr std::size_t kWordBits = 64;

constexpr std::size_t words_for(std::size_t bits) {
  return (bits + kWordBits - 1) / kWordBits;
}

// Mask of the valid bits in the last word of a `bits`-long row.
constexpr std::uint64_t tail_mask(std::size_t bits) {
  const std::size_t rem = bits % kWordBits;
  return rem == 0 ? ~std::uint64_t{0} : (std::uint64_t{1} << rem) - 1;
}

class BitVector {
 public:
  BitVector() = default;
  explicit BitVector(std::size_t size);

  // Builds from 0/1 values; anything nonzero counts as 1.
  static BitVector from_values(std::span<const int> values);
  static BitVector from_values(std::initializer_list<int> values);
  static BitVector from_bytes(std::span<const std::uint8_t> values);

  std::size_t size() const { return size_; }
  bool empty() const { return size_ == 0; }

  bool test(std::size_t i) const {
    return (words_[i / kWordBits] >> (i % kWordBits)) & 1u;
  }
  void set(std::size_t i, bool value = true) {
    const std::uint64_t bit = std::uint64_t{1} << (i % kWordBits);
    if (value) {
      words_[i / kWordBits] |= bit;
    } else {
      words_[i / kWordBits] &= ~bit;
    }
  }
  void reset() { std::fill(words_.begin(), words_.end(), 0); }

  std::size_t count() const;
  std::vector<int> to_values() const;
  // "0110..." in index order.
  std::string to_string() const;

  std::span<const std::uint64_t> words() const { return words_; }
  std::span<std::uint64_t> mutable_words() { return words_; }

  friend bool operator==(const BitVector&, const BitVector&) = default;

 private:
  std::size_t size_ = 0;
  std::vector<std::uint64_t> words_;
};

// Row-major packed matrix; each row starts on a word boundary.
class BitMatrix {
 public:
  BitMatrix() = default;
  BitMatrix(std::size_t rows, std::size_t cols);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t words_per_row() const { return stride_; }

  bool test(std::size_t r, std::size_t c) const {
    return (words_[r * stride_ + c / kWordBits] >> (c % kWordBits)) & 1u;
  }
  void set(std::size_t r, std::size_t c, bool value = true) {
    std::uint64_t& w = words_[r * stride_ + c / kWordBits];
    const std::uint64_t bit = std::uint64_t{1} << (c % kWordBits);
    w = value ? (w | bit) : (w & ~bit);
  }
  void reset() { std::fill(words_.begin(), words_.end(), 0); }

  std::span<const std::uint64_t> row(std::size_t r) const {
    return {words_.data() + r * stride_, stride_};
  }
  std::span<std::uint64_t> mutable_row(std::size_t r) {
    return {words_.data() + r * stride_, stride_};
  }
  BitVector row_vector(std::size_t r) const;
  void set_row(std::size_t r, const BitVector& bits);

  std::size_t count() const;

  friend bool operator==(const BitMatrix&, const BitMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::size_t stride_ = 0;
  std::vector<std::uint64_t> words_;
};

}  // namespace cotm

#endif  // COTM_BITS_HPP_
