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

#include "cotm/bits.hpp"

#include <algorithm>
#include <bit>

#include "cotm/errors.hpp"

namespace cotm {

BitVector::BitVector(std::size_t size) : size_(size), words_(words_for(size), 0) {}

BitVector BitVector::from_values(std::span<const int> values) {
  BitVector out(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (values[i] != 0) out.set(i);
  }
  return out;
}

BitVector BitVector::from_values(std::initializer_list<int> values) {
  return from_values(std::span<const int>(values.begin(), values.size()));
}

BitVector BitVector::from_bytes(std::span<const std::uint8_t> values) {
  BitVector out(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (values[i] != 0) out.set(i);
  }
  return out;
}

std::size_t BitVector::count() const {
  std::size_t total = 0;
  for (std::uint64_t w : words_) total += std::popcount(w);
  return total;
}

std::vector<int> BitVector::to_values() const {
  std::vector<int> out(size_);
  for (std::size_t i = 0; i < size_; ++i) out[i] = test(i) ? 1 : 0;
  return out;
}

std::string BitVector::to_string() const {
  std::string out(size_, '0');
  for (std::size_t i = 0; i < size_; ++i) {
    if (test(i)) out[i] = '1';
  }
  return out;
}

BitMatrix::BitMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), stride_(words_for(cols)), words_(rows * stride_, 0) {}

BitVector BitMatrix::row_vector(std::size_t r) const {
  BitVector out(cols_);
  auto src = row(r);
  std::copy(src.begin(), src.end(), out.mutable_words().begin());
  return out;
}

void BitMatrix::set_row(std::size_t r, const BitVector& bits) {
  if (bits.size() != cols_) {
    throw ShapeError("BitMatrix::set_row: row has " + std::to_string(bits.size()) +
                     " bits, matrix has " + std::to_string(cols_) + " columns");
  }
  auto src = bits.words();
  std::copy(src.begin(), src.end(), mutable_row(r).begin());
}

std::size_t BitMatrix::count() const {
  std::size_t total = 0;
  for (std::uint64_t w : words_) total += std::popcount(w);
  return total;
}

}  // namespace cotm
