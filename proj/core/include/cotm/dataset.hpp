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

// Binary datasets and their on-disk container.
//
// Dataset file ("COTD"), little-endian:
//   "COTD", u16 version (1), u64 example count, u32 o, u32 m,
//   X: count rows of ceil(o/8) bytes, LSB-first,
//   Y: count rows of ceil(m/8) bytes, LSB-first.
//
// Vocabulary file: UTF-8 text, one token per line; line number = index.

#ifndef COTM_DATASET_HPP_
#define COTM_DATASET_HPP_

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "cotm/bits.hpp"

namespace cotm {

inline constexpr std::uint16_t kDatasetFormatVersion = 1;

struct Dataset {
  BitMatrix x;  // examples x o
  BitMatrix y;  // examples x m
  std::vector<std::string> feature_names;
  std::vector<std::string> class_names;

  Dataset() = default;
  Dataset(BitMatrix inputs, BitMatrix outputs);

  std::size_t size() const { return x.rows(); }
  bool empty() const { return x.rows() == 0; }
  std::uint32_t n_inputs() const { return static_cast<std::uint32_t>(x.cols()); }
  std::uint32_t n_outputs() const { return static_cast<std::uint32_t>(y.cols()); }

  BitVector input(std::size_t i) const { return x.row_vector(i); }
  BitVector output(std::size_t i) const { return y.row_vector(i); }

  // Keeps the given examples, in the given order.
  Dataset select(std::span<const std::size_t> rows) const;
};

// Class index of each example: the lowest set output bit, or m when none is set.
std::vector<std::uint32_t> class_labels(const Dataset& data);

// One-hot rows over `n_classes` outputs.
BitMatrix one_hot(std::span<const std::uint32_t> labels, std::uint32_t n_classes);

std::vector<std::uint8_t> serialize_dataset(const Dataset& data);
Dataset deserialize_dataset(std::span<const std::uint8_t> bytes);
void save_dataset(const std::filesystem::path& path, const Dataset& data);
Dataset load_dataset(const std::filesystem::path& path);

}  // namespace cotm

#endif  // COTM_DATASET_HPP_
