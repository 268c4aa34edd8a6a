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

// Binary model files.
//
//   offset  field
//   0       "COTM"
//   4       u16 format version (1)
//   6       u32 m, n, o, N, t
//   26      f64 s, e
//   42      u8  boost_true_positive
//   43      u64 seed
//   51      C:  n * 2o u32, row-major
//           W:  m * n  i32, row-major
//           frozen mask: m * n bits row-major, LSB-first, ceil(m*n/8) bytes
//           u32 CRC-32 (IEEE) of every preceding byte
//
// All integers and floats are little-endian.

#ifndef COTM_MODEL_IO_HPP_
#define COTM_MODEL_IO_HPP_

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "cotm/model.hpp"

namespace cotm {

inline constexpr std::uint16_t kModelFormatVersion = 1;

std::vector<std::uint8_t> serialize_model(const Model& model);
Model deserialize_model(std::span<const std::uint8_t> bytes);

void save_model(const std::filesystem::path& path, const Model& model);
Model load_model(const std::filesystem::path& path);

std::uint32_t crc32(std::span<const std::uint8_t> bytes);

}  // namespace cotm

#endif  // COTM_MODEL_IO_HPP_
