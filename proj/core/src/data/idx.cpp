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

#include <string>

#include "../byte_io.hpp"
#include "cotm/data.hpp"
#include "cotm/errors.hpp"

namespace cotm {
namespace {

constexpr std::uint8_t kUnsignedByte = 0x08;

std::string hex(std::uint32_t v) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string s = "0x";
  for (int shift = 28; shift >= 0; shift -= 4) s += kDigits[(v >> shift) & 0xf];
  return s;
}

}  // namespace

std::size_t IdxTensor::item_size() const {
  std::size_t size = 1;
  for (std::size_t d = 1; d < dims.size(); ++d) size *= dims[d];
  return size;
}

IdxTensor parse_idx(std::span<const std::uint8_t> bytes) {
  detail::ByteReader r(bytes, "IDX");
  const std::uint32_t magic = r.u32be();
  const std::uint32_t rank = magic & 0xff;
  if ((magic >> 16) != 0 || ((magic >> 8) & 0xff) != kUnsignedByte || rank < 1 || rank > 4) {
    throw FormatError("IDX: bad magic " + hex(magic) +
                      " at offset 0 (expected 0x000008NN with 1 <= NN <= 4, e.g. 0x00000801 or "
                      "0x00000803)");
  }
  IdxTensor t;
  std::uint64_t total = 1;
  for (std::uint32_t d = 0; d < rank; ++d) {
    t.dims.push_back(r.u32be());
    total *= t.dims.back();
  }
  if (r.remaining() < total) {
    throw FormatError("IDX: truncated payload at offset " + std::to_string(r.offset()) +
                      ": expected " + std::to_string(total) + " bytes, found " +
                      std::to_string(r.remaining()));
  }
  if (r.remaining() > total) {
    throw FormatError("IDX: " + std::to_string(r.remaining() - total) +
                      " trailing bytes after payload at offset " +
                      std::to_string(r.offset() + total));
  }
  auto payload = r.take(static_cast<std::size_t>(total));
  t.values.assign(payload.begin(), payload.end());
  return t;
}

std::vector<std::uint8_t> serialize_idx(const IdxTensor& t) {
  if (t.dims.empty() || t.dims.size() > 4) {
    throw ShapeError("IDX: tensors need 1 to 4 dimensions, got " + std::to_string(t.dims.size()));
  }
  std::uint64_t total = 1;
  for (auto d : t.dims) total *= d;
  if (total != t.values.size()) {
    throw ShapeError("IDX: dims describe " + std::to_string(total) + " values, tensor holds " +
                     std::to_string(t.values.size()));
  }
  detail::ByteWriter w;
  w.u32be((std::uint32_t{kUnsignedByte} << 8) | static_cast<std::uint32_t>(t.dims.size()));
  for (auto d : t.dims) w.u32be(d);
  w.bytes(t.values);
  return std::move(w.buffer());
}

IdxTensor load_idx(const std::filesystem::path& path) {
  const auto bytes = detail::read_file(path);
  try {
    return parse_idx(bytes);
  } catch (const FormatError& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

void save_idx(const std::filesystem::path& path, const IdxTensor& tensor) {
  detail::write_file(path, serialize_idx(tensor));
}

}  // namespace cotm
