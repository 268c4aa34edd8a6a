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

#include "cotm/model_io.hpp"

#include <zlib.h>

#include "byte_io.hpp"
#include "cotm/errors.hpp"

namespace cotm {

std::uint32_t crc32(std::span<const std::uint8_t> bytes) {
  uLong crc = ::crc32(0L, Z_NULL, 0);
  // zlib takes uInt lengths; feed large buffers in pieces.
  std::size_t pos = 0;
  while (pos < bytes.size()) {
    const std::size_t len = std::min<std::size_t>(bytes.size() - pos, 1u << 30);
    crc = ::crc32(crc, bytes.data() + pos, static_cast<uInt>(len));
    pos += len;
  }
  return static_cast<std::uint32_t>(crc);
}

std::vector<std::uint8_t> serialize_model(const Model& model) {
  const Config& c = model.config();
  detail::ByteWriter w;
  w.bytes("COTM");
  w.u16le(kModelFormatVersion);
  w.u32le(c.n_outputs);
  w.u32le(c.n_clauses);
  w.u32le(c.n_inputs);
  w.u32le(c.memory_depth);
  w.u32le(c.voting_margin);
  w.f64le(c.specificity);
  w.f64le(c.multiclass_scalar);
  w.u8(c.boost_true_positive ? 1 : 0);
  w.u64le(c.seed);
  for (std::uint32_t s : model.memory().values()) w.u32le(s);
  for (std::int32_t v : model.weights().values()) w.i32le(v);
  const std::uint32_t n = c.n_clauses;
  detail::pack_bits(w, std::size_t{c.n_outputs} * n, [&](std::size_t idx) {
    return model.weights().frozen(static_cast<std::uint32_t>(idx / n),
                                  static_cast<std::uint32_t>(idx % n));
  });
  const std::uint32_t crc = crc32(w.buffer());
  w.u32le(crc);
  return std::move(w.buffer());
}

Model deserialize_model(std::span<const std::uint8_t> bytes) {
  detail::ByteReader r(bytes, "model file");
  auto magic = r.take(4);
  if (std::string(magic.begin(), magic.end()) != "COTM") {
    throw FormatError("model file: bad magic at offset 0 (expected \"COTM\")");
  }
  const std::uint16_t version = r.u16le();
  if (version != kModelFormatVersion) {
    throw FormatError("model file: unsupported format version " + std::to_string(version) +
                      " at offset 4");
  }
  Config c;
  c.n_outputs = r.u32le();
  c.n_clauses = r.u32le();
  c.n_inputs = r.u32le();
  c.memory_depth = r.u32le();
  c.voting_margin = r.u32le();
  c.specificity = r.f64le();
  c.multiclass_scalar = r.f64le();
  c.boost_true_positive = r.u8() != 0;
  c.seed = r.u64le();
  try {
    c.validate();
  } catch (const ConfigError& e) {
    throw FormatError(std::string("model file: header holds an ") + e.what());
  }

  const std::size_t n_states = std::size_t{c.n_clauses} * c.n_literals();
  const std::size_t n_weights = std::size_t{c.n_outputs} * c.n_clauses;
  const std::size_t body = n_states * 4 + n_weights * 4 + (n_weights + 7) / 8 + 4;
  if (r.remaining() != body) {
    throw FormatError("model file: expected " + std::to_string(r.offset() + body) +
                      " bytes for this header, found " + std::to_string(bytes.size()));
  }
  const std::size_t crc_offset = bytes.size() - 4;
  const std::uint32_t computed = crc32(bytes.first(crc_offset));

  std::vector<std::uint32_t> states(n_states);
  for (auto& s : states) s = r.u32le();
  std::vector<std::int32_t> weights(n_weights);
  for (auto& v : weights) v = r.i32le();
  BitMatrix frozen(c.n_outputs, c.n_clauses);
  auto packed = r.take((n_weights + 7) / 8);
  for (std::size_t idx = 0; idx < n_weights; ++idx) {
    if ((packed[idx / 8] >> (idx % 8)) & 1u) frozen.set(idx / c.n_clauses, idx % c.n_clauses);
  }
  const std::uint32_t stored = r.u32le();
  if (stored != computed) {
    throw FormatError("model file: CRC-32 mismatch at offset " + std::to_string(crc_offset));
  }
  try {
    return Model(c, MemoryMatrix(c.n_clauses, c.n_literals(), c.memory_depth, std::move(states)),
                 WeightMatrix(c.n_outputs, c.n_clauses, std::move(weights), std::move(frozen)));
  } catch (const InvariantError& e) {
    throw FormatError(std::string("model file: ") + e.what());
  }
}

void save_model(const std::filesystem::path& path, const Model& model) {
  detail::write_file(path, serialize_model(model));
}

Model load_model(const std::filesystem::path& path) {
  const auto bytes = detail::read_file(path);
  try {
    return deserialize_model(bytes);
  } catch (const FormatError& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

}  // namespace cotm
