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
#include "cotm/dataset.hpp"
#include "cotm/errors.hpp"

namespace cotm {

Dataset::Dataset(BitMatrix inputs, BitMatrix outputs) : x(std::move(inputs)), y(std::move(outputs)) {
  if (x.rows() != y.rows()) {
    throw ShapeError("dataset: " + std::to_string(x.rows()) + " input rows but " +
                     std::to_string(y.rows()) + " output rows");
  }
}

Dataset Dataset::select(std::span<const std::size_t> rows) const {
  BitMatrix xs(rows.size(), x.cols());
  BitMatrix ys(rows.size(), y.cols());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r] >= size()) {
      throw ShapeError("dataset: row " + std::to_string(rows[r]) + " out of range (" +
                       std::to_string(size()) + " examples)");
    }
    auto src_x = x.row(rows[r]);
    std::copy(src_x.begin(), src_x.end(), xs.mutable_row(r).begin());
    auto src_y = y.row(rows[r]);
    std::copy(src_y.begin(), src_y.end(), ys.mutable_row(r).begin());
  }
  Dataset out(std::move(xs), std::move(ys));
  out.feature_names = feature_names;
  out.class_names = class_names;
  return out;
}

std::vector<std::uint32_t> class_labels(const Dataset& data) {
  std::vector<std::uint32_t> labels(data.size(), data.n_outputs());
  for (std::size_t r = 0; r < data.size(); ++r) {
    for (std::uint32_t i = 0; i < data.n_outputs(); ++i) {
      if (data.y.test(r, i)) {
        labels[r] = i;
        break;
      }
    }
  }
  return labels;
}

BitMatrix one_hot(std::span<const std::uint32_t> labels, std::uint32_t n_classes) {
  BitMatrix y(labels.size(), n_classes);
  for (std::size_t r = 0; r < labels.size(); ++r) {
    if (labels[r] >= n_classes) {
      throw InputError("one_hot: label " + std::to_string(labels[r]) + " at row " +
                       std::to_string(r) + " exceeds " + std::to_string(n_classes) + " classes");
    }
    y.set(r, labels[r]);
  }
  return y;
}

namespace {

void write_rows(detail::ByteWriter& w, const BitMatrix& m) {
  const std::size_t row_bytes = (m.cols() + 7) / 8;
  for (std::size_t r = 0; r < m.rows(); ++r) {
    auto words = m.row(r);
    for (std::size_t b = 0; b < row_bytes; ++b) {
      w.u8(static_cast<std::uint8_t>(words[b / 8] >> (8 * (b % 8))));
    }
  }
}

BitMatrix read_rows(detail::ByteReader& r, std::size_t rows, std::size_t cols) {
  BitMatrix m(rows, cols);
  const std::size_t row_bytes = (cols + 7) / 8;
  const std::uint64_t mask = tail_mask(cols);
  for (std::size_t row = 0; row < rows; ++row) {
    const std::size_t at = r.offset();
    auto bytes = r.take(row_bytes);
    auto words = m.mutable_row(row);
    for (std::size_t b = 0; b < row_bytes; ++b) {
      words[b / 8] |= std::uint64_t{bytes[b]} << (8 * (b % 8));
    }
    if (!words.empty() && (words.back() & ~mask) != 0) {
      throw FormatError("dataset file: padding bits set in row " + std::to_string(row) +
                        " at offset " + std::to_string(at));
    }
  }
  return m;
}

}  // namespace

std::vector<std::uint8_t> serialize_dataset(const Dataset& data) {
  detail::ByteWriter w;
  w.bytes("COTD");
  w.u16le(kDatasetFormatVersion);
  w.u64le(data.size());
  w.u32le(data.n_inputs());
  w.u32le(data.n_outputs());
  write_rows(w, data.x);
  write_rows(w, data.y);
  return std::move(w.buffer());
}

Dataset deserialize_dataset(std::span<const std::uint8_t> bytes) {
  detail::ByteReader r(bytes, "dataset file");
  auto magic = r.take(4);
  if (std::string(magic.begin(), magic.end()) != "COTD") {
    throw FormatError("dataset file: bad magic at offset 0 (expected \"COTD\")");
  }
  const std::uint16_t version = r.u16le();
  if (version != kDatasetFormatVersion) {
    throw FormatError("dataset file: unsupported format version " + std::to_string(version) +
                      " at offset 4");
  }
  const std::uint64_t count = r.u64le();
  const std::uint32_t o = r.u32le();
  const std::uint32_t m = r.u32le();
  if (o == 0 || m == 0) {
    throw FormatError("dataset file: zero-width rows (o = " + std::to_string(o) +
                      ", m = " + std::to_string(m) + ") at offset 14");
  }
  const std::uint64_t row_bytes = (std::uint64_t{o} + 7) / 8 + (std::uint64_t{m} + 7) / 8;
  if (count > r.remaining() / row_bytes || count * row_bytes != r.remaining()) {
    throw FormatError("dataset file: header at offset 0 declares " + std::to_string(count) +
                      " rows of " + std::to_string(row_bytes) + " bytes after offset " +
                      std::to_string(r.offset()) + ", found " + std::to_string(r.remaining()) +
                      " bytes");
  }
  BitMatrix x = read_rows(r, count, o);
  BitMatrix y = read_rows(r, count, m);
  return Dataset(std::move(x), std::move(y));
}

void save_dataset(const std::filesystem::path& path, const Dataset& data) {
  detail::write_file(path, serialize_dataset(data));
}

Dataset load_dataset(const std::filesystem::path& path) {
  const auto bytes = detail::read_file(path);
  try {
    return deserialize_dataset(bytes);
  } catch (const FormatError& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

}  // namespace cotm
