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

#include <cmath>
#include <string>

#include "cotm/data.hpp"
#include "cotm/errors.hpp"
#include "sampling.hpp"

namespace cotm {
namespace {

using Patch = std::array<int, 4>;  // [[p0, p1], [p2, p3]]

constexpr Patch kDiagonals[] = {{1, 0, 0, 1}, {0, 1, 1, 0}};
constexpr Patch kLines[] = {{1, 1, 0, 0}, {0, 0, 1, 1}, {1, 0, 1, 0}, {0, 1, 0, 1}};

constexpr std::uint64_t kFlipStream = 0x6a09e667f3bcc909ull;

Dataset sample(std::mt19937_64& gen, std::size_t count) {
  BitMatrix x(count, kXorInputs);
  BitMatrix y(count, 2);
  const auto patch = xor_patch_pixels();
  for (std::size_t r = 0; r < count; ++r) {
    for (std::uint32_t k = 0; k < kXorInputs; ++k) x.set(r, k, detail::coin(gen));
    const std::uint32_t cls = detail::coin(gen) ? 1 : 0;
    const Patch& p = cls == 1 ? kDiagonals[detail::bounded(gen, 2)] : kLines[detail::bounded(gen, 4)];
    for (std::size_t q = 0; q < 4; ++q) x.set(r, patch[q], p[q] != 0);
    y.set(r, cls);
  }
  Dataset d(std::move(x), std::move(y));
  for (std::uint32_t row = 1; row <= kXorSide; ++row) {
    for (std::uint32_t col = 1; col <= kXorSide; ++col) {
      d.feature_names.push_back("r" + std::to_string(row) + "c" + std::to_string(col));
    }
  }
  d.class_names = {"line", "diagonal"};
  return d;
}

}  // namespace

std::array<std::uint32_t, 4> xor_patch_pixels() {
  return {0 * kXorSide + 2, 0 * kXorSide + 3, 1 * kXorSide + 2, 1 * kXorSide + 3};
}

std::optional<std::uint32_t> xor_patch_class(const BitVector& image) {
  if (image.size() != kXorInputs) {
    throw ShapeError("xor_patch_class: expected 16 pixels, got " + std::to_string(image.size()));
  }
  const auto pixels = xor_patch_pixels();
  Patch p{};
  for (std::size_t q = 0; q < 4; ++q) p[q] = image.test(pixels[q]) ? 1 : 0;
  for (const Patch& d : kDiagonals) {
    if (p == d) return 1;
  }
  for (const Patch& l : kLines) {
    if (p == l) return 0;
  }
  return std::nullopt;
}

SplitDataset generate_noisy_xor(const NoisyXorOptions& opt) {
  if (opt.n_train == 0 || opt.n_test == 0) {
    throw ConfigError("generate_noisy_xor: train and test sizes must be positive");
  }
  if (!(opt.label_noise >= 0.0 && opt.label_noise <= 1.0)) {
    throw ConfigError("generate_noisy_xor: label_noise must be in [0, 1]");
  }
  std::mt19937_64 gen(opt.seed);
  SplitDataset out;
  out.train = sample(gen, opt.n_train);
  out.test = sample(gen, opt.n_test);
  if (opt.label_noise > 0.0) {
    out.train = flip_labels(out.train, opt.label_noise, opt.seed ^ kFlipStream);
  }
  return out;
}

Dataset flip_labels(const Dataset& data, double fraction, std::uint64_t seed) {
  if (!(fraction >= 0.0 && fraction <= 1.0)) {
    throw ConfigError("flip_labels: fraction must be in [0, 1]");
  }
  std::mt19937_64 gen(seed);
  const auto count = static_cast<std::size_t>(std::llround(fraction * static_cast<double>(data.size())));
  Dataset out = data;
  for (std::size_t r : detail::choose(gen, data.size(), count)) {
    for (std::uint32_t i = 0; i < data.n_outputs(); ++i) out.y.set(r, i, !data.y.test(r, i));
  }
  return out;
}

}  // namespace cotm
