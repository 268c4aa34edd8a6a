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

#include <algorithm>
#include <cmath>
#include <string>

#include "cotm/data.hpp"
#include "cotm/errors.hpp"

namespace cotm {

std::vector<double> gaussian_kernel(std::uint32_t window) {
  if (window == 0 || window % 2 == 0) {
    throw ConfigError("binarize: window must be odd, got " + std::to_string(window));
  }
  const double sigma = 0.3 * ((window - 1) * 0.5 - 1.0) + 0.8;
  const double center = (window - 1) * 0.5;
  std::vector<double> k(window);
  double sum = 0.0;
  for (std::uint32_t i = 0; i < window; ++i) {
    const double dx = i - center;
    k[i] = std::exp(-(dx * dx) / (2.0 * sigma * sigma));
    sum += k[i];
  }
  for (double& v : k) v /= sum;
  return k;
}

BitVector binarize_adaptive_gaussian(std::span<const std::uint8_t> pixels, std::uint32_t rows,
                                     std::uint32_t cols, std::uint32_t window, double threshold) {
  const std::vector<double> kernel = gaussian_kernel(window);
  if (rows == 0 || cols == 0) throw ShapeError("binarize: image is empty");
  if (pixels.size() != std::size_t{rows} * cols) {
    throw ShapeError("binarize: " + std::to_string(pixels.size()) + " pixels for a " +
                     std::to_string(rows) + "x" + std::to_string(cols) + " image");
  }
  const auto half = static_cast<std::int64_t>(window / 2);
  auto clamp_to = [](std::int64_t v, std::uint32_t size) {
    return static_cast<std::size_t>(std::clamp<std::int64_t>(v, 0, std::int64_t{size} - 1));
  };

  // Horizontal pass, then vertical; borders replicate the edge pixel.
  std::vector<double> horizontal(pixels.size());
  for (std::uint32_t r = 0; r < rows; ++r) {
    for (std::uint32_t c = 0; c < cols; ++c) {
      double acc = 0.0;
      for (std::int64_t d = -half; d <= half; ++d) {
        acc += kernel[static_cast<std::size_t>(d + half)] *
               pixels[std::size_t{r} * cols + clamp_to(std::int64_t{c} + d, cols)];
      }
      horizontal[std::size_t{r} * cols + c] = acc;
    }
  }
  BitVector out(pixels.size());
  for (std::uint32_t r = 0; r < rows; ++r) {
    for (std::uint32_t c = 0; c < cols; ++c) {
      double mean = 0.0;
      for (std::int64_t d = -half; d <= half; ++d) {
        mean += kernel[static_cast<std::size_t>(d + half)] *
                horizontal[clamp_to(std::int64_t{r} + d, rows) * cols + c];
      }
      const std::size_t p = std::size_t{r} * cols + c;
      out.set(p, static_cast<double>(pixels[p]) > mean - threshold);
    }
  }
  return out;
}

Dataset images_to_dataset(const IdxTensor& images, const IdxTensor& labels,
                          std::uint32_t n_classes, std::uint32_t window, double threshold) {
  if (images.dims.size() != 3) {
    throw ShapeError("images_to_dataset: image tensor must be 3-D, got " +
                     std::to_string(images.dims.size()) + "-D");
  }
  if (labels.dims.size() != 1 || labels.items() != images.items()) {
    throw ShapeError("images_to_dataset: expected " + std::to_string(images.items()) +
                     " labels in a 1-D tensor");
  }
  gaussian_kernel(window);  // validates the window before any work
  const std::uint32_t rows = images.dims[1];
  const std::uint32_t cols = images.dims[2];
  const std::size_t item = images.item_size();
  BitMatrix x(images.items(), item);
  std::vector<std::uint32_t> classes(images.items());
  for (std::size_t n = 0; n < images.items(); ++n) {
    x.set_row(n, binarize_adaptive_gaussian(
                     std::span<const std::uint8_t>(images.values).subspan(n * item, item), rows,
                     cols, window, threshold));
    classes[n] = labels.values[n];
    if (classes[n] >= n_classes) {
      throw InputError("images_to_dataset: label " + std::to_string(classes[n]) + " at item " +
                       std::to_string(n) + " exceeds " + std::to_string(n_classes) + " classes");
    }
  }
  Dataset d(std::move(x), one_hot(classes, n_classes));
  for (std::uint32_t c = 0; c < n_classes; ++c) d.class_names.push_back(std::to_string(c));
  return d;
}

}  // namespace cotm
