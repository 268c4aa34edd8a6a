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

// Dataset sources: synthetic noisy XOR, IDX images, set-of-words text, and
// class-imbalance subsampling. All randomness comes from an explicit seed.

#ifndef COTM_DATA_HPP_
#define COTM_DATA_HPP_

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <variant>
#include <vector>

#include "cotm/bits.hpp"
#include "cotm/dataset.hpp"

namespace cotm {

// ---------------------------------------------------------------------------
// Noisy XOR
//
// 4x4 binary images, flattened row-major (bit 4r + c). The 2x2 patch at rows
// 0-1, columns 2-3 carries the class: either diagonal means class 1, any of
// the two horizontal or two vertical lines means class 0. The other 12 pixels
// are fair coin flips. Outputs are one-hot over 2 classes.

inline constexpr std::uint32_t kXorSide = 4;
inline constexpr std::uint32_t kXorInputs = kXorSide * kXorSide;

struct NoisyXorOptions {
  std::size_t n_train = 2500;
  std::size_t n_test = 10000;
  double label_noise = 0.4;  // fraction of training labels flipped, exactly
  std::uint64_t seed = 0;
};

struct SplitDataset {
  Dataset train;
  Dataset test;
};

SplitDataset generate_noisy_xor(const NoisyXorOptions& options);

// Pixel indices of the class patch, in [[0, 1], [2, 3]] patch order.
std::array<std::uint32_t, 4> xor_patch_pixels();

// Patch class of a 16-bit image: 1 diagonal, 0 line, nullopt otherwise.
std::optional<std::uint32_t> xor_patch_class(const BitVector& image);

// Flips exactly round(fraction * size) distinct examples, chosen uniformly.
// Flipping complements every output bit, which swaps the class of a
// two-output one-hot row.
Dataset flip_labels(const Dataset& data, double fraction, std::uint64_t seed);

// ---------------------------------------------------------------------------
// IDX containers (big-endian header, unsigned-byte payload)

struct IdxTensor {
  std::vector<std::uint32_t> dims;
  std::vector<std::uint8_t> values;

  std::size_t items() const { return dims.empty() ? 0 : dims[0]; }
  std::size_t item_size() const;
};

IdxTensor parse_idx(std::span<const std::uint8_t> bytes);
std::vector<std::uint8_t> serialize_idx(const IdxTensor& tensor);
IdxTensor load_idx(const std::filesystem::path& path);
void save_idx(const std::filesystem::path& path, const IdxTensor& tensor);

// ---------------------------------------------------------------------------
// Adaptive Gaussian thresholding

// Normalized 1-D kernel of odd length `window`,
// sigma = 0.3 ((window - 1) / 2 - 1) + 0.8.
std::vector<double> gaussian_kernel(std::uint32_t window);

// out(p) = pixel(p) > G(p) - threshold, with G the Gaussian-weighted mean
// over the window centered at p and borders replicated. Row-major, bit
// r * cols + c.
BitVector binarize_adaptive_gaussian(std::span<const std::uint8_t> pixels, std::uint32_t rows,
                                     std::uint32_t cols, std::uint32_t window = 11,
                                     double threshold = 2.0);

// Binarizes every image of an N x rows x cols tensor and one-hot encodes the
// matching label tensor over `n_classes` outputs.
Dataset images_to_dataset(const IdxTensor& images, const IdxTensor& labels,
                          std::uint32_t n_classes = 10, std::uint32_t window = 11,
                          double threshold = 2.0);

// ---------------------------------------------------------------------------
// Set-of-words text features

// Lowercased maximal runs of ASCII letters and digits. Bytes >= 0x80 count as
// word characters so UTF-8 words stay whole.
std::vector<std::string> tokenize(std::string_view text);

class Vocabulary {
 public:
  Vocabulary() = default;
  // Throws InputError on duplicate or empty tokens.
  explicit Vocabulary(std::vector<std::string> tokens);

  std::size_t size() const { return tokens_.size(); }
  const std::vector<std::string>& tokens() const { return tokens_; }
  std::optional<std::uint32_t> find(std::string_view token) const;

  friend bool operator==(const Vocabulary& a, const Vocabulary& b) { return a.tokens_ == b.tokens_; }

 private:
  std::vector<std::string> tokens_;
  std::unordered_map<std::string, std::uint32_t> index_;
};

// Tokens ranked by document frequency, ties broken lexicographically; the
// first max_size are kept.
Vocabulary build_vocabulary(std::span<const std::string> texts, std::size_t max_size);

// Bit v set iff token v occurs in the text.
BitVector sow_vectorize(std::string_view text, const Vocabulary& vocabulary);

void save_vocabulary(const std::filesystem::path& path, const Vocabulary& vocabulary);
Vocabulary load_vocabulary(const std::filesystem::path& path);

struct LabeledText {
  std::uint32_t label = 0;
  std::string text;
};

// One example per line: "<label>\t<text>". Blank lines are skipped.
std::vector<LabeledText> parse_labeled_texts(std::string_view content);
std::vector<LabeledText> load_labeled_texts(const std::filesystem::path& path);

Dataset texts_to_dataset(std::span<const LabeledText> texts, const Vocabulary& vocabulary,
                         std::uint32_t n_classes);

// ---------------------------------------------------------------------------
// Class imbalance

// Deletes round(fraction * count) examples of class `cls`.
struct RemoveFraction {
  std::uint32_t cls = 0;
  double fraction = 0.0;
};

// ranking[r] is the class of rank r; it keeps floor(0.5^r * count).
// Classes absent from the ranking are untouched.
struct Geometric {
  std::vector<std::uint32_t> ranking;
};

using ImbalanceMode = std::variant<RemoveFraction, Geometric>;

// Survivors keep their original relative order.
Dataset subsample_imbalance(const Dataset& data, const ImbalanceMode& mode, std::uint64_t seed);

}  // namespace cotm

#endif  // COTM_DATA_HPP_
