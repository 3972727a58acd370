// Copyright 2026 The approxcim Authors
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

// 8-bit grayscale images, binary PGM I/O and multiplier-driven workloads.

#ifndef APPROXCIM_CORE_IMAGE_HPP
#define APPROXCIM_CORE_IMAGE_HPP

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "core/multiplier.hpp"

namespace approxcim {

class GrayImage {
 public:
  GrayImage() = default;
  GrayImage(unsigned width, unsigned height, std::uint8_t fill = 0);
  GrayImage(unsigned width, unsigned height, std::vector<std::uint8_t> pixels);

  unsigned width() const { return width_; }
  unsigned height() const { return height_; }
  std::size_t size() const { return pixels_.size(); }

  std::uint8_t at(unsigned x, unsigned y) const { return pixels_[y * width_ + x]; }
  std::uint8_t& at(unsigned x, unsigned y) { return pixels_[y * width_ + x]; }
  const std::vector<std::uint8_t>& pixels() const { return pixels_; }

  friend bool operator==(const GrayImage&, const GrayImage&) = default;

 private:
  unsigned width_ = 0;
  unsigned height_ = 0;
  std::vector<std::uint8_t> pixels_;
};

/// Binary P5 with maxval 255 only.
GrayImage read_pgm(std::string_view bytes);
std::string write_pgm(const GrayImage& image);
GrayImage read_pgm_file(const std::string& path);
void write_pgm_file(const GrayImage& image, const std::string& path);

/// out = mult(a, b) >> 8, clamped to 255. `mult` must be at least 8 bits wide.
GrayImage blend_images(const GrayImage& a, const GrayImage& b,
                       const Multiplier& mult);

/// Sobel magnitude: exact 3x3 convolution, squares through the signed
/// multiplier, exact integer square root, clamp to 255, zero border.
GrayImage sobel_edge(const GrayImage& image, const Multiplier& mult16);

/// Reference Sobel with exact arithmetic throughout.
GrayImage sobel_reference(const GrayImage& image);

/// 10*log10(255^2 / MSE); +infinity for identical images.
double psnr(const GrayImage& reference, const GrayImage& test);

/// floor(sqrt(v)).
std::uint64_t integer_sqrt(std::uint64_t v);

enum class SyntheticKind {
  kHorizontalGradient,
  kVerticalGradient,
  kRadial,
  kCheckerboard,
  kRings,
  kDiagonal
};

SyntheticKind parse_synthetic_kind(std::string_view name);
GrayImage synthetic_image(SyntheticKind kind, unsigned width, unsigned height);

}  // namespace approxcim

#endif  // APPROXCIM_CORE_IMAGE_HPP
