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

#include "core/image.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "core/error.hpp"

namespace approxcim {

GrayImage::GrayImage(unsigned width, unsigned height, std::uint8_t fill)
    : width_(width), height_(height),
      pixels_(static_cast<std::size_t>(width) * height, fill) {}

GrayImage::GrayImage(unsigned width, unsigned height,
                     std::vector<std::uint8_t> pixels)
    : width_(width), height_(height), pixels_(std::move(pixels)) {
  if (pixels_.size() != static_cast<std::size_t>(width) * height) {
    fail(ErrorCode::kInvalidArgument, "pixel count does not match width*height");
  }
}

namespace {

class HeaderReader {
 public:
  explicit HeaderReader(std::string_view bytes) : bytes_(bytes) {}

  void skip_space_and_comments() {
    while (pos_ < bytes_.size()) {
      const char c = bytes_[pos_];
      if (c == '#') {
        while (pos_ < bytes_.size() && bytes_[pos_] != '\n') ++pos_;
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        ++pos_;
      } else {
        break;
      }
    }
  }

  unsigned read_number(const char* field) {
    skip_space_and_comments();
    const std::size_t start = pos_;
    unsigned long value = 0;
    while (pos_ < bytes_.size() &&
           std::isdigit(static_cast<unsigned char>(bytes_[pos_]))) {
      value = value * 10 + static_cast<unsigned long>(bytes_[pos_] - '0');
      if (value > std::numeric_limits<unsigned>::max()) {
        fail(ErrorCode::kParse, std::string("PGM ") + field + " too large");
      }
      ++pos_;
    }
    if (pos_ == start) {
      fail(ErrorCode::kParse, std::string("PGM header: missing ") + field);
    }
    return static_cast<unsigned>(value);
  }

  std::size_t pos_ = 0;
  std::string_view bytes_;
};

}  // namespace

GrayImage read_pgm(std::string_view bytes) {
  if (bytes.size() < 2 || bytes[0] != 'P') {
    fail(ErrorCode::kParse, "not a PGM file");
  }
  if (bytes[1] != '5') {
    fail(ErrorCode::kUnsupported, std::string("unsupported PGM format P") +
                                      bytes[1] + " (only binary P5)");
  }
  HeaderReader header(bytes);
  header.pos_ = 2;
  const unsigned width = header.read_number("width");
  const unsigned height = header.read_number("height");
  const unsigned maxval = header.read_number("maxval");
  if (maxval != 255) {
    fail(ErrorCode::kUnsupported,
         "unsupported PGM maxval " + std::to_string(maxval) + " (need 255)");
  }
  if (header.pos_ >= bytes.size() ||
      !std::isspace(static_cast<unsigned char>(bytes[header.pos_]))) {
    fail(ErrorCode::kParse, "PGM header: truncated");
  }
  ++header.pos_;
  const std::size_t count = static_cast<std::size_t>(width) * height;
  if (bytes.size() - header.pos_ < count) {
    fail(ErrorCode::kParse, "PGM payload truncated: expected " +
                                std::to_string(count) + " bytes, found " +
                                std::to_string(bytes.size() - header.pos_));
  }
  const auto* data = reinterpret_cast<const std::uint8_t*>(bytes.data() + header.pos_);
  return GrayImage(width, height, std::vector<std::uint8_t>(data, data + count));
}

std::string write_pgm(const GrayImage& image) {
  std::string out = "P5\n" + std::to_string(image.width()) + " " +
                    std::to_string(image.height()) + "\n255\n";
  out.append(reinterpret_cast<const char*>(image.pixels().data()), image.size());
  return out;
}

GrayImage read_pgm_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::kIo, "cannot open " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  try {
    return read_pgm(buffer.str());
  } catch (const Error& e) {
    fail(e.code(), path + ": " + e.what());
  }
}

void write_pgm_file(const GrayImage& image, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorCode::kIo, "cannot write " + path);
  const std::string bytes = write_pgm(image);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) fail(ErrorCode::kIo, "write failed: " + path);
}

GrayImage blend_images(const GrayImage& a, const GrayImage& b,
                       const Multiplier& mult) {
  if (a.width() != b.width() || a.height() != b.height()) {
    fail(ErrorCode::kInvalidArgument, "blend: image dimensions differ");
  }
  if (mult.width() < 8) {
    fail(ErrorCode::kInvalidArgument, "blend needs a multiplier of at least 8 bits");
  }
  std::vector<std::uint64_t> x(a.pixels().begin(), a.pixels().end());
  std::vector<std::uint64_t> y(b.pixels().begin(), b.pixels().end());
  std::vector<std::uint64_t> products(x.size());
  mult.multiply_batch(x, y, products);
  std::vector<std::uint8_t> out(products.size());
  for (std::size_t i = 0; i < products.size(); ++i) {
    out[i] = static_cast<std::uint8_t>(std::min<std::uint64_t>(products[i] >> 8, 255));
  }
  return GrayImage(a.width(), a.height(), std::move(out));
}

std::uint64_t integer_sqrt(std::uint64_t v) {
  constexpr std::uint64_t kMaxRoot = 0xFFFFFFFFull;  // (r+1)^2 overflows past this
  std::uint64_t r = std::min<std::uint64_t>(
      static_cast<std::uint64_t>(std::sqrt(static_cast<double>(v))), kMaxRoot);
  while (r > 0 && r * r > v) --r;
  while (r < kMaxRoot && (r + 1) * (r + 1) <= v) ++r;
  return r;
}

namespace {

struct Gradients {
  std::vector<std::int64_t> gx, gy;
};

Gradients sobel_gradients(const GrayImage& img) {
  if (img.width() < 3 || img.height() < 3) {
    fail(ErrorCode::kInvalidArgument, "sobel: image must be at least 3x3");
  }
  Gradients g;
  for (unsigned y = 1; y + 1 < img.height(); ++y) {
    for (unsigned x = 1; x + 1 < img.width(); ++x) {
      auto p = [&](int dx, int dy) -> std::int64_t {
        return img.at(x + dx, y + dy);
      };
      g.gx.push_back((p(1, -1) + 2 * p(1, 0) + p(1, 1)) -
                     (p(-1, -1) + 2 * p(-1, 0) + p(-1, 1)));
      g.gy.push_back((p(-1, 1) + 2 * p(0, 1) + p(1, 1)) -
                     (p(-1, -1) + 2 * p(0, -1) + p(1, -1)));
    }
  }
  return g;
}

template <typename Magnitude>
GrayImage assemble_edges(const GrayImage& img, Magnitude magnitude) {
  GrayImage out(img.width(), img.height(), 0);
  std::size_t i = 0;
  for (unsigned y = 1; y + 1 < img.height(); ++y) {
    for (unsigned x = 1; x + 1 < img.width(); ++x, ++i) {
      out.at(x, y) = static_cast<std::uint8_t>(std::min<std::int64_t>(magnitude(i), 255));
    }
  }
  return out;
}

}  // namespace

GrayImage sobel_edge(const GrayImage& image, const Multiplier& mult16) {
  const Gradients g = sobel_gradients(image);
  std::vector<std::int64_t> sx(g.gx.size()), sy(g.gy.size());
  mult16.multiply_signed_batch(g.gx, g.gx, sx);
  mult16.multiply_signed_batch(g.gy, g.gy, sy);
  return assemble_edges(image, [&](std::size_t i) -> std::int64_t {
    const std::int64_t sum = std::max<std::int64_t>(sx[i] + sy[i], 0);
    return static_cast<std::int64_t>(integer_sqrt(static_cast<std::uint64_t>(sum)));
  });
}

GrayImage sobel_reference(const GrayImage& image) {
  const Gradients g = sobel_gradients(image);
  return assemble_edges(image, [&](std::size_t i) -> std::int64_t {
    const auto sum = static_cast<std::uint64_t>(g.gx[i] * g.gx[i] + g.gy[i] * g.gy[i]);
    return static_cast<std::int64_t>(integer_sqrt(sum));
  });
}

double psnr(const GrayImage& reference, const GrayImage& test) {
  if (reference.width() != test.width() || reference.height() != test.height()) {
    fail(ErrorCode::kInvalidArgument, "psnr: image dimensions differ");
  }
  if (reference.size() == 0) {
    fail(ErrorCode::kInvalidArgument, "psnr: empty image");
  }
  long double squared = 0;
  for (std::size_t i = 0; i < reference.size(); ++i) {
    const long double d = static_cast<long double>(reference.pixels()[i]) - test.pixels()[i];
    squared += d * d;
  }
  if (squared == 0) return std::numeric_limits<double>::infinity();
  const long double mse = squared / static_cast<long double>(reference.size());
  return static_cast<double>(10.0L * std::log10(255.0L * 255.0L / mse));
}

SyntheticKind parse_synthetic_kind(std::string_view name) {
  if (name == "hgradient") return SyntheticKind::kHorizontalGradient;
  if (name == "vgradient") return SyntheticKind::kVerticalGradient;
  if (name == "radial") return SyntheticKind::kRadial;
  if (name == "checker") return SyntheticKind::kCheckerboard;
  if (name == "rings") return SyntheticKind::kRings;
  if (name == "diagonal") return SyntheticKind::kDiagonal;
  fail(ErrorCode::kInvalidArgument, "unknown synthetic image '" + std::string(name) + "'");
}

GrayImage synthetic_image(SyntheticKind kind, unsigned width, unsigned height) {
  if (width < 2 || height < 2) {
    fail(ErrorCode::kInvalidArgument, "synthetic images need at least 2x2 pixels");
  }
  GrayImage img(width, height);
  const std::int64_t cx = width / 2, cy = height / 2;
  const std::uint64_t max_radius =
      integer_sqrt(static_cast<std::uint64_t>(cx * cx + cy * cy)) + 1;
  for (unsigned y = 0; y < height; ++y) {
    for (unsigned x = 0; x < width; ++x) {
      const std::int64_t dx = static_cast<std::int64_t>(x) - cx;
      const std::int64_t dy = static_cast<std::int64_t>(y) - cy;
      const std::uint64_t r = integer_sqrt(static_cast<std::uint64_t>(dx * dx + dy * dy));
      unsigned v = 0;
      switch (kind) {
        case SyntheticKind::kHorizontalGradient: v = x * 255 / (width - 1); break;
        case SyntheticKind::kVerticalGradient: v = y * 255 / (height - 1); break;
        case SyntheticKind::kRadial:
          v = static_cast<unsigned>(255 - std::min<std::uint64_t>(255, r * 255 / max_radius));
          break;
        case SyntheticKind::kCheckerboard:
          v = (((x / 8) + (y / 8)) % 2) ? 215 : 40;
          break;
        case SyntheticKind::kRings: v = static_cast<unsigned>((r * 24) % 256); break;
        case SyntheticKind::kDiagonal:
          v = (x + y) * 255 / (width + height - 2);
          break;
      }
      img.at(x, y) = static_cast<std::uint8_t>(v);
    }
  }
  return img;
}

}  // namespace approxcim
