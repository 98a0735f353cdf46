#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace cmpdet {

// A subpixel position in image coordinates.
struct PointF {
  double x = 0.0;
  double y = 0.0;
};

// 8-bit grayscale image, row-major, origin at the top-left, y growing down.
struct GrayImage {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> data;

  GrayImage() = default;
  GrayImage(int w, int h, std::uint8_t fill = 0)
      : width(w), height(h), data(static_cast<std::size_t>(w) * h, fill) {}

  std::uint8_t at(int x, int y) const {
    return data[static_cast<std::size_t>(y) * width + x];
  }
  std::uint8_t& at(int x, int y) {
    return data[static_cast<std::size_t>(y) * width + x];
  }
  bool in_bounds(int x, int y) const {
    return x >= 0 && x < width && y >= 0 && y < height;
  }
};

// Binarized image; every pixel is 0 (black) or 255 (white).
struct BinaryImage {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> data;

  BinaryImage() = default;
  BinaryImage(int w, int h, std::uint8_t fill = 255)
      : width(w), height(h), data(static_cast<std::size_t>(w) * h, fill) {}

  std::uint8_t at(int x, int y) const {
    return data[static_cast<std::size_t>(y) * width + x];
  }
  std::uint8_t& at(int x, int y) {
    return data[static_cast<std::size_t>(y) * width + x];
  }

  GrayImage as_gray() const {
    GrayImage g;
    g.width = width;
    g.height = height;
    g.data = data;
    return g;
  }
};

// Reads a binary (P5) PGM with maxval 255. Throws std::runtime_error with a
// message naming the offending header field or the truncation point.
GrayImage load_pgm(const std::string& path);

// Writes the canonical single-line-header form: "P5\n<w> <h>\n255\n" + rows.
void save_pgm(const GrayImage& img, const std::string& path);
void save_pgm(const BinaryImage& img, const std::string& path);

// Local-mean threshold over an edge-clamped window x window neighborhood:
// a pixel turns black iff intensity < mean - offset; ties go white. The mean
// comparison is done in exact integer arithmetic, so results are identical
// across platforms. window must be odd and within [3, min(width, height)];
// offset within [-64, 64].
BinaryImage adaptive_threshold(const GrayImage& img, int window, int offset);

}  // namespace cmpdet
