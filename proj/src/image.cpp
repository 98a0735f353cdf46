#include "cmpdet/image.hpp"

#include <cctype>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace cmpdet {
namespace {

// Skips whitespace and '#' comment lines between header tokens.
void skip_separators(std::istream& in) {
  for (;;) {
    int c = in.peek();
    if (c == '#') {
      while (c != EOF && c != '\n') c = in.get();
    } else if (c != EOF && std::isspace(c)) {
      in.get();
    } else {
      return;
    }
  }
}

long read_header_int(std::istream& in, const char* field) {
  skip_separators(in);
  long value = 0;
  bool any = false;
  for (;;) {
    int c = in.peek();
    if (c == EOF || !std::isdigit(c)) break;
    in.get();
    value = value * 10 + (c - '0');
    any = true;
    if (value > 1'000'000'000L)
      throw std::runtime_error(std::string("pgm: ") + field + " out of range");
  }
  if (!any)
    throw std::runtime_error(std::string("pgm: missing or malformed ") + field);
  return value;
}

void write_pgm_bytes(int width, int height,
                     const std::vector<std::uint8_t>& data,
                     const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("pgm: cannot open for writing: " + path);
  char header[64];
  std::snprintf(header, sizeof(header), "P5\n%d %d\n255\n", width, height);
  out << header;
  out.write(reinterpret_cast<const char*>(data.data()),
            static_cast<std::streamsize>(data.size()));
  if (!out) throw std::runtime_error("pgm: write failed: " + path);
}

}  // namespace

GrayImage load_pgm(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("pgm: cannot open: " + path);

  char m0 = 0, m1 = 0;
  in.get(m0);
  in.get(m1);
  if (!in || m0 != 'P' || m1 != '5') {
    std::string magic;
    if (in) magic.assign({m0, m1});
    throw std::runtime_error("pgm: unsupported magic '" + magic +
                             "' (want P5)");
  }

  long w = read_header_int(in, "width");
  long h = read_header_int(in, "height");
  long maxval = read_header_int(in, "maxval");
  if (w <= 0) throw std::runtime_error("pgm: width must be positive");
  if (h <= 0) throw std::runtime_error("pgm: height must be positive");
  if (maxval != 255)
    throw std::runtime_error("pgm: maxval " + std::to_string(maxval) +
                             " unsupported (want 255)");

  // Exactly one whitespace byte separates the header from the raster.
  int sep = in.get();
  if (sep == EOF || !std::isspace(sep))
    throw std::runtime_error("pgm: missing raster separator after maxval");

  GrayImage img;
  img.width = static_cast<int>(w);
  img.height = static_cast<int>(h);
  img.data.resize(static_cast<std::size_t>(w) * h);
  in.read(reinterpret_cast<char*>(img.data.data()),
          static_cast<std::streamsize>(img.data.size()));
  if (static_cast<std::size_t>(in.gcount()) != img.data.size())
    throw std::runtime_error("pgm: truncated pixel data (got " +
                             std::to_string(in.gcount()) + " of " +
                             std::to_string(img.data.size()) + " bytes)");
  return img;
}

void save_pgm(const GrayImage& img, const std::string& path) {
  write_pgm_bytes(img.width, img.height, img.data, path);
}

void save_pgm(const BinaryImage& img, const std::string& path) {
  write_pgm_bytes(img.width, img.height, img.data, path);
}

BinaryImage adaptive_threshold(const GrayImage& img, int window, int offset) {
  if (img.width <= 0 || img.height <= 0)
    throw std::invalid_argument("adaptive_threshold: empty image");
  if (window < 3 || window % 2 == 0 ||
      window > std::min(img.width, img.height))
    throw std::invalid_argument(
        "adaptive_threshold: window must be odd and within [3, min(w, h)]");
  if (offset < -64 || offset > 64)
    throw std::invalid_argument(
        "adaptive_threshold: offset must be within [-64, 64]");

  // Summed-area table over the edge-replicated image, so border pixels see a
  // full window x window neighborhood.
  const int half = window / 2;
  const int pw = img.width + 2 * half;
  const int ph = img.height + 2 * half;
  std::vector<std::uint64_t> sat(static_cast<std::size_t>(pw + 1) * (ph + 1),
                                 0);
  auto sat_at = [&](int x, int y) -> std::uint64_t& {
    return sat[static_cast<std::size_t>(y) * (pw + 1) + x];
  };
  for (int y = 0; y < ph; ++y) {
    const int sy = std::min(std::max(y - half, 0), img.height - 1);
    std::uint64_t row = 0;
    for (int x = 0; x < pw; ++x) {
      const int sx = std::min(std::max(x - half, 0), img.width - 1);
      row += img.at(sx, sy);
      sat_at(x + 1, y + 1) = sat_at(x + 1, y) + row;
    }
  }

  const std::int64_t area = static_cast<std::int64_t>(window) * window;
  BinaryImage out(img.width, img.height);
  for (int y = 0; y < img.height; ++y) {
    for (int x = 0; x < img.width; ++x) {
      // Window [x, x + window) x [y, y + window) in padded coordinates.
      const std::uint64_t sum = sat_at(x + window, y + window) -
                                sat_at(x, y + window) -
                                sat_at(x + window, y) + sat_at(x, y);
      // pixel < mean - offset, evaluated as pixel*area < sum - offset*area.
      const std::int64_t lhs = static_cast<std::int64_t>(img.at(x, y)) * area;
      const std::int64_t rhs = static_cast<std::int64_t>(sum) -
                               static_cast<std::int64_t>(offset) * area;
      out.at(x, y) = lhs < rhs ? 0 : 255;
    }
  }
  return out;
}

}  // namespace cmpdet
