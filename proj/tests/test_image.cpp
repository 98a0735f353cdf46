#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <string>

#include "cmpdet/image.hpp"
#include "doctest.h"

using namespace cmpdet;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  return std::string(std::istreambuf_iterator<char>(in),
                     std::istreambuf_iterator<char>());
}

void write_file(const std::string& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
}

}  // namespace

TEST_CASE("pgm round trip preserves pixels and dimensions") {
  GrayImage img(4, 3);
  std::uint8_t v = 7;
  for (int y = 0; y < 3; ++y)
    for (int x = 0; x < 4; ++x) img.at(x, y) = v = v * 31 + 17;
  img.at(0, 0) = 0;
  img.at(3, 2) = 255;

  save_pgm(img, "t_roundtrip.pgm");
  GrayImage back = load_pgm("t_roundtrip.pgm");
  CHECK(back.width == 4);
  CHECK(back.height == 3);
  CHECK(back.data == img.data);

  // Byte-exact header: magic, dimensions, maxval, single separator.
  std::string bytes = read_file("t_roundtrip.pgm");
  CHECK(bytes.substr(0, 11) == "P5\n4 3\n255\n");
  CHECK(bytes.size() == 11 + 12);
}

TEST_CASE("pgm loader accepts comments and rejects malformed headers") {
  write_file("t_comment.pgm", "P5\n# made by hand\n2 2\n255\n\x10\x20\x30\x40");
  GrayImage img = load_pgm("t_comment.pgm");
  CHECK(img.width == 2);
  CHECK(img.height == 2);
  CHECK(img.at(1, 1) == 0x40);

  CHECK_THROWS_AS(load_pgm("t_does_not_exist.pgm"), std::runtime_error);

  write_file("t_magic.pgm", "P2\n2 2\n255\n");
  CHECK_THROWS_AS(load_pgm("t_magic.pgm"), std::runtime_error);

  write_file("t_maxval.pgm", "P5\n2 2\n65535\n");
  CHECK_THROWS_AS(load_pgm("t_maxval.pgm"), std::runtime_error);

  write_file("t_trunc.pgm", "P5\n2 2\n255\n\x01\x02");
  CHECK_THROWS_AS(load_pgm("t_trunc.pgm"), std::runtime_error);

  write_file("t_nowidth.pgm", "P5\nx 2\n255\n");
  CHECK_THROWS_AS(load_pgm("t_nowidth.pgm"), std::runtime_error);
}

TEST_CASE("binary image converts to gray losslessly") {
  BinaryImage bin(3, 2);
  bin.at(1, 0) = 0;
  bin.at(2, 1) = 0;
  GrayImage g = bin.as_gray();
  CHECK(g.width == 3);
  CHECK(g.height == 2);
  CHECK(g.at(0, 0) == 255);
  CHECK(g.at(1, 0) == 0);
  CHECK(g.at(2, 1) == 0);
}

TEST_CASE("adaptive threshold validates its arguments") {
  GrayImage img(8, 8, 128);
  CHECK_THROWS_AS(adaptive_threshold(img, 4, 0), std::invalid_argument);
  CHECK_THROWS_AS(adaptive_threshold(img, 1, 0), std::invalid_argument);
  CHECK_THROWS_AS(adaptive_threshold(img, 9, 0), std::invalid_argument);
  CHECK_THROWS_AS(adaptive_threshold(img, 3, 65), std::invalid_argument);
  CHECK_THROWS_AS(adaptive_threshold(img, 3, -65), std::invalid_argument);
  CHECK_THROWS_AS(adaptive_threshold(GrayImage(), 3, 0),
                  std::invalid_argument);
  CHECK_NOTHROW(adaptive_threshold(img, 7, 64));
}

TEST_CASE("adaptive threshold sends exact-mean ties to white") {
  // Constant image: every pixel equals its window mean.
  GrayImage img(9, 9, 100);
  BinaryImage at0 = adaptive_threshold(img, 5, 0);
  for (std::uint8_t p : at0.data) CHECK(p == 255);

  // offset -1 moves the threshold to mean + 1, so everything turns black.
  BinaryImage atm1 = adaptive_threshold(img, 5, -1);
  for (std::uint8_t p : atm1.data) CHECK(p == 0);

  // offset 1 keeps everything white.
  BinaryImage atp1 = adaptive_threshold(img, 5, 1);
  for (std::uint8_t p : atp1.data) CHECK(p == 255);
}

TEST_CASE("adaptive threshold splits a step edge") {
  GrayImage img(20, 10);
  for (int y = 0; y < 10; ++y)
    for (int x = 0; x < 20; ++x) img.at(x, y) = x < 10 ? 20 : 220;

  // At offset 0 flat neighborhoods tie and stay white; only the dark-side
  // columns whose 5x5 window overlaps the bright step are locally darker
  // than their mean.
  BinaryImage bin = adaptive_threshold(img, 5, 0);
  for (int y = 0; y < 10; ++y)
    for (int x = 0; x < 20; ++x)
      CHECK(bin.at(x, y) == (x == 8 || x == 9 ? 0 : 255));

  // A positive offset biases towards white and erodes the black band.
  BinaryImage biased = adaptive_threshold(img, 5, 45);
  for (int y = 0; y < 10; ++y) {
    CHECK(biased.at(8, y) == 255);  // 25*20 < 1500 - 25*45 fails
    CHECK(biased.at(9, y) == 0);    // 25*20 < 2500 - 25*45 holds
  }
}

TEST_CASE("adaptive threshold matches a brute-force reference") {
  // Deterministic pseudo-random image.
  GrayImage img(17, 13);
  std::uint32_t s = 12345;
  for (auto& p : img.data) {
    s = s * 1664525u + 1013904223u;
    p = static_cast<std::uint8_t>(s >> 24);
  }

  for (int offset : {-7, 0, 7}) {
    BinaryImage bin = adaptive_threshold(img, 5, offset);
    for (int y = 0; y < img.height; ++y)
      for (int x = 0; x < img.width; ++x) {
        long long sum = 0;
        for (int dy = -2; dy <= 2; ++dy)
          for (int dx = -2; dx <= 2; ++dx) {
            int sx = std::min(std::max(x + dx, 0), img.width - 1);
            int sy = std::min(std::max(y + dy, 0), img.height - 1);
            sum += img.at(sx, sy);
          }
        // black iff pixel < mean - offset, exact integer arithmetic
        bool black = 25LL * img.at(x, y) < sum - 25LL * offset;
        CHECK(bin.at(x, y) == (black ? 0 : 255));
      }
  }
}

TEST_CASE("larger offset never adds black pixels") {
  GrayImage img(15, 15);
  std::uint32_t s = 777;
  for (auto& p : img.data) {
    s = s * 1664525u + 1013904223u;
    p = static_cast<std::uint8_t>(s >> 23);
  }
  BinaryImage lo = adaptive_threshold(img, 7, 2);
  BinaryImage hi = adaptive_threshold(img, 7, 10);
  for (std::size_t i = 0; i < lo.data.size(); ++i)
    if (hi.data[i] == 0) CHECK(lo.data[i] == 0);
}
