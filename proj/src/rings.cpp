#include "cmpdet/rings.hpp"

#include <bit>
#include <stdexcept>

namespace cmpdet {

const Ring& inner_ring() {
  static const Ring ring{
      3,
      {{{3, 0},
        {3, 1},
        {2, 2},
        {1, 3},
        {0, 3},
        {-1, 3},
        {-2, 2},
        {-3, 1},
        {-3, 0},
        {-3, -1},
        {-2, -2},
        {-1, -3},
        {0, -3},
        {1, -3},
        {2, -2},
        {3, -1}}}};
  return ring;
}

const Ring& outer_ring() {
  static const Ring ring{
      5,
      {{{5, 0},
        {5, 2},
        {4, 4},
        {2, 5},
        {0, 5},
        {-2, 5},
        {-4, 4},
        {-5, 2},
        {-5, 0},
        {-5, -2},
        {-4, -4},
        {-2, -5},
        {0, -5},
        {2, -5},
        {4, -4},
        {5, -2}}}};
  return ring;
}

RingSignal signal_from_string(const std::string& s) {
  if (s.size() != 16)
    throw std::invalid_argument("ring signal string must have 16 characters");
  RingSignal g;
  for (int i = 0; i < 16; ++i) {
    if (s[i] == '1')
      g.set(i, true);
    else if (s[i] != '0')
      throw std::invalid_argument("ring signal string must be binary");
  }
  return g;
}

std::string signal_to_string(RingSignal g) {
  std::string s(16, '0');
  for (int i = 0; i < 16; ++i)
    if (g.bit(i)) s[i] = '1';
  return s;
}

RingSignal rotate_signal(RingSignal g, int s) {
  s = ((s % 16) + 16) % 16;
  const unsigned v = g.bits;
  return RingSignal{
      static_cast<std::uint16_t>(((v << s) | (v >> (16 - s))) & 0xffffu)};
}

int popcount16(RingSignal g) { return std::popcount(g.bits); }

RingSignal sample_ring(const BinaryImage& img, int cx, int cy,
                       const Ring& ring) {
  const int m = ring.radius + 1;
  if (cx < m || cy < m || cx >= img.width - m || cy >= img.height - m)
    throw std::out_of_range("sample_ring: center too close to border");
  RingSignal g;
  for (int i = 0; i < 16; ++i) {
    const RingPoint& p = ring.offsets[i];
    g.set(i, img.at(cx + p.dx, cy + p.dy) == 0);
  }
  return g;
}

const std::array<RingPoint, 21>& corrosion_region() {
  static const std::array<RingPoint, 21> region = [] {
    std::array<RingPoint, 21> r{};
    int n = 0;
    for (int dy = -2; dy <= 2; ++dy)
      for (int dx = -2; dx <= 2; ++dx)
        if (dx * dx + dy * dy <= 5) r[n++] = {dx, dy};
    return r;
  }();
  return region;
}

int count_corrosion_black(const BinaryImage& img, int cx, int cy) {
  if (cx < 2 || cy < 2 || cx >= img.width - 2 || cy >= img.height - 2)
    throw std::out_of_range("count_corrosion_black: center too close to border");
  int n = 0;
  for (const RingPoint& p : corrosion_region())
    n += img.at(cx + p.dx, cy + p.dy) == 0;
  return n;
}

}  // namespace cmpdet
