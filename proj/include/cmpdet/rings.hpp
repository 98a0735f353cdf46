#pragma once

#include <array>
#include <cstdint>
#include <string>

#include "cmpdet/image.hpp"

namespace cmpdet {

struct RingPoint {
  int dx = 0;
  int dy = 0;
};

// 16 integer offsets on a circle around the probe pixel, ordered clockwise
// (screen sense, y down) starting at the +x axis, one sample per 22.5°.
// Rotating the plane by 90° maps offsets[i] onto offsets[(i + 4) % 16].
struct Ring {
  int radius = 0;
  std::array<RingPoint, 16> offsets{};
};

// Radius-3 ring: the 16-pixel circle used by segment-test corner detectors.
const Ring& inner_ring();

// Radius-5 ring: 16 samples at 22.5° spacing; the circle has gaps because
// only every other rasterized pixel is kept near the axes.
const Ring& outer_ring();

// One bit per ring sample; bit i corresponds to Ring.offsets[i] and is 1
// when the binarized pixel there is black (0).
struct RingSignal {
  std::uint16_t bits = 0;

  int bit(int i) const { return (bits >> i) & 1; }
  void set(int i, bool v) {
    if (v)
      bits |= static_cast<std::uint16_t>(1u << i);
    else
      bits &= static_cast<std::uint16_t>(~(1u << i));
  }
  friend bool operator==(RingSignal a, RingSignal b) {
    return a.bits == b.bits;
  }
};

// s[i] in {'0','1'} becomes bit i. Accepts exactly 16 characters.
RingSignal signal_from_string(const std::string& s);
std::string signal_to_string(RingSignal g);

// g rotated so that bit i of the result is bit (i - s mod 16) of g, i.e. the
// pattern advances clockwise by s samples.
RingSignal rotate_signal(RingSignal g, int s);

int popcount16(RingSignal g);

// Samples one ring around (cx, cy). The center must be at least radius + 1
// px away from every border; violations throw std::out_of_range.
RingSignal sample_ring(const BinaryImage& img, int cx, int cy,
                       const Ring& ring);

// The 21 offsets with dx^2 + dy^2 <= 5: the disk in which corner corrosion
// concentrates. Ordered row-major (dy, then dx).
const std::array<RingPoint, 21>& corrosion_region();

// Number of black pixels in the corrosion region around (cx, cy). The center
// must be at least 3 px from every border.
int count_corrosion_black(const BinaryImage& img, int cx, int cy);

}  // namespace cmpdet
