#pragma once

#include <vector>

#include "cmpdet/image.hpp"
#include "cmpdet/rings.hpp"

namespace cmpdet {

// Thresholds for the fast per-pixel filter chain plus the suppression radius.
struct DetectorParams {
  int delta_th = 5;    // max sector-pair length difference (samples)
  int d_th = 5;        // max inter-ring XOR distance (samples)
  int cd_th = 4;       // max corrosion degree (pixels)
  int nms_radius = 3;  // Chebyshev suppression radius (pixels)

  bool valid() const {
    return delta_th >= 1 && d_th >= 0 && cd_th >= 0 && nms_radius >= 1;
  }
};

// An accepted pixel with its symmetry response R = delta_th - delta2.
struct CornerCandidate {
  int x = 0;
  int y = 0;
  int response = 0;
};

// One maximal run of same-colored samples in a circular ring signal.
struct Run {
  int start = 0;   // index of the first sample in the run
  int length = 0;  // number of samples, 1..16
  bool black = false;
};

// First reason a pixel failed the filter chain, in evaluation order.
enum class RejectReason {
  none,               // accepted
  outer_transitions,  // cropped transition count on the outer ring != 4
  inner_transitions,  // transition count on the inner ring != 4
  sector_delta,       // sector-pair length difference >= delta_th
  xor_distance,       // inter-ring XOR distance >= d_th
  corrosion,          // corrosion degree >= cd_th
};

const char* reject_reason_name(RejectReason r);

// Outcome of the per-pixel filter chain.
struct PixelEval {
  bool accepted = false;
  RejectReason reason = RejectReason::none;
  int response = 0;  // delta_th - delta2; meaningful only when accepted
};

// Number of circular black/white transitions: counts i with g(i) != g(i+1).
int transition_count_inner(RingSignal g);

// Cropped transition count that ignores one-sample spikes: counts i with
// g(i) != g(i+1) AND g(i) != g(i+2).
int transition_count_outer(RingSignal g);

// Circular run decomposition, starting from the first run boundary at or
// after index 0. Empty for constant signals.
std::vector<Run> sector_runs(RingSignal g);

// Max length difference between the two black runs and between the two white
// runs. Requires transition_count_inner(g) == 4 (exactly four runs).
int sector_delta(RingSignal g);

// Number of positions where the two index-aligned ring signals disagree.
int xor_distance(RingSignal g1, RingSignal g2);

// Corrosion degree Cd = max(n1 - nR, nR - n1 - 9) where n1 is the black
// count on the outer ring and nR the black count in the corrosion region.
int corrosion_degree(int n1, int nR);

// Runs the full filter chain at (x, y): outer transitions, inner
// transitions, sector delta, XOR distance, corrosion degree, early-exiting
// at the first failure. Throws std::out_of_range within 6 px of a border.
PixelEval evaluate_pixel(const BinaryImage& bin, int x, int y,
                         const DetectorParams& params);

// Evaluates every interior pixel and returns the accepted ones in row-major
// order. Output is bit-identical for any thread count (rows are partitioned
// into contiguous stripes whose results are concatenated in order).
std::vector<CornerCandidate> scan(const BinaryImage& bin,
                                  const DetectorParams& params,
                                  int threads = 1);

// Non-maximum suppression: a candidate survives iff no neighbor within the
// Chebyshev radius has a strictly greater response, nor an equal response at
// an earlier row-major position. Input order does not matter; the output is
// row-major sorted.
std::vector<CornerCandidate> nms(const std::vector<CornerCandidate>& responses,
                                 int nms_radius);

}  // namespace cmpdet
