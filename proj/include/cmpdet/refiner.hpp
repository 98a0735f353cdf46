#pragma once

#include <optional>
#include <vector>

#include "cmpdet/detector.hpp"
#include "cmpdet/image.hpp"
#include "cmpdet/rings.hpp"

namespace cmpdet {

// Sampling geometry for subpixel refinement: the two detection radii plus a
// middle layer, with the radius-5 layer densified to the full Bresenham
// circle so edge crossings are never lost in a gap.
struct RefinementRings {
  Ring inner;                    // radius 3, 16 samples
  Ring middle;                   // radius 4, 16 samples
  std::vector<RingPoint> outer;  // radius 5, 28 samples, no gaps
};

const RefinementRings& refinement_rings();

// A subpixel crossing of a black/white edge with one refinement ring. The
// position stays within 1 px of the integer sample where the binary signal
// flips.
struct EdgePoint {
  double x = 0.0;
  double y = 0.0;
  int ring = 0;           // 0 inner, 1 middle, 2 outer
  bool entering = false;  // true: white->black along the clockwise traversal
};

enum class RefineMethod { midpoint, edgepoint, unrefined };

const char* refine_method_name(RefineMethod m);

// A detector candidate after subpixel refinement.
struct Corner {
  double x = 0.0;
  double y = 0.0;
  int response = 0;
  RefineMethod method = RefineMethod::unrefined;
};

// Locates the black/white crossings of all three refinement rings around
// (cx, cy) and slides each to subpixel along its gap using the gray image.
// Returns the 12 points (4 per ring, ring-major, traversal order), or
// nothing when any ring does not show exactly 4 transitions or the margin
// of 7 px to the borders is violated.
std::optional<std::vector<EdgePoint>> find_edge_points(const BinaryImage& bin,
                                                       const GrayImage& gray,
                                                       int cx, int cy);

// Intersection of the two black-sector centerlines, each fitted through the
// three per-ring sector midpoints. Degenerate when the centerlines are
// near-parallel or the intersection strays more than 2 px from (cx, cy).
std::optional<PointF> midpoint_refine(const std::vector<EdgePoint>& points,
                                      int cx, int cy);

// Midpoint of the two sector cusps, each cusp being the intersection of a
// sector's entry and exit edge lines (fitted through three same-polarity
// points). Same displacement rule as midpoint_refine.
std::optional<PointF> edgepoint_refine(const std::vector<EdgePoint>& points,
                                       int cx, int cy);

// Full refinement: midpoint first, edge-point cusps as fallback, original
// integer position (tagged unrefined) when both degenerate.
Corner refine(const BinaryImage& bin, const GrayImage& gray,
              const CornerCandidate& cand);

// Refines candidates independently (optionally in parallel); output order
// matches input order for any thread count.
std::vector<Corner> refine_all(const BinaryImage& bin, const GrayImage& gray,
                               const std::vector<CornerCandidate>& cands,
                               int threads = 1);

}  // namespace cmpdet
