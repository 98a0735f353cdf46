#include "cmpdet/refiner.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <thread>

namespace cmpdet {

namespace {

constexpr double kPi = std::numbers::pi;

// Displacement gate: a refined position farther than this from the integer
// candidate is distrusted and triggers the next fallback.
constexpr double kMaxShiftPx = 2.0;

// Edge-line pairs meeting shallower than this are treated as parallel.
constexpr double kEdgeParallelDeg = 2.0;

// The two sector centerlines pass through the same corner from opposite
// sides, so for straight edges they are near-collinear by construction and
// their intersection is dominated by sampling noise. Demand a healthy
// crossing angle before trusting it; flatter cases fall through to the
// edge-line cusps, which stay well-conditioned.
constexpr double kMidpointParallelDeg = 15.0;

struct Vec {
  double x = 0.0;
  double y = 0.0;
};

// Total-least-squares line: mean point plus unit direction.
struct Line {
  Vec p;
  Vec d;
};

double bilinear(const GrayImage& g, double x, double y) {
  int x0 = static_cast<int>(std::floor(x));
  int y0 = static_cast<int>(std::floor(y));
  double fx = x - x0, fy = y - y0;
  return g.at(x0, y0) * (1 - fx) * (1 - fy) + g.at(x0 + 1, y0) * fx * (1 - fy) +
         g.at(x0, y0 + 1) * (1 - fx) * fy + g.at(x0 + 1, y0 + 1) * fx * fy;
}

// Slides the integer transition between ring offsets p0 and p1 to subpixel:
// intensities are read along the straight gap (extended one gap either way
// for the level estimate), and a shrinking-window quadratic fit locates the
// crossing of the local mid intensity. Returns the crossing relative to the
// candidate pixel.
Vec edge_on_gap(const GrayImage& gray, int cx, int cy, RingPoint p0,
                RingPoint p1) {
  double dx = p1.dx - p0.dx, dy = p1.dy - p0.dy;
  auto G = [&](double t) {
    return bilinear(gray, cx + p0.dx + t * dx, cy + p0.dy + t * dy);
  };
  double g0 = G(-1.0), g1 = G(0.0), g2 = G(1.0), g3 = G(2.0);
  double lo = std::min(std::min(g0, g1), std::min(g2, g3));
  double hi = std::max(std::max(g0, g1), std::max(g2, g3));
  double m = 0.5 * (lo + hi);

  double t = 0.5, h = 0.5;
  for (int it = 0; it < 4; ++it) {
    double a = G(t - h), b = G(t), c = G(t + h);
    double A = 0.5 * (a - 2 * b + c);
    double B = 0.5 * (c - a);
    double s;
    if (std::abs(A) < 1e-9) {
      if (std::abs(B) < 1e-12) break;  // flat: no crossing information
      s = (m - b) / B;
    } else {
      double disc = B * B - 4 * A * (b - m);
      if (disc < 0) break;  // parabola misses the mid level
      double r = std::sqrt(disc);
      double s1 = (-B + r) / (2 * A), s2 = (-B - r) / (2 * A);
      s = std::abs(s1) <= std::abs(s2) ? s1 : s2;  // root nearest the center
    }
    s = std::clamp(s, -1.5, 1.5);
    t = std::clamp(t + s * h, -0.5, 1.5);
    h = std::max(0.25, 0.5 * h);
  }
  return {p0.dx + t * dx, p0.dy + t * dy};
}

Line fit_line(const std::array<Vec, 3>& pts) {
  double mx = (pts[0].x + pts[1].x + pts[2].x) / 3.0;
  double my = (pts[0].y + pts[1].y + pts[2].y) / 3.0;
  double sxx = 0, syy = 0, sxy = 0;
  for (const Vec& p : pts) {
    double ux = p.x - mx, uy = p.y - my;
    sxx += ux * ux;
    syy += uy * uy;
    sxy += ux * uy;
  }
  double ang = 0.5 * std::atan2(2 * sxy, sxx - syy);
  return {{mx, my}, {std::cos(ang), std::sin(ang)}};
}

std::optional<Vec> intersect_lines(const Line& a, const Line& b,
                                   double min_deg) {
  // Unit directions make the cross product the sine of the meeting angle.
  double cross = a.d.x * b.d.y - a.d.y * b.d.x;
  if (std::abs(cross) < std::sin(min_deg * kPi / 180.0)) return std::nullopt;
  double rx = b.p.x - a.p.x, ry = b.p.y - a.p.y;
  double t = (rx * b.d.y - ry * b.d.x) / cross;
  return Vec{a.p.x + t * a.d.x, a.p.y + t * a.d.y};
}

// One black sector on one ring: the white->black crossing where the
// traversal enters it and the black->white crossing where it leaves.
struct Sector {
  Vec entry;
  Vec exit;
};

// Pairs each ring's 4 edge points into its 2 black sectors and matches
// sectors across rings by bearing, anchored on the inner ring. Coordinates
// come out relative to the candidate.
std::optional<std::array<std::array<Sector, 3>, 2>> group_sectors(
    const std::vector<EdgePoint>& points, int cx, int cy) {
  std::array<std::array<Sector, 3>, 2> groups;
  double ref[2] = {0, 0};

  for (int ring = 0; ring < 3; ++ring) {
    Vec entries[2], exits[2];
    int ne = 0, nx = 0;
    for (const EdgePoint& p : points) {
      if (p.ring != ring) continue;
      Vec v{p.x - cx, p.y - cy};
      if (p.entering) {
        if (ne == 2) return std::nullopt;
        entries[ne++] = v;
      } else {
        if (nx == 2) return std::nullopt;
        exits[nx++] = v;
      }
    }
    if (ne != 2 || nx != 2) return std::nullopt;

    // The sector of an entry ends at the first exit clockwise from it.
    Sector secs[2];
    for (int e = 0; e < 2; ++e) {
      double be = std::atan2(entries[e].y, entries[e].x);
      double best_span = 0;
      int best = -1;
      for (int x = 0; x < 2; ++x) {
        double span =
            std::fmod(std::atan2(exits[x].y, exits[x].x) - be + 4 * kPi,
                      2 * kPi);
        if (best < 0 || span < best_span) {
          best = x;
          best_span = span;
        }
      }
      secs[e] = {entries[e], exits[best]};
    }

    if (ring == 0) {
      for (int k = 0; k < 2; ++k) {
        groups[k][0] = secs[k];
        ref[k] = std::atan2(0.5 * (secs[k].entry.y + secs[k].exit.y),
                            0.5 * (secs[k].entry.x + secs[k].exit.x));
      }
      continue;
    }

    bool used[2] = {false, false};
    for (const Sector& s : secs) {
      double b = std::atan2(0.5 * (s.entry.y + s.exit.y),
                            0.5 * (s.entry.x + s.exit.x));
      int k = std::abs(std::remainder(b - ref[0], 2 * kPi)) <=
                      std::abs(std::remainder(b - ref[1], 2 * kPi))
                  ? 0
                  : 1;
      if (used[k]) return std::nullopt;  // both sectors matched one anchor
      used[k] = true;
      groups[k][ring] = s;
    }
  }
  return groups;
}

}  // namespace

const RefinementRings& refinement_rings() {
  static const RefinementRings rings = [] {
    RefinementRings r;
    r.inner = inner_ring();
    r.middle = Ring{
        4,
        {{{4, 0},
          {4, 2},
          {3, 3},
          {2, 4},
          {0, 4},
          {-2, 4},
          {-3, 3},
          {-4, 2},
          {-4, 0},
          {-4, -2},
          {-3, -3},
          {-2, -4},
          {0, -4},
          {2, -4},
          {3, -3},
          {4, -2}}}};
    r.outer = {{5, 0},   {5, 1},   {5, 2},   {4, 3},   {3, 4},   {2, 5},
               {1, 5},   {0, 5},   {-1, 5},  {-2, 5},  {-3, 4},  {-4, 3},
               {-5, 2},  {-5, 1},  {-5, 0},  {-5, -1}, {-5, -2}, {-4, -3},
               {-3, -4}, {-2, -5}, {-1, -5}, {0, -5},  {1, -5},  {2, -5},
               {3, -4},  {4, -3},  {5, -2},  {5, -1}};
    return r;
  }();
  return rings;
}

const char* refine_method_name(RefineMethod m) {
  switch (m) {
    case RefineMethod::midpoint:
      return "midpoint";
    case RefineMethod::edgepoint:
      return "edgepoint";
    case RefineMethod::unrefined:
      return "unrefined";
  }
  return "unknown";
}

std::optional<std::vector<EdgePoint>> find_edge_points(const BinaryImage& bin,
                                                       const GrayImage& gray,
                                                       int cx, int cy) {
  // Gap sampling reaches 6 px from the center and bilinear reads touch one
  // more, hence the 7 px margin.
  if (cx < 7 || cy < 7 || cx >= bin.width - 7 || cy >= bin.height - 7)
    return std::nullopt;

  const RefinementRings& rr = refinement_rings();
  const RingPoint* ring_pts[3] = {rr.inner.offsets.data(),
                                  rr.middle.offsets.data(), rr.outer.data()};
  const int ring_n[3] = {16, 16, static_cast<int>(rr.outer.size())};

  std::vector<EdgePoint> out;
  out.reserve(12);
  for (int ring = 0; ring < 3; ++ring) {
    const RingPoint* pts = ring_pts[ring];
    const int n = ring_n[ring];
    bool black[28];
    for (int i = 0; i < n; ++i)
      black[i] = bin.at(cx + pts[i].dx, cy + pts[i].dy) == 0;

    int count = 0;
    for (int i = 0; i < n; ++i) count += black[i] != black[(i + 1) % n];
    if (count != 4) return std::nullopt;

    for (int i = 0; i < n; ++i) {
      int j = (i + 1) % n;
      if (black[i] == black[j]) continue;
      Vec v = edge_on_gap(gray, cx, cy, pts[i], pts[j]);
      out.push_back({cx + v.x, cy + v.y, ring, !black[i]});
    }
  }
  return out;
}

std::optional<PointF> midpoint_refine(const std::vector<EdgePoint>& points,
                                      int cx, int cy) {
  auto groups = group_sectors(points, cx, cy);
  if (!groups) return std::nullopt;

  std::array<Line, 2> centerlines;
  for (int k = 0; k < 2; ++k) {
    std::array<Vec, 3> mids;
    for (int r = 0; r < 3; ++r) {
      const Sector& s = (*groups)[k][r];
      mids[r] = {0.5 * (s.entry.x + s.exit.x), 0.5 * (s.entry.y + s.exit.y)};
    }
    centerlines[k] = fit_line(mids);
  }

  auto pt = intersect_lines(centerlines[0], centerlines[1],
                            kMidpointParallelDeg);
  if (!pt || std::hypot(pt->x, pt->y) > kMaxShiftPx) return std::nullopt;
  return PointF{cx + pt->x, cy + pt->y};
}

std::optional<PointF> edgepoint_refine(const std::vector<EdgePoint>& points,
                                       int cx, int cy) {
  auto groups = group_sectors(points, cx, cy);
  if (!groups) return std::nullopt;

  Vec cusps[2];
  for (int k = 0; k < 2; ++k) {
    std::array<Vec, 3> entries, exits;
    for (int r = 0; r < 3; ++r) {
      entries[r] = (*groups)[k][r].entry;
      exits[r] = (*groups)[k][r].exit;
    }
    auto cusp = intersect_lines(fit_line(entries), fit_line(exits),
                                kEdgeParallelDeg);
    if (!cusp) return std::nullopt;
    cusps[k] = *cusp;
  }

  Vec mid{0.5 * (cusps[0].x + cusps[1].x), 0.5 * (cusps[0].y + cusps[1].y)};
  if (std::hypot(mid.x, mid.y) > kMaxShiftPx) return std::nullopt;
  return PointF{cx + mid.x, cy + mid.y};
}

Corner refine(const BinaryImage& bin, const GrayImage& gray,
              const CornerCandidate& cand) {
  Corner c{static_cast<double>(cand.x), static_cast<double>(cand.y),
           cand.response, RefineMethod::unrefined};
  auto points = find_edge_points(bin, gray, cand.x, cand.y);
  if (!points) return c;

  if (auto p = midpoint_refine(*points, cand.x, cand.y)) {
    return {p->x, p->y, cand.response, RefineMethod::midpoint};
  }
  if (auto p = edgepoint_refine(*points, cand.x, cand.y)) {
    return {p->x, p->y, cand.response, RefineMethod::edgepoint};
  }
  return c;
}

std::vector<Corner> refine_all(const BinaryImage& bin, const GrayImage& gray,
                               const std::vector<CornerCandidate>& cands,
                               int threads) {
  std::vector<Corner> out(cands.size());
  const int n = static_cast<int>(cands.size());
  const int nt = std::max(1, std::min(threads, n));

  auto work = [&](int s) {
    int a = static_cast<int>(static_cast<long long>(n) * s / nt);
    int b = static_cast<int>(static_cast<long long>(n) * (s + 1) / nt);
    for (int i = a; i < b; ++i) out[i] = refine(bin, gray, cands[i]);
  };

  if (nt <= 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(nt);
    for (int s = 0; s < nt; ++s) pool.emplace_back(work, s);
    for (auto& th : pool) th.join();
  }
  return out;
}

}  // namespace cmpdet
