#include "cmpdet/detector.hpp"

#include <algorithm>
#include <cstdlib>
#include <stdexcept>
#include <thread>
#include <utility>

namespace cmpdet {

int transition_count_inner(RingSignal g) {
  std::uint16_t next = rotate_signal(g, 15).bits;  // bit i = g(i+1)
  return popcount16(RingSignal{static_cast<std::uint16_t>(g.bits ^ next)});
}

int transition_count_outer(RingSignal g) {
  std::uint16_t a = g.bits ^ rotate_signal(g, 15).bits;  // g(i) != g(i+1)
  std::uint16_t b = g.bits ^ rotate_signal(g, 14).bits;  // g(i) != g(i+2)
  return popcount16(RingSignal{static_cast<std::uint16_t>(a & b)});
}

std::vector<Run> sector_runs(RingSignal g) {
  int start = -1;
  for (int i = 0; i < 16; ++i) {
    if (g.bit(i) != g.bit((i + 15) & 15)) {
      start = i;
      break;
    }
  }
  if (start < 0) return {};  // constant signal: no boundaries

  std::vector<Run> runs;
  int i = start;
  do {
    Run r{i, 1, g.bit(i) != 0};
    while (r.length < 16 && g.bit((i + r.length) & 15) == g.bit(i)) ++r.length;
    runs.push_back(r);
    i = (i + r.length) & 15;
  } while (i != start);
  return runs;
}

int sector_delta(RingSignal g) {
  // Four transitions bound four runs; runs 0/2 share one color, 1/3 the
  // other, regardless of which color comes first.
  int t[4] = {0, 0, 0, 0};
  int n = 0;
  for (int i = 0; i < 16 && n < 4; ++i)
    if (g.bit(i) != g.bit((i + 1) & 15)) t[n++] = i;
  int len0 = t[1] - t[0];
  int len1 = t[2] - t[1];
  int len2 = t[3] - t[2];
  int len3 = 16 - t[3] + t[0];
  return std::max(std::abs(len0 - len2), std::abs(len1 - len3));
}

int xor_distance(RingSignal g1, RingSignal g2) {
  return popcount16(RingSignal{static_cast<std::uint16_t>(g1.bits ^ g2.bits)});
}

int corrosion_degree(int n1, int nR) { return std::max(n1 - nR, nR - n1 - 9); }

const char* reject_reason_name(RejectReason r) {
  switch (r) {
    case RejectReason::none:
      return "none";
    case RejectReason::outer_transitions:
      return "outer-transitions";
    case RejectReason::inner_transitions:
      return "inner-transitions";
    case RejectReason::sector_delta:
      return "sector-delta";
    case RejectReason::xor_distance:
      return "xor-distance";
    case RejectReason::corrosion:
      return "corrosion";
  }
  return "unknown";
}

PixelEval evaluate_pixel(const BinaryImage& bin, int x, int y,
                         const DetectorParams& params) {
  if (x < 6 || y < 6 || x >= bin.width - 6 || y >= bin.height - 6)
    throw std::out_of_range("evaluate_pixel: center within 6 px of a border");

  RingSignal g1 = sample_ring(bin, x, y, outer_ring());
  if (transition_count_outer(g1) != 4)
    return {false, RejectReason::outer_transitions, 0};

  RingSignal g2 = sample_ring(bin, x, y, inner_ring());
  if (transition_count_inner(g2) != 4)
    return {false, RejectReason::inner_transitions, 0};

  int d2 = sector_delta(g2);
  if (d2 >= params.delta_th) return {false, RejectReason::sector_delta, 0};

  if (xor_distance(g1, g2) >= params.d_th)
    return {false, RejectReason::xor_distance, 0};

  int n1 = popcount16(g1);
  int nR = count_corrosion_black(bin, x, y);
  if (corrosion_degree(n1, nR) >= params.cd_th)
    return {false, RejectReason::corrosion, 0};

  return {true, RejectReason::none, params.delta_th - d2};
}

std::vector<CornerCandidate> scan(const BinaryImage& bin,
                                  const DetectorParams& params, int threads) {
  std::vector<CornerCandidate> out;
  if (bin.width < 13 || bin.height < 13) return out;  // no interior pixels

  const int y0 = 6;
  const int y1 = bin.height - 6;
  const int rows = y1 - y0;
  const int nt = std::max(1, std::min(threads, rows));

  // Contiguous row stripes with per-stripe buffers keep the merged output
  // row-major and independent of the thread count.
  std::vector<std::vector<CornerCandidate>> parts(nt);
  auto work = [&](int s) {
    auto& part = parts[s];
    int ya = y0 + static_cast<int>(static_cast<long long>(rows) * s / nt);
    int yb = y0 + static_cast<int>(static_cast<long long>(rows) * (s + 1) / nt);
    for (int y = ya; y < yb; ++y)
      for (int x = 6; x < bin.width - 6; ++x) {
        PixelEval e = evaluate_pixel(bin, x, y, params);
        if (e.accepted) part.push_back({x, y, e.response});
      }
  };

  if (nt == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(nt);
    for (int s = 0; s < nt; ++s) pool.emplace_back(work, s);
    for (auto& th : pool) th.join();
  }

  std::size_t total = 0;
  for (const auto& p : parts) total += p.size();
  out.reserve(total);
  for (const auto& p : parts) out.insert(out.end(), p.begin(), p.end());
  return out;
}

std::vector<CornerCandidate> nms(const std::vector<CornerCandidate>& responses,
                                 int nms_radius) {
  // Work on a row-major sorted copy so the result depends only on the
  // candidate set, not on the order the caller supplies it in.
  std::vector<CornerCandidate> sorted(responses);
  std::sort(sorted.begin(), sorted.end(),
            [](const CornerCandidate& a, const CornerCandidate& b) {
              return a.y < b.y || (a.y == b.y && a.x < b.x);
            });

  std::vector<CornerCandidate> kept;
  const int n = static_cast<int>(sorted.size());

  // Each neighborhood row is a contiguous range found by binary search.
  auto row_from = [&](int y, int xmin) {
    return std::lower_bound(
        sorted.begin(), sorted.end(), std::make_pair(y, xmin),
        [](const CornerCandidate& c, const std::pair<int, int>& k) {
          return c.y < k.first || (c.y == k.first && c.x < k.second);
        });
  };

  for (int i = 0; i < n; ++i) {
    const CornerCandidate& c = sorted[i];
    bool best = true;
    for (int y = c.y - nms_radius; y <= c.y + nms_radius && best; ++y) {
      for (auto it = row_from(y, c.x - nms_radius);
           it != sorted.end() && it->y == y && it->x <= c.x + nms_radius;
           ++it) {
        int j = static_cast<int>(it - sorted.begin());
        if (j == i) continue;
        // Strictly stronger neighbors win; ties go to the earliest
        // row-major position.
        if (it->response > c.response ||
            (it->response == c.response && j < i)) {
          best = false;
          break;
        }
      }
    }
    if (best) kept.push_back(c);
  }
  return kept;
}

}  // namespace cmpdet
