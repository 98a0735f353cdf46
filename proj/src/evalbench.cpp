#include "cmpdet/evalbench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <stdexcept>

namespace cmpdet {

MatchResult match(const std::vector<Corner>& detected,
                  const GroundTruth& truth, double tol) {
  if (tol <= 0) throw std::invalid_argument("match: tolerance must be > 0");

  struct Pair {
    double d2;
    int det;
    int tru;
  };
  std::vector<Pair> pairs;
  const double tol2 = tol * tol;
  for (int di = 0; di < static_cast<int>(detected.size()); ++di)
    for (int ti = 0; ti < static_cast<int>(truth.corners.size()); ++ti) {
      double dx = detected[di].x - truth.corners[ti].x;
      double dy = detected[di].y - truth.corners[ti].y;
      double d2 = dx * dx + dy * dy;
      if (d2 <= tol2) pairs.push_back({d2, di, ti});
    }
  std::sort(pairs.begin(), pairs.end(), [](const Pair& a, const Pair& b) {
    if (a.d2 != b.d2) return a.d2 < b.d2;
    if (a.det != b.det) return a.det < b.det;
    return a.tru < b.tru;
  });

  MatchResult r;
  r.tolerance = tol;
  std::vector<char> det_used(detected.size(), 0);
  std::vector<char> tru_used(truth.corners.size(), 0);
  for (const Pair& p : pairs) {
    if (det_used[p.det] || tru_used[p.tru]) continue;
    det_used[p.det] = tru_used[p.tru] = 1;
    r.pairs.emplace_back(p.det, p.tru);
  }
  r.tp = static_cast<int>(r.pairs.size());
  r.fp = static_cast<int>(detected.size()) - r.tp;
  r.fn = static_cast<int>(truth.corners.size()) - r.tp;
  return r;
}

EvalReport evaluate(const std::vector<EvalFrame>& frames,
                    const PipelineParams& params, double tol,
                    bool literal_gt1) {
  if (frames.empty())
    throw std::invalid_argument("evaluate: need at least one frame");

  EvalReport rep;
  rep.frames.reserve(frames.size());
  long long fp_sum = 0, fn_sum = 0;
  int successes = 0;
  for (const EvalFrame& f : frames) {
    DetectResult det = detect_corners(f.image, params);
    MatchResult m = match(det.corners, f.truth, tol);
    bool ok = literal_gt1 ? (m.fp <= 1 && m.fn <= 1) : (m.fp == 0 && m.fn == 0);
    rep.frames.push_back({f.name, m.tp, m.fp, m.fn, ok});
    fp_sum += m.fp;
    fn_sum += m.fn;
    successes += ok;
  }
  const double n = static_cast<double>(frames.size());
  rep.afp = fp_sum / n;
  rep.afn = fn_sum / n;
  rep.sr = successes / n;
  return rep;
}

BenchReport bench(const GrayImage& frame, const PipelineParams& params,
                  int repetitions, int threads, int warmup) {
  if (repetitions < 1)
    throw std::invalid_argument("bench: repetitions must be >= 1");

  PipelineParams p = params;
  p.threads = threads;

  auto same = [](const std::vector<Corner>& a, const std::vector<Corner>& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i)
      if (a[i].x != b[i].x || a[i].y != b[i].y ||
          a[i].response != b[i].response || a[i].method != b[i].method)
        return false;
    return true;
  };

  DetectResult first;
  for (int i = 0; i < warmup; ++i) {
    DetectResult r = detect_corners(frame, p);
    if (i == 0)
      first = std::move(r);
    else if (!same(r.corners, first.corners))
      throw std::logic_error("bench: output changed between warmup runs");
  }

  BenchReport rep;
  rep.repetitions = repetitions;
  rep.threads = threads;
  rep.samples_ms.reserve(repetitions);
  for (int i = 0; i < repetitions; ++i) {
    auto t0 = std::chrono::steady_clock::now();
    DetectResult r = detect_corners(frame, p);
    auto t1 = std::chrono::steady_clock::now();
    rep.samples_ms.push_back(
        std::chrono::duration<double, std::milli>(t1 - t0).count());
    if (warmup == 0 && i == 0)
      first = std::move(r);
    else if (!same(r.corners, first.corners))
      throw std::logic_error("bench: output changed between repetitions");
  }
  rep.corner_count = static_cast<int>(first.corners.size());

  double sum = 0;
  for (double s : rep.samples_ms) sum += s;
  rep.mean_ms = sum / repetitions;
  std::vector<double> sorted = rep.samples_ms;
  std::sort(sorted.begin(), sorted.end());
  rep.median_ms = repetitions % 2 == 1
                      ? sorted[repetitions / 2]
                      : 0.5 * (sorted[repetitions / 2 - 1] +
                               sorted[repetitions / 2]);
  return rep;
}

}  // namespace cmpdet
