#include <algorithm>
#include <initializer_list>
#include <stdexcept>
#include <utility>

#include "cmpdet/evalbench.hpp"
#include "doctest.h"

using namespace cmpdet;
using doctest::Approx;

namespace {

Corner corner_at(double x, double y) {
  Corner c;
  c.x = x;
  c.y = y;
  return c;
}

GroundTruth truth_at(std::initializer_list<std::pair<double, double>> pts) {
  GroundTruth t;
  int k = 1;
  for (auto [x, y] : pts) t.corners.push_back({x, y, k++, 1});
  return t;
}

// A small clean checkerboard frame plus its ground truth.
EvalFrame board_frame(const char* name) {
  SynthConfig cfg;
  cfg.grid = 4;
  cfg.cell_px = 12;
  SynthResult r = generate(cfg);
  return {name, std::move(r.image), std::move(r.truth)};
}

PipelineParams small_params() {
  PipelineParams p;
  p.window = 15;  // suited to 12 px cells
  return p;
}

}  // namespace

TEST_CASE("match pairs detections with the nearest truth corners") {
  std::vector<Corner> det = {corner_at(10, 10), corner_at(30.4, 10),
                             corner_at(50, 50)};
  GroundTruth truth = truth_at({{10.2, 10.1}, {30, 10}, {70, 70}});

  MatchResult m = match(det, truth, 2.0);
  CHECK(m.tp == 2);
  CHECK(m.fp == 1);
  CHECK(m.fn == 1);
  CHECK(m.tp + m.fp == 3);
  CHECK(m.tp + m.fn == 3);
  REQUIRE(m.pairs.size() == 2);
  // Ascending-distance greedy order: (0, 0) at 0.05 px^2 beats (1, 1) at
  // 0.16 px^2.
  CHECK(m.pairs[0] == std::pair<int, int>{0, 0});
  CHECK(m.pairs[1] == std::pair<int, int>{1, 1});
}

TEST_CASE("match resolves exact ties towards the lower detected index") {
  std::vector<Corner> det = {corner_at(10, 12), corner_at(10, 8)};
  GroundTruth truth = truth_at({{10, 10}});
  MatchResult m = match(det, truth, 3.0);
  CHECK(m.tp == 1);
  CHECK(m.fp == 1);
  REQUIRE(m.pairs.size() == 1);
  CHECK(m.pairs[0].first == 0);
}

TEST_CASE("match consumes each side at most once") {
  // One detection between two truth corners takes the closer one only.
  std::vector<Corner> det = {corner_at(10, 10)};
  GroundTruth truth = truth_at({{11, 10}, {9.5, 10}});
  MatchResult m = match(det, truth, 5.0);
  CHECK(m.tp == 1);
  CHECK(m.fn == 1);
  CHECK(m.pairs[0] == std::pair<int, int>{0, 1});
}

TEST_CASE("match requires a positive tolerance") {
  CHECK_THROWS_AS(match({}, GroundTruth{}, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(match({}, GroundTruth{}, -1.0), std::invalid_argument);
  MatchResult m = match({}, GroundTruth{}, 1.0);
  CHECK(m.tp == 0);
  CHECK(m.fp == 0);
  CHECK(m.fn == 0);
}

TEST_CASE("evaluate aggregates per-frame stats") {
  std::vector<EvalFrame> frames;
  frames.push_back(board_frame("good"));
  // A blank frame that still claims one truth corner: one guaranteed miss.
  EvalFrame blank{"blank", GrayImage(64, 64, 255), truth_at({{32, 32}})};
  frames.push_back(std::move(blank));

  EvalReport rep = evaluate(frames, small_params(), 3.0);
  REQUIRE(rep.frames.size() == 2);
  CHECK(rep.frames[0].name == "good");
  CHECK(rep.frames[0].tp == 9);
  CHECK(rep.frames[0].fp == 0);
  CHECK(rep.frames[0].fn == 0);
  CHECK(rep.frames[0].success);
  CHECK(rep.frames[1].tp == 0);
  CHECK(rep.frames[1].fn == 1);
  CHECK_FALSE(rep.frames[1].success);
  CHECK(rep.sr == Approx(0.5));
  CHECK(rep.afp == Approx(0.0));
  CHECK(rep.afn == Approx(0.5));

  // The laxer historical reading forgives a single miss per frame.
  EvalReport lax = evaluate(frames, small_params(), 3.0, true);
  CHECK(lax.frames[1].success);
  CHECK(lax.sr == Approx(1.0));

  CHECK_THROWS_AS(evaluate({}, small_params(), 3.0), std::invalid_argument);
}

TEST_CASE("bench times the pipeline and keeps the output fixed") {
  GrayImage frame = board_frame("x").image;
  BenchReport rep = bench(frame, small_params(), 3, 1, 1);
  CHECK(rep.repetitions == 3);
  CHECK(rep.threads == 1);
  CHECK(rep.corner_count == 9);
  REQUIRE(rep.samples_ms.size() == 3);
  for (double s : rep.samples_ms) CHECK(s > 0.0);

  double sum = rep.samples_ms[0] + rep.samples_ms[1] + rep.samples_ms[2];
  CHECK(rep.mean_ms == Approx(sum / 3));
  // Odd count: the median is the middle sample.
  std::vector<double> sorted = rep.samples_ms;
  std::sort(sorted.begin(), sorted.end());
  CHECK(rep.median_ms == sorted[1]);

  // Even count: the median averages the two middle samples.
  BenchReport even = bench(frame, small_params(), 4, 2, 0);
  REQUIRE(even.samples_ms.size() == 4);
  sorted = even.samples_ms;
  std::sort(sorted.begin(), sorted.end());
  CHECK(even.median_ms == Approx(0.5 * (sorted[1] + sorted[2])));
  CHECK(even.corner_count == 9);

  CHECK_THROWS_AS(bench(frame, small_params(), 0, 1), std::invalid_argument);
}
