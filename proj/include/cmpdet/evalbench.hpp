#pragma once

#include <string>
#include <utility>
#include <vector>

#include "cmpdet/pipeline.hpp"
#include "cmpdet/synth.hpp"

namespace cmpdet {

// Outcome of matching one frame's detections against ground truth.
struct MatchResult {
  int tp = 0;
  int fp = 0;  // detections left unmatched
  int fn = 0;  // truth corners left unmatched
  double tolerance = 0.0;
  std::vector<std::pair<int, int>> pairs;  // (detected index, truth index)
};

// Greedy nearest-neighbor matching: candidate pairs within tol are taken in
// ascending (distance, detected index, truth index) order, each side used at
// most once. Always tp + fp = |detected| and tp + fn = |truth|.
MatchResult match(const std::vector<Corner>& detected,
                  const GroundTruth& truth, double tol);

// One frame ready for evaluation.
struct EvalFrame {
  std::string name;
  GrayImage image;
  GroundTruth truth;
};

struct FrameStats {
  std::string name;
  int tp = 0;
  int fp = 0;
  int fn = 0;
  bool success = false;
};

struct EvalReport {
  double afp = 0.0;  // mean false positives per frame
  double afn = 0.0;  // mean false negatives per frame
  double sr = 0.0;   // fraction of successful frames
  std::vector<FrameStats> frames;
};

// Runs the detection pipeline over every frame. A frame succeeds iff it has
// no false positives and no false negatives; with literal_gt1 the laxer
// historical reading (failure only when fp > 1 or fn > 1) applies instead.
EvalReport evaluate(const std::vector<EvalFrame>& frames,
                    const PipelineParams& params, double tol,
                    bool literal_gt1 = false);

struct BenchReport {
  int repetitions = 0;
  double mean_ms = 0.0;
  double median_ms = 0.0;
  int threads = 1;
  int corner_count = 0;  // corners found per frame (identical across reps)
  std::vector<double> samples_ms;
};

// Times the detection pipeline on one frame with a monotonic clock, after
// warmup untimed passes. Throws std::logic_error if any repetition's output
// differs from the first (the pipeline must be pure).
BenchReport bench(const GrayImage& frame, const PipelineParams& params,
                  int repetitions, int threads, int warmup = 10);

}  // namespace cmpdet
