#pragma once

#include <vector>

#include "cmpdet/detector.hpp"
#include "cmpdet/image.hpp"
#include "cmpdet/refiner.hpp"

namespace cmpdet {

// Everything the end-to-end detection pass needs: binarization window and
// offset, the filter thresholds, and the worker thread count.
struct PipelineParams {
  int window = 31;  // adaptive threshold window (odd)
  int offset = 0;   // threshold offset
  DetectorParams detector;
  int threads = 1;

  bool valid() const {
    return window >= 3 && window % 2 == 1 && offset >= -64 && offset <= 64 &&
           detector.valid() && threads >= 1;
  }
};

struct DetectResult {
  int width = 0;
  int height = 0;
  std::vector<Corner> corners;  // sorted by (y, x)
};

// Full detection pass: adaptive threshold, candidate scan, non-maximum
// suppression, subpixel refinement. Deterministic for any thread count.
DetectResult detect_corners(const GrayImage& img, const PipelineParams& params);

}  // namespace cmpdet
