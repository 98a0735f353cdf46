#include "cmpdet/pipeline.hpp"

#include <algorithm>
#include <stdexcept>

namespace cmpdet {

DetectResult detect_corners(const GrayImage& img,
                            const PipelineParams& params) {
  if (!params.valid())
    throw std::invalid_argument("detect_corners: invalid params");

  DetectResult out;
  out.width = img.width;
  out.height = img.height;
  if (img.width < 13 || img.height < 13) return out;  // no interior pixels

  int window = std::min(params.window, std::min(img.width, img.height));
  if (window % 2 == 0) --window;

  BinaryImage bin = adaptive_threshold(img, window, params.offset);
  std::vector<CornerCandidate> cands =
      scan(bin, params.detector, params.threads);
  std::vector<CornerCandidate> peaks = nms(cands, params.detector.nms_radius);
  out.corners = refine_all(bin, img, peaks, params.threads);

  std::sort(out.corners.begin(), out.corners.end(),
            [](const Corner& a, const Corner& b) {
              if (a.y != b.y) return a.y < b.y;
              if (a.x != b.x) return a.x < b.x;
              return a.response > b.response;
            });
  return out;
}

}  // namespace cmpdet
