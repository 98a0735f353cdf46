#pragma once

#include <cstdint>
#include <vector>

#include "cmpdet/image.hpp"

namespace cmpdet {

enum class DeformMode { none, press, shear, twist };

const char* deform_mode_name(DeformMode m);

// Smooth Gaussian-windowed displacement field applied to the checkerboard:
//   press: radial push away from the center, |u| = amplitude at the peak
//   shear: rigid offset along +x, Gaussian-faded with distance
//   twist: rotation about the center whose tangential displacement peaks at
//          amplitude (reached at one sigma)
struct DeformSpec {
  DeformMode mode = DeformMode::none;
  double amplitude = 0.0;  // peak displacement, px
  double center_u = 0.5;   // center, normalized to image width
  double center_v = 0.5;   // center, normalized to image height
  double radius = 0.25;    // Gaussian sigma, normalized to min(width, height)
};

// Recipe for one synthetic tactile frame. The image is grid*cell_px plus an
// 8 px white border per side unless width/height force a larger canvas, in
// which case the grid is centered. The seed fully determines the output.
struct SynthConfig {
  int grid = 20;     // cells per side
  int cell_px = 16;  // pixels per cell
  DeformSpec deform;
  double corrosion_radius = 0.0;    // blur-disk radius at each corner, px
  double noise_sigma = 0.0;         // Gaussian pixel noise, intensity units
  double illumination_ramp = 0.0;   // intensity slope along the +x+y diagonal
  std::uint64_t seed = 1;
  int width = 0;   // 0: derived from grid and cell_px
  int height = 0;  // 0: derived from grid and cell_px

  bool valid() const;
};

// An interior lattice corner after deformation, with its lattice indices.
struct TruthCorner {
  double x = 0.0;
  double y = 0.0;
  int i = 0;  // lattice column, 1..grid-1
  int j = 0;  // lattice row, 1..grid-1
};

// All (grid-1)^2 interior corners of one generated frame.
struct GroundTruth {
  std::vector<TruthCorner> corners;
};

struct SynthResult {
  GrayImage image;
  GroundTruth truth;
};

// Applies the forward displacement field to one point.
PointF warp_point(const DeformSpec& deform, PointF p, int width, int height);

// Inverts the displacement field: unwarp_point(warp_point(p)) == p to
// solver precision (~1e-9 px). Press/shear invert numerically, twist in
// closed form.
PointF unwarp_point(const DeformSpec& deform, PointF p, int width,
                    int height);

// Renders the checkerboard under the deformation (4x4 supersampled), then
// applies the corner blur disks, the illumination ramp, and seeded Gaussian
// noise, in that order. Ground truth is the warped interior lattice. Throws
// std::invalid_argument for configs that are invalid, not invertible, or
// that push corners out of the 7 px border margin.
SynthResult generate(const SynthConfig& cfg);

}  // namespace cmpdet
