#include "cmpdet/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace cmpdet {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr int kMargin = 8;       // white border around the grid, px
constexpr int kSupersample = 4;  // anti-aliasing samples per pixel per axis

// Gaussian displacement fields stay invertible while the peak displacement
// is below sigma*sqrt(e); stop well short of it so the inverse solvers
// contract briskly.
constexpr double kInvertibilityFactor = 0.8;

struct Field {
  DeformMode mode = DeformMode::none;
  double amp = 0.0;
  double cx = 0.0, cy = 0.0;
  double sigma = 1.0;
  double phi0 = 0.0;  // twist peak angle, radians

  double envelope(double r) const {
    return std::exp(-r * r / (2 * sigma * sigma));
  }
  // Beyond this distance from the center, displacements are below 1e-9 px.
  double reach() const { return 7.0 * sigma + amp + 1.0; }
};

Field make_field(const DeformSpec& d, int width, int height) {
  Field f;
  f.mode = d.mode;
  f.amp = d.amplitude;
  f.cx = d.center_u * width;
  f.cy = d.center_v * height;
  f.sigma = d.radius * std::min(width, height);
  if (d.mode == DeformMode::twist && f.sigma > 0)
    // Tangential displacement r*phi(r) peaks at one sigma; scale the twist
    // angle so that peak equals the requested amplitude.
    f.phi0 = f.amp * std::exp(0.5) / f.sigma;
  return f;
}

PointF forward(const Field& f, PointF p) {
  if (f.mode == DeformMode::none || f.amp == 0.0) return p;
  double dx = p.x - f.cx, dy = p.y - f.cy;
  double r = std::hypot(dx, dy);
  switch (f.mode) {
    case DeformMode::press: {
      if (r == 0.0) return p;
      double u = f.amp * f.envelope(r) / r;
      return {p.x + u * dx, p.y + u * dy};
    }
    case DeformMode::shear:
      return {p.x + f.amp * f.envelope(r), p.y};
    case DeformMode::twist: {
      double phi = f.phi0 * f.envelope(r);
      double c = std::cos(phi), s = std::sin(phi);
      return {f.cx + c * dx - s * dy, f.cy + s * dx + c * dy};
    }
    case DeformMode::none:
      break;
  }
  return p;
}

PointF inverse(const Field& f, PointF p) {
  if (f.mode == DeformMode::none || f.amp == 0.0) return p;
  double dx = p.x - f.cx, dy = p.y - f.cy;
  double rp = std::hypot(dx, dy);
  if (rp > f.reach()) return p;

  switch (f.mode) {
    case DeformMode::press: {
      if (rp == 0.0) return p;
      // Solve r + amp*envelope(r) = rp; monotone in r, so Newton clamped to
      // the bracket [rp - amp, rp] converges.
      double lo = std::max(0.0, rp - f.amp), hi = rp;
      double r = std::max(lo, rp - f.amp * f.envelope(rp));
      for (int it = 0; it < 60; ++it) {
        double g = f.envelope(r);
        double fr = r + f.amp * g - rp;
        if (std::abs(fr) < 1e-12) break;
        double dfr = 1.0 - f.amp * r * g / (f.sigma * f.sigma);
        double step = fr / dfr;
        r = std::clamp(r - step, lo, hi);
      }
      double scale = r / rp;
      return {f.cx + dx * scale, f.cy + dy * scale};
    }
    case DeformMode::shear: {
      // Fixed-point q <- p - u(q); the displacement gradient is below 1 by
      // the invertibility bound, so this contracts.
      double qx = p.x, qy = p.y;
      for (int it = 0; it < 200; ++it) {
        double r = std::hypot(qx - f.cx, qy - f.cy);
        double nx = p.x - f.amp * f.envelope(r);
        if (std::abs(nx - qx) < 1e-12) {
          qx = nx;
          break;
        }
        qx = nx;
      }
      return {qx, qy};
    }
    case DeformMode::twist: {
      // Rotation preserves radius, so the back-rotation angle is exact.
      double phi = f.phi0 * f.envelope(rp);
      double c = std::cos(-phi), s = std::sin(-phi);
      return {f.cx + c * dx - s * dy, f.cy + s * dx + c * dy};
    }
    case DeformMode::none:
      break;
  }
  return p;
}

std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9e3779b97f4a7c15ull;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

// One standard-normal draw per pixel index, independent of evaluation order.
double pixel_noise(std::uint64_t seed, std::uint64_t idx) {
  std::uint64_t s = seed + 0x9e3779b97f4a7c15ull * (idx + 1);
  std::uint64_t a = splitmix64(s);
  std::uint64_t b = splitmix64(s);
  double u1 = ((a >> 11) + 1) * 0x1.0p-53;  // (0, 1]
  double u2 = (b >> 11) * 0x1.0p-53;        // [0, 1)
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * kPi * u2);
}

}  // namespace

const char* deform_mode_name(DeformMode m) {
  switch (m) {
    case DeformMode::none:
      return "none";
    case DeformMode::press:
      return "press";
    case DeformMode::shear:
      return "shear";
    case DeformMode::twist:
      return "twist";
  }
  return "unknown";
}

bool SynthConfig::valid() const {
  if (grid < 2 || cell_px < 8) return false;
  if (deform.amplitude < 0 || corrosion_radius < 0 || noise_sigma < 0)
    return false;
  if (deform.mode != DeformMode::none && deform.radius <= 0) return false;
  int side = grid * cell_px + 2 * kMargin;
  if (width != 0 && width < side) return false;
  if (height != 0 && height < side) return false;
  return true;
}

PointF warp_point(const DeformSpec& deform, PointF p, int width, int height) {
  return forward(make_field(deform, width, height), p);
}

PointF unwarp_point(const DeformSpec& deform, PointF p, int width,
                    int height) {
  return inverse(make_field(deform, width, height), p);
}

SynthResult generate(const SynthConfig& cfg) {
  if (!cfg.valid()) throw std::invalid_argument("synth: invalid config");

  const int side = cfg.grid * cfg.cell_px;
  const int w = cfg.width != 0 ? cfg.width : side + 2 * kMargin;
  const int h = cfg.height != 0 ? cfg.height : side + 2 * kMargin;
  const int x0 = (w - side) / 2;
  const int y0 = (h - side) / 2;

  Field field = make_field(cfg.deform, w, h);
  if ((field.mode == DeformMode::press || field.mode == DeformMode::shear) &&
      field.amp > kInvertibilityFactor * field.sigma * std::exp(0.5))
    throw std::invalid_argument(
        "synth: deform amplitude too large to invert (raise radius or lower "
        "amplitude)");

  // Ground truth: the warped interior lattice.
  GroundTruth truth;
  truth.corners.reserve(static_cast<std::size_t>(cfg.grid - 1) *
                        (cfg.grid - 1));
  for (int j = 1; j < cfg.grid; ++j)
    for (int i = 1; i < cfg.grid; ++i) {
      PointF p = forward(field, {double(x0 + i * cfg.cell_px),
                                 double(y0 + j * cfg.cell_px)});
      if (p.x < 7 || p.y < 7 || p.x > w - 8 || p.y > h - 8)
        throw std::invalid_argument(
            "synth: deformation pushes a corner into the border margin");
      truth.corners.push_back({p.x, p.y, i, j});
    }

  // Checkerboard color at an undeformed source point; the border is white.
  auto pattern = [&](PointF q) -> double {
    double u = q.x - x0, v = q.y - y0;
    if (u < 0 || v < 0 || u >= side || v >= side) return 255.0;
    int ci = static_cast<int>(u / cfg.cell_px);
    int cj = static_cast<int>(v / cfg.cell_px);
    return ((ci + cj) & 1) == 0 ? 0.0 : 255.0;
  };

  // Supersampled render through the inverse warp. Single-threaded on
  // purpose: the output must be reproducible byte for byte.
  std::vector<double> img(static_cast<std::size_t>(w) * h);
  const double step = 1.0 / kSupersample;
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      double acc = 0.0;
      for (int sy = 0; sy < kSupersample; ++sy)
        for (int sx = 0; sx < kSupersample; ++sx) {
          PointF s{x - 0.5 + (sx + 0.5) * step, y - 0.5 + (sy + 0.5) * step};
          acc += pattern(inverse(field, s));
        }
      img[static_cast<std::size_t>(y) * w + x] = acc / (kSupersample * kSupersample);
    }

  // Corrosion: Gaussian blur shown only inside a disk around each corner.
  if (cfg.corrosion_radius > 0) {
    double sb = cfg.corrosion_radius / 2.0;
    int kr = std::max(1, static_cast<int>(std::ceil(2.5 * sb)));
    std::vector<double> kernel(2 * kr + 1);
    double norm = 0.0;
    for (int k = -kr; k <= kr; ++k)
      norm += kernel[k + kr] = std::exp(-k * k / (2 * sb * sb));
    for (double& v : kernel) v /= norm;

    std::vector<double> tmp(img.size()), blurred(img.size());
    for (int y = 0; y < h; ++y)
      for (int x = 0; x < w; ++x) {
        double acc = 0.0;
        for (int k = -kr; k <= kr; ++k)
          acc += kernel[k + kr] *
                 img[static_cast<std::size_t>(y) * w + std::clamp(x + k, 0, w - 1)];
        tmp[static_cast<std::size_t>(y) * w + x] = acc;
      }
    for (int y = 0; y < h; ++y)
      for (int x = 0; x < w; ++x) {
        double acc = 0.0;
        for (int k = -kr; k <= kr; ++k)
          acc += kernel[k + kr] *
                 tmp[static_cast<std::size_t>(std::clamp(y + k, 0, h - 1)) * w + x];
        blurred[static_cast<std::size_t>(y) * w + x] = acc;
      }

    double r2 = cfg.corrosion_radius * cfg.corrosion_radius;
    for (const TruthCorner& c : truth.corners) {
      int xa = std::max(0, static_cast<int>(std::floor(c.x - cfg.corrosion_radius)));
      int xb = std::min(w - 1, static_cast<int>(std::ceil(c.x + cfg.corrosion_radius)));
      int ya = std::max(0, static_cast<int>(std::floor(c.y - cfg.corrosion_radius)));
      int yb = std::min(h - 1, static_cast<int>(std::ceil(c.y + cfg.corrosion_radius)));
      for (int y = ya; y <= yb; ++y)
        for (int x = xa; x <= xb; ++x) {
          double ddx = x - c.x, ddy = y - c.y;
          if (ddx * ddx + ddy * ddy <= r2)
            img[static_cast<std::size_t>(y) * w + x] =
                blurred[static_cast<std::size_t>(y) * w + x];
        }
    }
  }

  // Illumination ramp along the +x+y diagonal, zero at the image center.
  if (cfg.illumination_ramp != 0.0) {
    double mx = 0.5 * (w - 1), my = 0.5 * (h - 1);
    for (int y = 0; y < h; ++y)
      for (int x = 0; x < w; ++x)
        img[static_cast<std::size_t>(y) * w + x] +=
            cfg.illumination_ramp * 0.5 * ((x - mx) + (y - my));
  }

  // Seeded pixel noise, then quantization.
  GrayImage out(w, h);
  for (std::size_t idx = 0; idx < img.size(); ++idx) {
    double v = img[idx];
    if (cfg.noise_sigma > 0) v += cfg.noise_sigma * pixel_noise(cfg.seed, idx);
    out.data[idx] = static_cast<std::uint8_t>(
        std::lround(std::clamp(v, 0.0, 255.0)));
  }
  return {std::move(out), std::move(truth)};
}

}  // namespace cmpdet
