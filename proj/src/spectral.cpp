#include "cmpdet/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace cmpdet {

namespace {

constexpr double kPi = std::numbers::pi;
// |F(2)| below this counts as a vanishing denominator.
constexpr double kDenomEps = 1e-12;

// Signed midpoint phase (in samples, in (-8, 8]) of a circular run starting
// at sample l and spanning len samples.
double run_midpoint(int l, int len) {
  double mid = l + 0.5 * (len - 1);
  mid = std::fmod(mid, 16.0);
  if (mid > 8.0) mid -= 16.0;
  return mid;
}

}  // namespace

bool CornerSpectrumParams::valid() const {
  return tau1 > 0.0 && tau1 < kPi / 2 && tau2 > 0.0 && tau2 < kPi / 2 &&
         alpha > 0.0 && alpha < kPi;
}

bool DualRingParams::valid() const {
  return outer.valid() && inner.valid() && d > -kPi && d <= kPi;
}

double continuous_amplitude(const CornerSpectrumParams& p, int omega) {
  double w = omega;
  double s1 = std::sin(w * p.tau1);
  double s2 = std::sin(w * p.tau2);
  double sq = s1 * s1 + s2 * s2 + 2.0 * s1 * s2 * std::cos(w * p.alpha);
  // sq can dip a hair below zero from rounding when the windows cancel.
  return std::sqrt(std::max(sq, 0.0)) / w;
}

RatioResult amplitude_ratios_azimuth(double tau, double alpha) {
  // Equal widths: |F(w)| = 2/w * |sin(w*tau) * cos(w*alpha/2)|.
  double f1 = 2.0 * std::abs(std::sin(tau) * std::cos(alpha / 2));
  double f2 = std::abs(std::sin(2 * tau) * std::cos(alpha));
  double f3 = (2.0 / 3.0) * std::abs(std::sin(3 * tau) * std::cos(1.5 * alpha));
  if (f2 < kDenomEps) return {0.0, 0.0, true};
  return {f1 / f2, f3 / f2, false};
}

RatioResult amplitude_ratios_length(double T, double delta) {
  // Opposite sectors: odd harmonics carry the width difference, even ones
  // the width sum: |F(w)| = 2/w * |cos(w*T/2) * sin(w*delta/2)| for odd w,
  // 2/w * |sin(w*T/2) * cos(w*delta/2)| for even w.
  double f1 = 2.0 * std::abs(std::cos(T / 2) * std::sin(delta / 2));
  double f2 = std::abs(std::sin(T) * std::cos(delta));
  double f3 = (2.0 / 3.0) * std::abs(std::cos(1.5 * T) * std::sin(1.5 * delta));
  if (f2 < kDenomEps) return {0.0, 0.0, true};
  return {f1 / f2, f3 / f2, false};
}

double dft_amplitude(RingSignal g, int k) {
  double re = 0.0, im = 0.0;
  for (int i = 0; i < 16; ++i) {
    if (!g.bit(i)) continue;
    double ang = kPi * i * k / 8.0;  // W16^(i*k) = exp(-j*ang)
    re += std::cos(ang);
    im -= std::sin(ang);
  }
  return std::hypot(re, im);
}

IntraResponse intra_response(RingSignal g) {
  // Amplitude differences of 16-sample binary signals are either exactly
  // zero or at least ~6.6e-3, so snapping sub-1e-9 values to zero removes
  // rounding jitter on exact ties without touching any genuine gap.
  auto snap = [](double d) { return std::fabs(d) < 1e-9 ? 0.0 : d; };
  IntraResponse r;
  r.amp1 = dft_amplitude(g, 1);
  r.amp2 = dft_amplitude(g, 2);
  r.amp3 = dft_amplitude(g, 3);
  r.delta12 = snap(r.amp2 - r.amp1);
  r.delta23 = snap(r.amp2 - r.amp3);
  return r;
}

std::array<double, 16> circular_xcorr(RingSignal g1, RingSignal g2) {
  std::array<double, 16> r;
  for (int k = 0; k < 16; ++k) {
    int acc = 0;
    for (int i = 0; i < 16; ++i) {
      int s1 = g1.bit(i) ? 1 : -1;
      int s2 = g2.bit((i + k) & 15) ? 1 : -1;
      acc += s1 * s2;
    }
    r[k] = acc / 16.0;  // exact: integer over 2^4
  }
  return r;
}

InterResponse inter_response(RingSignal g1, RingSignal g2) {
  auto r = circular_xcorr(g1, g2);
  double peak = *std::max_element(r.begin(), r.end());

  // Correlation values are exact multiples of 1/16, so ties are exact.
  std::array<bool, 16> tied;
  int tie_count = 0;
  for (int k = 0; k < 16; ++k) {
    tied[k] = (r[k] == peak);
    tie_count += tied[k];
  }
  if (tie_count == 16)
    return {peak, 0.0};  // flat correlation: zero shift is as good as any

  double best = 180.0;
  for (int l = 0; l < 16; ++l) {
    if (!tied[l] || tied[(l + 15) & 15]) continue;  // not the start of a run
    int len = 1;
    while (tied[(l + len) & 15]) ++len;
    best = std::min(best, std::abs(run_midpoint(l, len)) * 22.5);
  }
  return {peak, best};
}

}  // namespace cmpdet
