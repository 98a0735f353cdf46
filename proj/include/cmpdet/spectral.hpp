#pragma once

#include <array>

#include "cmpdet/rings.hpp"

namespace cmpdet {

// Continuous model of a dual-sector (checkerboard-like) corner as seen along
// one sampling circle: two black angular windows of half-widths tau1 and tau2
// whose centers sit alpha radians apart.
struct CornerSpectrumParams {
  double tau1 = 0.0;   // half-width of first black sector, radians
  double tau2 = 0.0;   // half-width of second black sector, radians
  double alpha = 0.0;  // center-to-center angle between the sectors, radians

  // 0 < tau1,tau2 < pi/2 and 0 < alpha < pi.
  bool valid() const;
};

// Two concentric sampling circles over the same corner; d is the angular
// offset of the inner layer's first window midpoint relative to the outer's.
struct DualRingParams {
  CornerSpectrumParams outer;
  CornerSpectrumParams inner;
  double d = 0.0;  // inter-layer angular offset, radians, in (-pi, pi]

  bool valid() const;
};

// Spectral amplitudes of one ring signal at 1, 2 and 3 cycles per revolution
// plus the two amplitude differences the corner criterion thresholds on.
struct IntraResponse {
  double amp1 = 0.0;
  double amp2 = 0.0;
  double amp3 = 0.0;
  double delta12 = 0.0;  // amp2 - amp1
  double delta23 = 0.0;  // amp2 - amp3

  bool corner_like() const { return delta12 > 0.0 && delta23 > 0.0; }
  // Sensitivity-boosted variants: the deltas scaled by the peak amplitude.
  double product12() const { return amp2 * delta12; }
  double product23() const { return amp2 * delta23; }
};

// Peak of the circular cross-correlation between two ring signals and the
// phase (in degrees) of the peak interval's midpoint.
struct InterResponse {
  double delta_a = 0.0;    // normalized peak correlation, <= 1
  double delta_phi = 0.0;  // |peak midpoint phase| in degrees, in [0, 180]

  bool consistent(double a_min = 0.75, double phi_max_deg = 20.0) const {
    return delta_a > a_min && delta_phi < phi_max_deg;
  }
};

// Amplitude ratio pair |F(1)|/|F(2)| and |F(3)|/|F(2)| with a flag for
// parameter combinations where |F(2)| vanishes; callers treat singular
// results as "ratio exceeds 1".
struct RatioResult {
  double r12 = 0.0;
  double r32 = 0.0;
  bool singular = false;
};

// |F(j*omega)| of the continuous two-window corner signal:
//   omega^-1 * sqrt(sin^2(w*t1) + sin^2(w*t2) + 2 sin(w*t1) sin(w*t2) cos(w*a))
// for integer frequencies omega >= 1 (cycles per revolution).
double continuous_amplitude(const CornerSpectrumParams& p, int omega);

// Closed-form ratios for equal sector widths (tau1 = tau2 = tau) as the
// center angle alpha deviates from the ideal pi. Singular when cos(alpha)=0
// or sin(2*tau)=0.
RatioResult amplitude_ratios_azimuth(double tau, double alpha);

// Closed-form ratios for opposite sectors (alpha = pi) with unequal widths,
// parameterized by the width sum T = tau1 + tau2 and difference
// delta = tau1 - tau2 >= 0. Singular when sin(T)*cos(delta)=0.
RatioResult amplitude_ratios_length(double T, double delta);

// |F(k)| of a 16-point binary ring signal: |sum_i g(i) * W16^(i*k)| with
// W16 = exp(-j*pi/8), computed by direct summation in double precision.
double dft_amplitude(RingSignal g, int k);

// Amplitudes at 1..3 cycles/rev and their differences for one ring signal.
IntraResponse intra_response(RingSignal g);

// Normalized circular cross-correlation of two ring signals after mapping
// bits to +-1: R(k) = (1/16) * sum_i s1(i) * s2((i+k) mod 16), so identical
// signals give R(0) = 1 and complementary ones give -1.
std::array<double, 16> circular_xcorr(RingSignal g1, RingSignal g2);

// Peak correlation and peak-midpoint phase between two ring signals. Ties at
// the maximum are grouped into maximal circular runs; the reported phase is
// the run midpoint closest to zero shift, in degrees (one sample = 22.5).
InterResponse inter_response(RingSignal g1, RingSignal g2);

}  // namespace cmpdet
