// Radar-side metrics: discrete ambiguity surfaces and their cuts, FMCW
// reference chirps, matched-filter range estimation, and NMAE scoring.

#pragma once

#include <vector>

#include "afdmsim/types.hpp"

namespace afdmsim::sensing {

// |psi(tau, nu)| on a symmetric delay/Doppler grid. Delays are non-cyclic
// (zero-padded) lags d in [-max_delay_bins, +max_delay_bins]. Doppler bin m
// in [-doppler_bins/2, +doppler_bins/2] maps to the normalized frequency
// zoom * m / doppler_bins cycles per sample.
struct AmbiguitySurface {
  int max_delay_bins = 0;
  int doppler_half_bins = 0;
  int doppler_fft_len = 1;
  double zoom = 1.0;
  double peak_value = 0.0;           // |psi(0,0)| = signal energy
  std::vector<double> magnitudes;    // row-major [delay][doppler]
  double delay_bin_seconds = 1.0;    // 1/fs when a sample rate is supplied
  double doppler_bin_hz = 0.0;       // fs*zoom/doppler_fft_len, or cycles/sample

  int delay_rows() const { return 2 * max_delay_bins + 1; }
  int doppler_cols() const { return 2 * doppler_half_bins + 1; }
  // Magnitude at delay bin d and Doppler bin m (both signed).
  double at(int d, int m) const {
    return magnitudes[static_cast<size_t>(d + max_delay_bins) * doppler_cols() +
                      static_cast<size_t>(m + doppler_half_bins)];
  }
};

// psi[d, m] = sum_n x[n] conj(x[n-d]) e^{j2π f_m n} over the valid overlap.
// doppler_bins is the Doppler DFT length; the surface stores the symmetric
// bins -doppler_bins/2 .. +doppler_bins/2.
AmbiguitySurface ambiguity_function(const cvec& x, int max_delay_bins, int doppler_bins,
                                    double zoom = 1.0, double sample_rate_hz = 0.0);

// Element-wise mean of same-shape surfaces (used for payload averaging).
AmbiguitySurface average_surfaces(const std::vector<AmbiguitySurface>& surfaces);

// One-dimensional cut normalized to a 0 dB peak, with sidelobe statistics.
// The mainlobe is the contiguous region around the origin above -3 dB;
// everything outside it counts as sidelobes.
struct CutProfile {
  std::vector<int> bins;
  std::vector<double> magnitude_db;
  int mainlobe_lo = 0, mainlobe_hi = 0;  // signed bin bounds of the mainlobe
  double peak_sidelobe_db = 0.0;
  double mean_sidelobe_linear = 0.0;
  double mean_sidelobe_db = 0.0;
};

CutProfile zero_doppler_cut(const AmbiguitySurface& surface);
CutProfile zero_delay_cut(const AmbiguitySurface& surface);

// Centered linear chirp e^{jπ(B/T)t²}, t in [-T/2, T/2), at unit modulus.
cvec fmcw_waveform(double bandwidth_hz, double duration_s, double sample_rate_hz);

// Cross-correlates rx against tx, finds the strongest lag, refines it with a
// three-point parabolic fit on the magnitude, and converts the round-trip
// delay to meters.
double estimate_range(const cvec& tx, const cvec& rx, double sample_rate_hz);

// (1 / (N T)) * sum |est_i - T|.
double nmae(const std::vector<double>& estimates_m, double true_range_m);

}  // namespace afdmsim::sensing
