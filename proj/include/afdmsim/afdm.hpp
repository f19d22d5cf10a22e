// Discrete affine Fourier transform modem.
//
// The DAFT matrix is A = Lambda_c1 F Lambda_c2 with Lambda_c = diag(e^{-j2πcn²})
// and F the unitary L-point DFT. Modulation sends chirp-domain data to time
// domain via y = A^H x; demodulation applies A. Both directions run as a
// diagonal-phase / FFT / diagonal-phase pipeline, never as a dense product.

#pragma once

#include "afdmsim/matrix.hpp"
#include "afdmsim/types.hpp"

namespace afdmsim::afdm {

struct AfdmParams {
  int L = 128;
  double c1 = 0.0;
  double c2 = 0.0;
};

// First chirp rate for a channel whose largest digital Doppler is nu_max,
// with xi extra guard bins: c1 = (2(nu_max + xi) + 1) / (2L).
double select_c1(double nu_max, int xi, int L);

// Dense A, kept as an explicit construction for small L and for tests.
CMat daft_matrix(const AfdmParams& params);

// y = A^H x (chirp domain -> time domain).
cvec afdm_modulate(const cvec& x, const AfdmParams& params);

// A r (time domain -> chirp domain).
cvec afdm_demodulate(const cvec& r, const AfdmParams& params);

}  // namespace afdmsim::afdm
