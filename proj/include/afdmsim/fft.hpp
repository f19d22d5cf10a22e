// Unitary DFT used by the DAFT modem.
//
// Power-of-two lengths go through an iterative radix-2 transform; any other
// length falls back to a direct O(N^2) evaluation, which is exact and fast
// enough at desk scale. Both directions carry the 1/sqrt(N) factor so the
// transform is unitary and the round trip is the identity.

#pragma once

#include "afdmsim/types.hpp"

namespace afdmsim {

// In-place unitary DFT. inverse=false computes X_k = sum_n x_n e^{-j2πnk/N}/sqrt(N),
// inverse=true flips the exponent sign (same scaling).
void fft_unitary(cvec& x, bool inverse);

cvec dft_unitary(const cvec& x);
cvec idft_unitary(const cvec& x);

}  // namespace afdmsim
