#include "afdmsim/afdm.hpp"

#include <cmath>
#include <stdexcept>

#include "afdmsim/fft.hpp"

namespace afdmsim::afdm {

namespace {

void check_params(const AfdmParams& params) {
  if (params.L < 2) throw std::invalid_argument("AfdmParams: L must be at least 2");
}

// e^{-j2πc n²} with the phase reduced mod 1 before the trig call; c n² grows
// past 2^20 at L=256 and would otherwise cost precision.
cplx chirp_phase(double c, int n) {
  const double cycles = c * static_cast<double>(n) * static_cast<double>(n);
  return std::polar(1.0, -kTwoPi * (cycles - std::floor(cycles)));
}

// In-place multiply by Lambda_c (sign=-1) or Lambda_c^H (sign=+1).
void apply_chirp(cvec& v, double c, int sign) {
  if (c == 0.0) return;
  for (size_t n = 0; n < v.size(); ++n) {
    cplx p = chirp_phase(c, static_cast<int>(n));
    if (sign > 0) p = std::conj(p);
    v[n] *= p;
  }
}

}  // namespace

double select_c1(double nu_max, int xi, int L) {
  if (nu_max < 0.0) throw std::domain_error("select_c1: nu_max must be nonnegative");
  if (xi < 0 || xi >= 5) throw std::domain_error("select_c1: xi must satisfy 0 <= xi < 5");
  if (L < 2) throw std::domain_error("select_c1: L must be at least 2");
  return (2.0 * (nu_max + static_cast<double>(xi)) + 1.0) / (2.0 * static_cast<double>(L));
}

CMat daft_matrix(const AfdmParams& params) {
  check_params(params);
  const int L = params.L;
  const double scale = 1.0 / std::sqrt(static_cast<double>(L));
  CMat a(L, L);
  for (int k = 0; k < L; ++k) {
    const cplx row_chirp = chirp_phase(params.c1, k);
    for (int l = 0; l < L; ++l) {
      const double frac =
          static_cast<double>((static_cast<long long>(k) * l) % L) / static_cast<double>(L);
      const cplx f = std::polar(scale, -kTwoPi * frac);
      a(k, l) = row_chirp * f * chirp_phase(params.c2, l);
    }
  }
  return a;
}

cvec afdm_modulate(const cvec& x, const AfdmParams& params) {
  check_params(params);
  if (x.size() != static_cast<size_t>(params.L))
    throw std::invalid_argument("afdm_modulate: input length != L");
  cvec y = x;
  apply_chirp(y, params.c1, +1);
  fft_unitary(y, /*inverse=*/true);
  apply_chirp(y, params.c2, +1);
  return y;
}

cvec afdm_demodulate(const cvec& r, const AfdmParams& params) {
  check_params(params);
  if (r.size() != static_cast<size_t>(params.L))
    throw std::invalid_argument("afdm_demodulate: input length != L");
  cvec x = r;
  apply_chirp(x, params.c2, -1);
  fft_unitary(x, /*inverse=*/false);
  apply_chirp(x, params.c1, -1);
  return x;
}

}  // namespace afdmsim::afdm
