#include "afdmsim/fft.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

namespace afdmsim {

namespace {

bool is_pow2(size_t n) { return n != 0 && (n & (n - 1)) == 0; }

void fft_radix2(cvec& x, bool inverse) {
  const size_t n = x.size();

  // Bit-reversal permutation.
  for (size_t i = 1, j = 0; i < n; ++i) {
    size_t bit = n >> 1;
    while (j & bit) {
      j ^= bit;
      bit >>= 1;
    }
    j ^= bit;
    if (i < j) std::swap(x[i], x[j]);
  }

  // Twiddle table for the full size; stages index it with a stride.
  const double sign = inverse ? 1.0 : -1.0;
  cvec tw(n / 2);
  for (size_t k = 0; k < n / 2; ++k) {
    tw[k] = std::polar(1.0, sign * kTwoPi * static_cast<double>(k) / static_cast<double>(n));
  }

  for (size_t len = 2; len <= n; len <<= 1) {
    const size_t stride = n / len;
    for (size_t i = 0; i < n; i += len) {
      for (size_t j = 0; j < len / 2; ++j) {
        const cplx w = tw[j * stride];
        const cplx u = x[i + j];
        const cplx v = x[i + j + len / 2] * w;
        x[i + j] = u + v;
        x[i + j + len / 2] = u - v;
      }
    }
  }
}

void dft_direct(cvec& x, bool inverse) {
  const size_t n = x.size();
  const double sign = inverse ? 1.0 : -1.0;
  cvec out(n, cplx(0.0, 0.0));
  for (size_t k = 0; k < n; ++k) {
    cplx acc(0.0, 0.0);
    for (size_t l = 0; l < n; ++l) {
      // Reduce k*l mod n before the trig call to keep the phase argument small.
      const double frac = static_cast<double>((k * l) % n) / static_cast<double>(n);
      acc += x[l] * std::polar(1.0, sign * kTwoPi * frac);
    }
    out[k] = acc;
  }
  x = std::move(out);
}

}  // namespace

void fft_unitary(cvec& x, bool inverse) {
  const size_t n = x.size();
  if (n == 0) throw std::invalid_argument("fft_unitary: empty input");
  if (n == 1) return;

  if (is_pow2(n)) {
    fft_radix2(x, inverse);
  } else {
    dft_direct(x, inverse);
  }

  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  for (auto& v : x) v *= scale;
}

cvec dft_unitary(const cvec& x) {
  cvec y = x;
  fft_unitary(y, false);
  return y;
}

cvec idft_unitary(const cvec& x) {
  cvec y = x;
  fft_unitary(y, true);
  return y;
}

}  // namespace afdmsim
