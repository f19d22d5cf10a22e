// Common scalar and container aliases used across the library.

#pragma once

#include <complex>
#include <cstdint>
#include <vector>

namespace afdmsim {

using cplx = std::complex<double>;
using cvec = std::vector<cplx>;
using Bits = std::vector<uint8_t>;

inline constexpr double kPi = 3.141592653589793238462643383279502884;
inline constexpr double kTwoPi = 2.0 * kPi;

// Speed of light in m/s, used by the range estimator.
inline constexpr double kSpeedOfLight = 299792458.0;

}  // namespace afdmsim
