#include "afdmsim/rng.hpp"

#include <cmath>
#include <stdexcept>

namespace afdmsim {

uint64_t splitmix64(uint64_t& state) {
  uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

namespace {
inline uint64_t rotl(uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
}  // namespace

Rng::Rng(uint64_t seed) {
  uint64_t sm = seed;
  for (auto& w : s_) w = splitmix64(sm);
}

uint64_t Rng::next_u64() {
  // xoshiro256++
  const uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
  const uint64_t t = s_[1] << 17;
  s_[2] ^= s_[0];
  s_[3] ^= s_[1];
  s_[1] ^= s_[2];
  s_[0] ^= s_[3];
  s_[2] ^= t;
  s_[3] = rotl(s_[3], 45);
  return result;
}

double Rng::uniform() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double Rng::uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

uint64_t Rng::below(uint64_t n) {
  if (n == 0) throw std::domain_error("Rng::below: n must be positive");
  const uint64_t limit = UINT64_MAX - UINT64_MAX % n;
  uint64_t v;
  do {
    v = next_u64();
  } while (v >= limit);
  return v % n;
}

int Rng::bit() { return static_cast<int>(next_u64() >> 63); }

double Rng::gaussian() {
  if (have_cached_) {
    have_cached_ = false;
    return cached_;
  }
  // u1 in (0,1] keeps the log finite.
  const double u1 = 1.0 - uniform();
  const double u2 = uniform();
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = kTwoPi * u2;
  cached_ = radius * std::sin(angle);
  have_cached_ = true;
  return radius * std::cos(angle);
}

cplx Rng::cgaussian(double var) {
  const double scale = std::sqrt(var * 0.5);
  const double re = gaussian();
  const double im = gaussian();
  return {scale * re, scale * im};
}

Rng derive_rng(uint64_t master_seed, uint64_t tag, uint64_t a, uint64_t b) {
  uint64_t sm = master_seed;
  uint64_t h = splitmix64(sm);
  sm ^= tag * 0x9e3779b97f4a7c15ULL;
  h ^= splitmix64(sm);
  sm ^= (a + 1) * 0xbf58476d1ce4e5b9ULL;
  h ^= splitmix64(sm);
  sm ^= (b + 1) * 0x94d049bb133111ebULL;
  h ^= splitmix64(sm);
  return Rng(h);
}

}  // namespace afdmsim
