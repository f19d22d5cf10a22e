// Deterministic random streams for Monte Carlo runs.
//
// The generator is xoshiro256++ seeded through splitmix64, with Box-Muller
// Gaussians built on top. All draws are pure integer/double arithmetic, so a
// given (seed, tag, indices) stream produces the same sequence on every run
// and on every worker layout.

#pragma once

#include <cstdint>

#include "afdmsim/types.hpp"

namespace afdmsim {

uint64_t splitmix64(uint64_t& state);

class Rng {
 public:
  explicit Rng(uint64_t seed);

  uint64_t next_u64();

  // Uniform double in [0, 1).
  double uniform();
  // Uniform double in [lo, hi).
  double uniform(double lo, double hi);
  // Unbiased uniform integer in [0, n).
  uint64_t below(uint64_t n);
  int bit();

  // Standard normal (Box-Muller; pairs are cached).
  double gaussian();
  // Circularly symmetric complex Gaussian with E|z|^2 = var.
  cplx cgaussian(double var);

 private:
  uint64_t s_[4];
  double cached_ = 0.0;
  bool have_cached_ = false;
};

// Derives an independent stream from a master seed and up to three
// decorrelating indices (purpose tag, trial index, point index).
Rng derive_rng(uint64_t master_seed, uint64_t tag, uint64_t a = 0, uint64_t b = 0);

// Stream purpose tags. Values are part of the reproducibility contract:
// changing them changes every seeded result.
namespace stream_tag {
inline constexpr uint64_t ber_bits = 0x01;
inline constexpr uint64_t ber_channel = 0x02;
inline constexpr uint64_t ber_noise = 0x03;
inline constexpr uint64_t af_payload = 0x04;
inline constexpr uint64_t range_payload = 0x05;
inline constexpr uint64_t range_noise = 0x06;
inline constexpr uint64_t generic = 0x07;
}  // namespace stream_tag

}  // namespace afdmsim
