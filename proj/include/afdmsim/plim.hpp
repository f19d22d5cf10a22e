// Power-level index modulation: bit-to-symbol mapping, balanced subcarrier
// grouping, combinadic pattern ranking, and the data-rate formulas.
//
// Each subcarrier carries an M-PSK symbol scaled by sqrt(1+beta) or
// sqrt(1-beta); the choice of power level carries the index-modulation bits.
// Ungrouped frames spend one IM bit per subcarrier. Grouped frames split the
// L subcarriers into blocks of U and restrict every block to exactly U/2
// high-power members, so a block carries floor(log2 C(U,U/2)) payload bits
// encoded as the lexicographic rank of its on/off pattern.

#pragma once

#include <cstdint>
#include <vector>

#include "afdmsim/types.hpp"

namespace afdmsim::plim {

using u128 = unsigned __int128;

struct PlimConfig {
  int L = 128;            // subcarrier count
  int M = 4;              // PSK order (power of two)
  double beta = 0.5;      // power offset, 0 < beta < 1
  int group_size = 0;     // block size U; 0 means ungrouped

  bool grouped() const { return group_size > 0; }
  int num_blocks() const { return grouped() ? L / group_size : 0; }
  int bits_per_symbol() const;

  // IM payload bits carried by one block / one frame.
  int im_bits_per_block() const;
  int im_bits_per_frame() const;
  int psk_bits_per_frame() const;

  // Throws std::invalid_argument when a constraint is violated.
  void validate() const;
};

// Exact binomial coefficients up to n = 128 (C(128,64) needs 125 bits).
u128 binom(int n, int k);
int floor_log2_u128(u128 v);

// --- PSK mapping -----------------------------------------------------------

// Gray-coded M-PSK on exp(j 2π m / M). Bit groups are MSB-first.
cvec psk_modulate(const Bits& bits, int M);
Bits psk_demodulate(const cvec& symbols, int M);

// Shared helpers for the detectors.
cplx psk_point(int index, int M);
// Nearest constellation index by Euclidean distance; ties resolve to the
// lower index.
int psk_nearest_index(cplx v, int M);
void append_psk_bits(Bits& out, int index, int M);

// --- Balanced pattern ranking ----------------------------------------------

// Patterns of length U with exactly U/2 ones, ordered lexicographically with
// '1' sorting before '0' (rank 0 = 11..100..0). Also exposed for general
// (n, k) combinations, which the on-off IM baseline uses.
std::vector<uint8_t> combination_unrank(u128 rank, int n, int k);
u128 combination_rank(const std::vector<uint8_t>& pattern, int k);

std::vector<uint8_t> balanced_pattern_unrank(u128 rank, int U);
u128 balanced_pattern_rank(const std::vector<uint8_t>& pattern);

u128 bits_to_u128(const uint8_t* bits, int count);  // MSB-first
void u128_to_bits(u128 value, int count, uint8_t* out);

// --- Frame encoding ---------------------------------------------------------

struct PlimCodeword {
  std::vector<uint8_t> z;     // per-subcarrier power indicator
  std::vector<double> alpha;  // 1+beta where z=1, 1-beta where z=0
};

struct EncodeResult {
  PlimCodeword codeword;
  cvec x;  // composite chirp-domain vector, x_l = sqrt(alpha_l) s_l
};

EncodeResult plim_encode(const Bits& im_bits, const Bits& psk_bits, const PlimConfig& cfg);

// Recovers the IM payload bits from a power-indicator vector. In grouped mode
// each block must be balanced; block ranks that exceed the payload capacity
// (possible only when C(U,U/2) is not a power of two) clamp to the largest
// encodable value.
Bits im_bits_from_indicators(const std::vector<uint8_t>& z, const PlimConfig& cfg);

// --- Data rates --------------------------------------------------------------

struct RateReport {
  double r_gamma = 0.0;            // PLIM rate, grouped form when grouping is on
  double r_gamma_ungrouped = 0.0;  // L log2 M + L
  double r_gamma_stirling = 0.0;   // Stirling approximation of the grouped rate
  double r_beta = 0.0;             // on-off IM rate with Z active subcarriers
  double r_alpha = 0.0;            // plain M-PSK rate
  long long im_payload_bits = 0;   // integer payload actually carried per frame
  bool ordering_holds = false;     // r_beta < r_alpha < r_gamma for this config
};

RateReport data_rates(const PlimConfig& cfg, int Z);

}  // namespace afdmsim::plim
