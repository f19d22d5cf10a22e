#include "afdmsim/plim.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <limits>
#include <string>

namespace afdmsim::plim {

namespace {

constexpr int kMaxBinomN = 128;

const u128* binom_table() {
  // Pascal triangle, row-major over (n, k), computed once.
  static const auto table = [] {
    static u128 t[(kMaxBinomN + 1) * (kMaxBinomN + 1)] = {};
    for (int n = 0; n <= kMaxBinomN; ++n) {
      t[n * (kMaxBinomN + 1) + 0] = 1;
      for (int k = 1; k <= n; ++k) {
        const u128 up = t[(n - 1) * (kMaxBinomN + 1) + k];
        const u128 upleft = t[(n - 1) * (kMaxBinomN + 1) + (k - 1)];
        t[n * (kMaxBinomN + 1) + k] = up + upleft;
      }
    }
    return &t[0];
  }();
  return table;
}

int int_log2_exact(int v) {
  int p = 0;
  while ((1 << p) < v) ++p;
  return p;
}

bool is_pow2(int v) { return v > 0 && (v & (v - 1)) == 0; }

double log2_binom_real(int n, int k) {
  // log2 C(n,k) as a sum of log ratios; works past the integer-table limit.
  if (k < 0 || k > n) return -std::numeric_limits<double>::infinity();
  k = std::min(k, n - k);
  long double acc = 0.0L;
  for (int i = 1; i <= k; ++i)
    acc += std::log2(static_cast<long double>(n - k + i) / static_cast<long double>(i));
  return static_cast<double>(acc);
}

}  // namespace

u128 binom(int n, int k) {
  if (n < 0 || n > kMaxBinomN) throw std::domain_error("binom: n out of range");
  if (k < 0 || k > n) return 0;
  return binom_table()[n * (kMaxBinomN + 1) + k];
}

int floor_log2_u128(u128 v) {
  if (v == 0) throw std::domain_error("floor_log2_u128: zero");
  int p = -1;
  while (v) {
    v >>= 1;
    ++p;
  }
  return p;
}

int PlimConfig::bits_per_symbol() const { return int_log2_exact(M); }

int PlimConfig::im_bits_per_block() const {
  if (!grouped()) return 0;
  return floor_log2_u128(binom(group_size, group_size / 2));
}

int PlimConfig::im_bits_per_frame() const {
  return grouped() ? num_blocks() * im_bits_per_block() : L;
}

int PlimConfig::psk_bits_per_frame() const { return L * bits_per_symbol(); }

void PlimConfig::validate() const {
  if (L <= 0) throw std::invalid_argument("PlimConfig: L must be positive");
  if (!is_pow2(M) || M < 2) throw std::invalid_argument("PlimConfig: M must be a power of two >= 2");
  if (!(beta > 0.0 && beta < 1.0)) throw std::invalid_argument("PlimConfig: beta must be in (0, 1)");
  if (grouped()) {
    if (group_size < 2 || group_size > L)
      throw std::invalid_argument("PlimConfig: group size U must satisfy 2 <= U <= L");
    if (group_size % 2 != 0) throw std::invalid_argument("PlimConfig: group size U must be even");
    if (L % group_size != 0) throw std::invalid_argument("PlimConfig: U must divide L");
    if (group_size > 128)
      throw std::invalid_argument("PlimConfig: grouped U above 128 exceeds the pattern-rank range");
  }
}

// --- PSK ---------------------------------------------------------------------

namespace {

inline uint32_t gray_encode(uint32_t v) { return v ^ (v >> 1); }

inline uint32_t gray_decode(uint32_t g) {
  uint32_t v = g;
  for (uint32_t shift = 1; shift < 32; shift <<= 1) v ^= v >> shift;
  return v;
}

void check_psk_order(int M) {
  if (!is_pow2(M) || M < 2) throw std::invalid_argument("PSK order must be a power of two >= 2");
}

}  // namespace

cplx psk_point(int index, int M) {
  return std::polar(1.0, kTwoPi * static_cast<double>(index) / static_cast<double>(M));
}

cvec psk_modulate(const Bits& bits, int M) {
  check_psk_order(M);
  const int bps = int_log2_exact(M);
  if (bits.size() % static_cast<size_t>(bps) != 0)
    throw std::invalid_argument("psk_modulate: bit count not divisible by log2(M)");
  cvec out(bits.size() / bps);
  for (size_t s = 0; s < out.size(); ++s) {
    uint32_t v = 0;
    for (int b = 0; b < bps; ++b) v = (v << 1) | bits[s * bps + b];
    out[s] = psk_point(static_cast<int>(gray_decode(v)), M);
  }
  return out;
}

int psk_nearest_index(cplx v, int M) {
  int best = 0;
  double best_d2 = std::norm(v - psk_point(0, M));
  for (int m = 1; m < M; ++m) {
    const double d2 = std::norm(v - psk_point(m, M));
    if (d2 < best_d2) {
      best_d2 = d2;
      best = m;
    }
  }
  return best;
}

void append_psk_bits(Bits& out, int index, int M) {
  const int bps = int_log2_exact(M);
  const uint32_t v = gray_encode(static_cast<uint32_t>(index));
  for (int b = bps - 1; b >= 0; --b) out.push_back(static_cast<uint8_t>((v >> b) & 1u));
}

Bits psk_demodulate(const cvec& symbols, int M) {
  check_psk_order(M);
  Bits out;
  out.reserve(symbols.size() * static_cast<size_t>(int_log2_exact(M)));
  for (const cplx& s : symbols) append_psk_bits(out, psk_nearest_index(s, M), M);
  return out;
}

// --- Combinadic ranking ------------------------------------------------------

std::vector<uint8_t> combination_unrank(u128 rank, int n, int k) {
  if (k < 0 || k > n) throw std::domain_error("combination_unrank: invalid k");
  if (rank >= binom(n, k)) throw std::domain_error("combination_unrank: rank out of range");
  std::vector<uint8_t> pattern(n, 0);
  int remaining = k;
  for (int p = 0; p < n && remaining > 0; ++p) {
    // Patterns with a one at p precede all patterns with a zero at p.
    const u128 with_one = binom(n - p - 1, remaining - 1);
    if (rank < with_one) {
      pattern[p] = 1;
      --remaining;
    } else {
      rank -= with_one;
    }
  }
  return pattern;
}

u128 combination_rank(const std::vector<uint8_t>& pattern, int k) {
  const int n = static_cast<int>(pattern.size());
  int seen = 0;
  for (const auto b : pattern) seen += (b != 0);
  if (seen != k) throw std::domain_error("combination_rank: pattern does not have k ones");
  u128 rank = 0;
  int remaining = k;
  for (int p = 0; p < n && remaining > 0; ++p) {
    if (pattern[p]) {
      --remaining;
    } else {
      rank += binom(n - p - 1, remaining - 1);
    }
  }
  return rank;
}

std::vector<uint8_t> balanced_pattern_unrank(u128 rank, int U) {
  if (U < 2 || U % 2 != 0) throw std::domain_error("balanced_pattern_unrank: U must be even and >= 2");
  return combination_unrank(rank, U, U / 2);
}

u128 balanced_pattern_rank(const std::vector<uint8_t>& pattern) {
  const int n = static_cast<int>(pattern.size());
  if (n < 2 || n % 2 != 0) throw std::domain_error("balanced_pattern_rank: length must be even");
  return combination_rank(pattern, n / 2);
}

u128 bits_to_u128(const uint8_t* bits, int count) {
  u128 v = 0;
  for (int i = 0; i < count; ++i) v = (v << 1) | (bits[i] & 1);
  return v;
}

void u128_to_bits(u128 value, int count, uint8_t* out) {
  for (int i = count - 1; i >= 0; --i) {
    out[i] = static_cast<uint8_t>(value & 1);
    value >>= 1;
  }
}

// --- Frame encoding ------------------------------------------------------------

EncodeResult plim_encode(const Bits& im_bits, const Bits& psk_bits, const PlimConfig& cfg) {
  cfg.validate();
  if (psk_bits.size() != static_cast<size_t>(cfg.psk_bits_per_frame()))
    throw std::invalid_argument("plim_encode: wrong PSK bit count");
  if (im_bits.size() != static_cast<size_t>(cfg.im_bits_per_frame()))
    throw std::invalid_argument("plim_encode: wrong IM bit count");

  EncodeResult res;
  res.codeword.z.resize(cfg.L);
  if (cfg.grouped()) {
    const int U = cfg.group_size;
    const int bpb = cfg.im_bits_per_block();
    for (int g = 0; g < cfg.num_blocks(); ++g) {
      const u128 rank = bits_to_u128(im_bits.data() + static_cast<size_t>(g) * bpb, bpb);
      const auto pattern = balanced_pattern_unrank(rank, U);
      std::copy(pattern.begin(), pattern.end(), res.codeword.z.begin() + static_cast<size_t>(g) * U);
    }
  } else {
    std::copy(im_bits.begin(), im_bits.end(), res.codeword.z.begin());
  }

  res.codeword.alpha.resize(cfg.L);
  for (int l = 0; l < cfg.L; ++l)
    res.codeword.alpha[l] = res.codeword.z[l] ? 1.0 + cfg.beta : 1.0 - cfg.beta;

  const cvec symbols = psk_modulate(psk_bits, cfg.M);
  res.x.resize(cfg.L);
  for (int l = 0; l < cfg.L; ++l) res.x[l] = std::sqrt(res.codeword.alpha[l]) * symbols[l];
  return res;
}

Bits im_bits_from_indicators(const std::vector<uint8_t>& z, const PlimConfig& cfg) {
  if (z.size() != static_cast<size_t>(cfg.L))
    throw std::invalid_argument("im_bits_from_indicators: wrong indicator length");
  if (!cfg.grouped()) return Bits(z.begin(), z.end());

  const int U = cfg.group_size;
  const int bpb = cfg.im_bits_per_block();
  const u128 max_rank = (static_cast<u128>(1) << bpb) - 1;
  Bits out(static_cast<size_t>(cfg.num_blocks()) * bpb);
  std::vector<uint8_t> block(U);
  for (int g = 0; g < cfg.num_blocks(); ++g) {
    std::copy(z.begin() + static_cast<size_t>(g) * U, z.begin() + static_cast<size_t>(g + 1) * U,
              block.begin());
    u128 rank = balanced_pattern_rank(block);
    if (rank > max_rank) rank = max_rank;  // detected pattern outside the payload range
    u128_to_bits(rank, bpb, out.data() + static_cast<size_t>(g) * bpb);
  }
  return out;
}

// --- Data rates -----------------------------------------------------------------

RateReport data_rates(const PlimConfig& cfg, int Z) {
  cfg.validate();
  if (Z < 0 || Z > cfg.L) throw std::invalid_argument("data_rates: Z must satisfy 0 <= Z <= L");

  const double L = cfg.L;
  const double log2M = cfg.bits_per_symbol();

  RateReport rep;
  rep.r_gamma_ungrouped = L * log2M + L;
  rep.r_alpha = L * log2M;
  rep.r_beta = static_cast<double>(Z) * log2M + log2_binom_real(cfg.L, Z);

  if (cfg.grouped()) {
    const int U = cfg.group_size;
    const double G = cfg.num_blocks();
    rep.r_gamma = L * log2M + G * log2_binom_real(U, U / 2);
    rep.r_gamma_stirling = L * log2M + L - (G / 2.0) * std::log2(kPi * U / 2.0);
    rep.im_payload_bits = static_cast<long long>(cfg.num_blocks()) * cfg.im_bits_per_block();
  } else {
    rep.r_gamma = rep.r_gamma_ungrouped;
    rep.r_gamma_stirling = rep.r_gamma_ungrouped;
    rep.im_payload_bits = cfg.L;
  }
  rep.ordering_holds = rep.r_beta < rep.r_alpha && rep.r_alpha < rep.r_gamma;
  return rep;
}

}  // namespace afdmsim::plim
