#include "afdmsim/detect.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace afdmsim::detect {

using plim::PlimConfig;
using plim::u128;

LmmseEqualizer::LmmseEqualizer(const CMat& h_eff) : h_adj_(h_eff.adjoint()), gram_(gram(h_eff)) {}

cvec LmmseEqualizer::equalize(const cvec& r_daft, double noise_var) const {
  if (noise_var < 0.0) throw std::domain_error("lmmse_equalize: negative noise variance");
  if (r_daft.size() != h_adj_.cols())
    throw std::invalid_argument("lmmse_equalize: vector length mismatch");
  CMat g = gram_;
  g.add_scaled_identity(noise_var);
  return solve_hermitian_pd(std::move(g), matvec(h_adj_, r_daft));
}

cvec lmmse_equalize(const CMat& h_eff, const cvec& r_daft, double noise_var) {
  return LmmseEqualizer(h_eff).equalize(r_daft, noise_var);
}

namespace {

// Per-subcarrier squared distance to the best PSK point at the given power
// level, plus which point that is.
struct LevelChoice {
  double dist2;
  int psk_index;
};

LevelChoice best_psk_at_level(cplx x, double amplitude, int M) {
  LevelChoice best{std::norm(x - amplitude * plim::psk_point(0, M)), 0};
  for (int m = 1; m < M; ++m) {
    const double d2 = std::norm(x - amplitude * plim::psk_point(m, M));
    if (d2 < best.dist2) best = {d2, m};
  }
  return best;
}

DetectionResult assemble_result(std::vector<uint8_t> z, const std::vector<int>& psk_indices,
                                const PlimConfig& cfg) {
  DetectionResult res;
  res.z_hat = std::move(z);
  res.im_bits_hat = plim::im_bits_from_indicators(res.z_hat, cfg);
  res.psk_bits_hat.reserve(static_cast<size_t>(cfg.psk_bits_per_frame()));
  for (const int idx : psk_indices) plim::append_psk_bits(res.psk_bits_hat, idx, cfg.M);
  return res;
}

}  // namespace

DetectionResult ml_detect(const cvec& x_hat, const PlimConfig& cfg) {
  cfg.validate();
  if (x_hat.size() != static_cast<size_t>(cfg.L))
    throw std::invalid_argument("ml_detect: vector length != L");

  const double amp_hi = std::sqrt(1.0 + cfg.beta);
  const double amp_lo = std::sqrt(1.0 - cfg.beta);

  std::vector<LevelChoice> hi(cfg.L), lo(cfg.L);
  for (int l = 0; l < cfg.L; ++l) {
    hi[l] = best_psk_at_level(x_hat[l], amp_hi, cfg.M);
    lo[l] = best_psk_at_level(x_hat[l], amp_lo, cfg.M);
  }

  std::vector<uint8_t> z(cfg.L);
  std::vector<int> psk(cfg.L);

  if (!cfg.grouped()) {
    for (int l = 0; l < cfg.L; ++l) {
      const bool high = hi[l].dist2 < lo[l].dist2;
      z[l] = high ? 1 : 0;
      psk[l] = high ? hi[l].psk_index : lo[l].psk_index;
    }
    return assemble_result(std::move(z), psk, cfg);
  }

  const int U = cfg.group_size;
  if (U > 16)
    throw std::domain_error("ml_detect: grouped search supports U <= 16; use lc_detect");
  const u128 n_patterns = plim::binom(U, U / 2);

  for (int g = 0; g < cfg.num_blocks(); ++g) {
    const int base = g * U;
    double best_cost = 0.0;
    std::vector<uint8_t> best_pattern;
    // Patterns are visited in rank order; strict comparison keeps the lowest
    // rank on exact ties.
    for (u128 rank = 0; rank < n_patterns; ++rank) {
      const auto pattern = plim::balanced_pattern_unrank(rank, U);
      double cost = 0.0;
      for (int u = 0; u < U; ++u)
        cost += pattern[u] ? hi[base + u].dist2 : lo[base + u].dist2;
      if (best_pattern.empty() || cost < best_cost) {
        best_cost = cost;
        best_pattern = pattern;
      }
    }
    for (int u = 0; u < U; ++u) {
      z[base + u] = best_pattern[u];
      psk[base + u] = best_pattern[u] ? hi[base + u].psk_index : lo[base + u].psk_index;
    }
  }
  return assemble_result(std::move(z), psk, cfg);
}

DetectionResult lc_detect(const cvec& x_hat, const PlimConfig& cfg, LcMode mode) {
  cfg.validate();
  if (x_hat.size() != static_cast<size_t>(cfg.L))
    throw std::invalid_argument("lc_detect: vector length != L");

  std::vector<double> power(cfg.L);
  for (int l = 0; l < cfg.L; ++l) power[l] = std::norm(x_hat[l]);

  std::vector<uint8_t> z(cfg.L, 0);
  if (!cfg.grouped()) {
    const double threshold =
        std::accumulate(power.begin(), power.end(), 0.0) / static_cast<double>(cfg.L);
    for (int l = 0; l < cfg.L; ++l) z[l] = power[l] >= threshold ? 1 : 0;
  } else if (mode == LcMode::block_sort) {
    const int U = cfg.group_size;
    std::vector<int> order(U);
    for (int g = 0; g < cfg.num_blocks(); ++g) {
      const int base = g * U;
      std::iota(order.begin(), order.end(), 0);
      // Stable sort keeps the earliest subcarriers on degenerate equal powers.
      std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        return power[base + a] > power[base + b];
      });
      for (int u = 0; u < U / 2; ++u) z[base + order[u]] = 1;
    }
  } else {
    // Literal mean-power threshold, then the minimal per-block repair that
    // restores balance: demote the weakest highs or promote the strongest
    // lows until each block holds exactly U/2 ones.
    const int U = cfg.group_size;
    const double threshold =
        std::accumulate(power.begin(), power.end(), 0.0) / static_cast<double>(cfg.L);
    for (int l = 0; l < cfg.L; ++l) z[l] = power[l] >= threshold ? 1 : 0;
    std::vector<int> cand;
    for (int g = 0; g < cfg.num_blocks(); ++g) {
      const int base = g * U;
      int ones = 0;
      for (int u = 0; u < U; ++u) ones += z[base + u];
      if (ones > U / 2) {
        cand.clear();
        for (int u = 0; u < U; ++u)
          if (z[base + u]) cand.push_back(u);
        std::stable_sort(cand.begin(), cand.end(),
                         [&](int a, int b) { return power[base + a] < power[base + b]; });
        for (int i = 0; i < ones - U / 2; ++i) z[base + cand[i]] = 0;
      } else if (ones < U / 2) {
        cand.clear();
        for (int u = 0; u < U; ++u)
          if (!z[base + u]) cand.push_back(u);
        std::stable_sort(cand.begin(), cand.end(),
                         [&](int a, int b) { return power[base + a] > power[base + b]; });
        for (int i = 0; i < U / 2 - ones; ++i) z[base + cand[i]] = 1;
      }
    }
  }

  const double inv_hi = 1.0 / std::sqrt(1.0 + cfg.beta);
  const double inv_lo = 1.0 / std::sqrt(1.0 - cfg.beta);
  std::vector<int> psk(cfg.L);
  for (int l = 0; l < cfg.L; ++l) {
    const cplx normalized = x_hat[l] * (z[l] ? inv_hi : inv_lo);
    psk[l] = plim::psk_nearest_index(normalized, cfg.M);
  }
  return assemble_result(std::move(z), psk, cfg);
}

long long count_errors(const Bits& tx_bits, const Bits& rx_bits) {
  if (tx_bits.size() != rx_bits.size())
    throw std::invalid_argument("count_errors: length mismatch");
  long long errors = 0;
  for (size_t i = 0; i < tx_bits.size(); ++i) errors += (tx_bits[i] != rx_bits[i]) ? 1 : 0;
  return errors;
}

void score_detection(DetectionResult& result, const Bits& im_bits, const Bits& psk_bits) {
  result.im_errors = count_errors(im_bits, result.im_bits_hat);
  result.psk_errors = count_errors(psk_bits, result.psk_bits_hat);
  result.total_errors = result.im_errors + result.psk_errors;
}

}  // namespace afdmsim::detect
