// Receiver side: LMMSE equalization of the chirp-domain vector, followed by
// either the exact ML search over power/PSK hypotheses or the low-complexity
// power-threshold detector.

#pragma once

#include "afdmsim/matrix.hpp"
#include "afdmsim/plim.hpp"
#include "afdmsim/types.hpp"

namespace afdmsim::detect {

struct DetectionResult {
  std::vector<uint8_t> z_hat;  // per-subcarrier power indicators
  Bits im_bits_hat;
  Bits psk_bits_hat;
  long long im_errors = 0;
  long long psk_errors = 0;
  long long total_errors = 0;
};

// Caches H^H and the Gram matrix H^H H so one channel realization can be
// equalized at many noise levels.
class LmmseEqualizer {
 public:
  explicit LmmseEqualizer(const CMat& h_eff);

  // x_hat = (H^H H + noise_var I)^{-1} H^H r, solved via Cholesky.
  cvec equalize(const cvec& r_daft, double noise_var) const;

 private:
  CMat h_adj_;
  CMat gram_;
};

cvec lmmse_equalize(const CMat& h_eff, const cvec& r_daft, double noise_var);

enum class LcMode {
  block_sort,        // per block, the U/2 largest powers are declared high
  global_threshold,  // literal mean-power threshold; blocks repaired to balance
};

// Exact minimizer of ||J - x_hat||^2 over the valid codeword set. Ungrouped
// frames separate per subcarrier (2M hypotheses each); grouped frames search
// all C(U,U/2) balanced patterns per block with the inner PSK choice done per
// subcarrier. Grouped U above 16 throws and points at lc_detect.
DetectionResult ml_detect(const cvec& x_hat, const plim::PlimConfig& cfg);

// Threshold detector: mean received power decides the indicators (ungrouped),
// or a per-block power sort keeps every block balanced (grouped). Symbols are
// rescaled by 1/sqrt(1±beta) before PSK demodulation.
DetectionResult lc_detect(const cvec& x_hat, const plim::PlimConfig& cfg,
                          LcMode mode = LcMode::block_sort);

// Hamming distance between equal-length bit sequences.
long long count_errors(const Bits& tx_bits, const Bits& rx_bits);

// Fills the error counters of a detection result against the transmitted bits.
void score_detection(DetectionResult& result, const Bits& im_bits, const Bits& psk_bits);

}  // namespace afdmsim::detect
