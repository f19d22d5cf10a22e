// Doubly dispersive LTV channel: path lists, the L×L time-domain matrix,
// AWGN application, and the chirp-domain effective matrix seen by the
// equalizer.
//
// Delays act cyclically (mod L), the discrete equivalent of an ideal
// chirp-periodic prefix, so the effective channel A H A^H is exact.

#pragma once

#include <vector>

#include "afdmsim/afdm.hpp"
#include "afdmsim/matrix.hpp"
#include "afdmsim/rng.hpp"
#include "afdmsim/types.hpp"

namespace afdmsim::channel {

struct PathSpec {
  cplx gain;                 // complex amplitude
  int delay_samples = 0;     // cyclic delay, 0 <= tau < L
  double doppler_norm = 0.0; // Doppler in cycles per sample, |nu| < 0.5
};

// H(k, l) = sum_q gain_q e^{j2π nu_q k} for (k - l) mod L == tau_q.
CMat channel_matrix(const std::vector<PathSpec>& paths, int L);

// r = H y + n, n circularly symmetric complex Gaussian with E|n_k|^2 = noise_var.
cvec apply_channel(const CMat& h, const cvec& y, double noise_var, Rng& rng);

// Effective chirp-domain channel A H A^H, computed with fast transforms.
CMat effective_channel(const CMat& h, const afdm::AfdmParams& params);

// Random profile for Monte Carlo sweeps: num_paths paths, integer delays
// uniform on [0, max_delay], Doppler uniform on ±max_doppler_digital/L, and
// complex Gaussian gains normalized to unit total energy.
struct RandomChannelProfile {
  int num_paths = 3;
  int max_delay = 8;
  double max_doppler_digital = 2.0;
};

std::vector<PathSpec> random_channel(const RandomChannelProfile& profile, int L, Rng& rng);

// Scales gains so sum |gain_q|^2 = 1 (per-subcarrier SNR then equals
// 1/noise_var for unit-power input).
void normalize_paths(std::vector<PathSpec>& paths);

struct ChannelRealization {
  std::vector<PathSpec> paths;
  CMat h;
  CMat h_eff;
  double noise_var = 0.0;
};

ChannelRealization make_realization(std::vector<PathSpec> paths, const afdm::AfdmParams& params,
                                    double noise_var);

}  // namespace afdmsim::channel
