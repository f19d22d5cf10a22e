#include "afdmsim/channel.hpp"

#include <cmath>
#include <stdexcept>

namespace afdmsim::channel {

CMat channel_matrix(const std::vector<PathSpec>& paths, int L) {
  if (L < 1) throw std::domain_error("channel_matrix: L must be positive");
  if (paths.empty()) throw std::domain_error("channel_matrix: at least one path required");
  for (const auto& p : paths) {
    if (p.delay_samples < 0 || p.delay_samples >= L)
      throw std::domain_error("channel_matrix: path delay must satisfy 0 <= tau < L");
    if (!(std::abs(p.doppler_norm) < 0.5))
      throw std::domain_error("channel_matrix: |doppler| must be below 0.5 cycles/sample");
  }

  CMat h(L, L);
  for (const auto& p : paths) {
    for (int k = 0; k < L; ++k) {
      const int l = (k - p.delay_samples % L + L) % L;
      h(k, l) += p.gain * std::polar(1.0, kTwoPi * p.doppler_norm * static_cast<double>(k));
    }
  }
  return h;
}

cvec apply_channel(const CMat& h, const cvec& y, double noise_var, Rng& rng) {
  if (noise_var < 0.0) throw std::domain_error("apply_channel: negative noise variance");
  cvec r = matvec(h, y);
  if (noise_var > 0.0) {
    for (auto& v : r) v += rng.cgaussian(noise_var);
  }
  return r;
}

CMat effective_channel(const CMat& h, const afdm::AfdmParams& params) {
  const size_t L = h.rows();
  if (h.cols() != L) throw std::invalid_argument("effective_channel: H must be square");
  if (L != static_cast<size_t>(params.L))
    throw std::invalid_argument("effective_channel: H size does not match params.L");

  // A H A^H = (A (A H^H)^H); applying A column-by-column is 2L fast DAFTs.
  CMat t = h.adjoint();
  cvec col(L);
  for (size_t j = 0; j < L; ++j) {
    for (size_t i = 0; i < L; ++i) col[i] = t(i, j);
    col = afdm::afdm_demodulate(col, params);
    for (size_t i = 0; i < L; ++i) t(i, j) = col[i];
  }
  CMat u = t.adjoint();  // = H A^H
  for (size_t j = 0; j < L; ++j) {
    for (size_t i = 0; i < L; ++i) col[i] = u(i, j);
    col = afdm::afdm_demodulate(col, params);
    for (size_t i = 0; i < L; ++i) u(i, j) = col[i];
  }
  return u;
}

std::vector<PathSpec> random_channel(const RandomChannelProfile& profile, int L, Rng& rng) {
  if (profile.num_paths < 1) throw std::domain_error("random_channel: need at least one path");
  if (profile.max_delay < 0 || profile.max_delay >= L)
    throw std::domain_error("random_channel: max_delay must satisfy 0 <= d < L");

  std::vector<PathSpec> paths(profile.num_paths);
  const double nu_lim = profile.max_doppler_digital / static_cast<double>(L);
  for (auto& p : paths) {
    p.gain = rng.cgaussian(1.0);
    p.delay_samples = static_cast<int>(rng.below(static_cast<uint64_t>(profile.max_delay) + 1));
    p.doppler_norm = rng.uniform(-nu_lim, nu_lim);
  }
  normalize_paths(paths);
  return paths;
}

void normalize_paths(std::vector<PathSpec>& paths) {
  double energy = 0.0;
  for (const auto& p : paths) energy += std::norm(p.gain);
  if (energy <= 0.0) throw std::domain_error("normalize_paths: zero total path energy");
  const double scale = 1.0 / std::sqrt(energy);
  for (auto& p : paths) p.gain *= scale;
}

ChannelRealization make_realization(std::vector<PathSpec> paths, const afdm::AfdmParams& params,
                                    double noise_var) {
  ChannelRealization real;
  real.paths = std::move(paths);
  real.h = channel_matrix(real.paths, params.L);
  real.h_eff = effective_channel(real.h, params);
  real.noise_var = noise_var;
  return real;
}

}  // namespace afdmsim::channel
