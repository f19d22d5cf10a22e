#include "afdmsim/sensing.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace afdmsim::sensing {

AmbiguitySurface ambiguity_function(const cvec& x, int max_delay_bins, int doppler_bins,
                                    double zoom, double sample_rate_hz) {
  const int n = static_cast<int>(x.size());
  if (n < 2) throw std::domain_error("ambiguity_function: need at least two samples");
  if (max_delay_bins < 0 || max_delay_bins >= n)
    throw std::domain_error("ambiguity_function: max_delay_bins must satisfy 0 <= d < N");
  if (doppler_bins < 1) throw std::domain_error("ambiguity_function: doppler_bins must be >= 1");

  AmbiguitySurface surf;
  surf.max_delay_bins = max_delay_bins;
  surf.doppler_fft_len = doppler_bins;
  surf.doppler_half_bins = doppler_bins / 2;
  surf.zoom = zoom;
  surf.delay_bin_seconds = sample_rate_hz > 0.0 ? 1.0 / sample_rate_hz : 1.0;
  surf.doppler_bin_hz = (sample_rate_hz > 0.0 ? sample_rate_hz : 1.0) * zoom /
                        static_cast<double>(doppler_bins);
  surf.magnitudes.assign(static_cast<size_t>(surf.delay_rows()) * surf.doppler_cols(), 0.0);

  // Lag product once per delay, then one direct DFT per Doppler bin. The
  // grids here are zoomable and small, so direct evaluation beats setting up
  // zero-padded FFTs.
  cvec lag(n);
  for (int d = -max_delay_bins; d <= max_delay_bins; ++d) {
    const int lo = std::max(0, d);
    const int hi = n - 1 + std::min(0, d);
    int count = 0;
    for (int idx = lo; idx <= hi; ++idx) {
      const cplx& a = x[idx];
      const cplx& b = x[idx - d];
      lag[count++] = cplx(a.real() * b.real() + a.imag() * b.imag(),
                          a.imag() * b.real() - a.real() * b.imag());  // a * conj(b)
    }
    for (int m = -surf.doppler_half_bins; m <= surf.doppler_half_bins; ++m) {
      const double freq = zoom * static_cast<double>(m) / static_cast<double>(doppler_bins);
      double sr = 0.0, si = 0.0;
      const cplx w = std::polar(1.0, kTwoPi * freq);
      cplx rot = std::polar(1.0, kTwoPi * freq * static_cast<double>(lo));
      for (int idx = 0; idx < count; ++idx) {
        sr += lag[idx].real() * rot.real() - lag[idx].imag() * rot.imag();
        si += lag[idx].real() * rot.imag() + lag[idx].imag() * rot.real();
        rot *= w;
      }
      surf.magnitudes[static_cast<size_t>(d + max_delay_bins) * surf.doppler_cols() +
                      static_cast<size_t>(m + surf.doppler_half_bins)] = std::hypot(sr, si);
    }
  }
  surf.peak_value = surf.at(0, 0);
  return surf;
}

AmbiguitySurface average_surfaces(const std::vector<AmbiguitySurface>& surfaces) {
  if (surfaces.empty()) throw std::domain_error("average_surfaces: empty input");
  AmbiguitySurface avg = surfaces.front();
  for (size_t s = 1; s < surfaces.size(); ++s) {
    const auto& cur = surfaces[s];
    if (cur.magnitudes.size() != avg.magnitudes.size())
      throw std::invalid_argument("average_surfaces: shape mismatch");
    for (size_t i = 0; i < avg.magnitudes.size(); ++i) avg.magnitudes[i] += cur.magnitudes[i];
    avg.peak_value += cur.peak_value;
  }
  const double inv = 1.0 / static_cast<double>(surfaces.size());
  for (auto& v : avg.magnitudes) v *= inv;
  avg.peak_value = avg.at(0, 0);
  return avg;
}

namespace {

constexpr double kDbFloor = -300.0;

double to_db(double linear) {
  return linear > 0.0 ? 20.0 * std::log10(linear) : kDbFloor;
}

CutProfile make_cut(const std::vector<double>& values, int half_span) {
  CutProfile cut;
  const int center = half_span;
  const double peak = values[center];
  if (peak <= 0.0) throw std::domain_error("cut: zero peak");

  cut.bins.resize(values.size());
  cut.magnitude_db.resize(values.size());
  for (size_t i = 0; i < values.size(); ++i) {
    cut.bins[i] = static_cast<int>(i) - half_span;
    cut.magnitude_db[i] = to_db(values[i] / peak);
  }

  // Mainlobe: contiguous region around the origin above -3 dB.
  int lo = center, hi = center;
  while (lo > 0 && cut.magnitude_db[lo - 1] > -3.0) --lo;
  while (hi + 1 < static_cast<int>(values.size()) && cut.magnitude_db[hi + 1] > -3.0) ++hi;
  cut.mainlobe_lo = lo - half_span;
  cut.mainlobe_hi = hi - half_span;

  double peak_sl = -std::numeric_limits<double>::infinity();
  double sum_linear = 0.0;
  int count = 0;
  for (int i = 0; i < static_cast<int>(values.size()); ++i) {
    if (i >= lo && i <= hi) continue;
    peak_sl = std::max(peak_sl, cut.magnitude_db[i]);
    sum_linear += values[i] / peak;
    ++count;
  }
  if (count > 0) {
    cut.mean_sidelobe_linear = sum_linear / count;
    cut.peak_sidelobe_db = peak_sl;
    cut.mean_sidelobe_db = to_db(cut.mean_sidelobe_linear);
  } else {
    cut.mean_sidelobe_linear = 0.0;
    cut.peak_sidelobe_db = -std::numeric_limits<double>::infinity();
    cut.mean_sidelobe_db = -std::numeric_limits<double>::infinity();
  }
  return cut;
}

}  // namespace

CutProfile zero_doppler_cut(const AmbiguitySurface& surface) {
  std::vector<double> values(surface.delay_rows());
  for (int d = -surface.max_delay_bins; d <= surface.max_delay_bins; ++d)
    values[static_cast<size_t>(d + surface.max_delay_bins)] = surface.at(d, 0);
  return make_cut(values, surface.max_delay_bins);
}

CutProfile zero_delay_cut(const AmbiguitySurface& surface) {
  std::vector<double> values(surface.doppler_cols());
  for (int m = -surface.doppler_half_bins; m <= surface.doppler_half_bins; ++m)
    values[static_cast<size_t>(m + surface.doppler_half_bins)] = surface.at(0, m);
  return make_cut(values, surface.doppler_half_bins);
}

cvec fmcw_waveform(double bandwidth_hz, double duration_s, double sample_rate_hz) {
  if (duration_s <= 0.0 || sample_rate_hz <= 0.0)
    throw std::domain_error("fmcw_waveform: duration and sample rate must be positive");
  if (bandwidth_hz < 0.0) throw std::domain_error("fmcw_waveform: negative bandwidth");
  if (sample_rate_hz < bandwidth_hz)
    throw std::domain_error("fmcw_waveform: undersampled (need fs >= B at complex baseband)");

  const int n = static_cast<int>(std::llround(duration_s * sample_rate_hz));
  if (n < 1) throw std::domain_error("fmcw_waveform: zero-length waveform");
  const double slope = bandwidth_hz / duration_s;
  cvec x(n);
  for (int i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) / sample_rate_hz - duration_s / 2.0;
    x[i] = std::polar(1.0, kPi * slope * t * t);
  }
  return x;
}

double estimate_range(const cvec& tx, const cvec& rx, double sample_rate_hz) {
  if (tx.size() != rx.size()) throw std::invalid_argument("estimate_range: length mismatch");
  if (tx.empty()) throw std::domain_error("estimate_range: empty buffers");
  if (sample_rate_hz <= 0.0) throw std::domain_error("estimate_range: invalid sample rate");
  double tx_energy = 0.0;
  for (const auto& v : tx) tx_energy += std::norm(v);
  if (tx_energy <= 0.0) throw std::domain_error("estimate_range: all-zero reference");

  const int n = static_cast<int>(tx.size());
  // Full linear cross-correlation c[d] = sum_n rx[n] conj(tx[n-d]).
  std::vector<double> mag(2 * n - 1, 0.0);
  for (int d = -(n - 1); d <= n - 1; ++d) {
    const int lo = std::max(0, d);
    const int hi = n - 1 + std::min(0, d);
    double sr = 0.0, si = 0.0;
    for (int idx = lo; idx <= hi; ++idx) {
      const cplx& a = rx[idx];
      const cplx& b = tx[idx - d];
      sr += a.real() * b.real() + a.imag() * b.imag();
      si += a.imag() * b.real() - a.real() * b.imag();
    }
    mag[static_cast<size_t>(d + n - 1)] = std::hypot(sr, si);
  }

  int peak = 0;
  for (int i = 1; i < static_cast<int>(mag.size()); ++i)
    if (mag[i] > mag[peak]) peak = i;

  // Three-point parabolic refinement on the magnitude.
  double offset = 0.0;
  if (peak > 0 && peak + 1 < static_cast<int>(mag.size())) {
    const double ym = mag[peak - 1], y0 = mag[peak], yp = mag[peak + 1];
    const double denom = ym - 2.0 * y0 + yp;
    if (denom < 0.0) offset = std::clamp(0.5 * (ym - yp) / denom, -0.5, 0.5);
  }

  const double delay_bins = static_cast<double>(peak - (n - 1)) + offset;
  const double tau = delay_bins / sample_rate_hz;
  return kSpeedOfLight * tau / 2.0;
}

double nmae(const std::vector<double>& estimates_m, double true_range_m) {
  if (!(true_range_m > 0.0)) throw std::domain_error("nmae: true range must be positive");
  if (estimates_m.empty()) throw std::domain_error("nmae: no estimates");
  double acc = 0.0;
  for (const double est : estimates_m) acc += std::abs(est - true_range_m);
  return acc / (static_cast<double>(estimates_m.size()) * true_range_m);
}

}  // namespace afdmsim::sensing
