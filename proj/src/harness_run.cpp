#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "afdmsim/afdm.hpp"
#include "afdmsim/harness.hpp"

namespace afdmsim::harness {

namespace {

Bits random_bits(Rng& rng, int count) {
  Bits b(count);
  for (auto& v : b) v = static_cast<uint8_t>(rng.bit());
  return b;
}

double snr_db_to_noise_var(double snr_db) {
  if (std::isinf(snr_db) && snr_db > 0.0) return 0.0;
  return std::pow(10.0, -snr_db / 10.0);
}

// Mean and standard error of a per-trial metric, reduced in trial order.
std::pair<double, double> mean_and_se(const std::vector<double>& per_trial) {
  const double n = static_cast<double>(per_trial.size());
  double mean = 0.0;
  for (const double v : per_trial) mean += v;
  mean /= n;
  double var = 0.0;
  for (const double v : per_trial) var += (v - mean) * (v - mean);
  var = per_trial.size() > 1 ? var / (n - 1.0) : 0.0;
  return {mean, std::sqrt(var / n)};
}

}  // namespace

// --- Waveform construction ---------------------------------------------------

int im_onoff_payload_bits(int L, int Z) {
  return plim::floor_log2_u128(plim::binom(L, Z));
}

cvec im_onoff_encode(const Bits& im_bits, const Bits& psk_bits, int L, int Z, int M) {
  const int payload = im_onoff_payload_bits(L, Z);
  if (im_bits.size() != static_cast<size_t>(payload))
    throw std::invalid_argument("im_onoff_encode: wrong IM bit count");
  const plim::u128 rank = plim::bits_to_u128(im_bits.data(), payload);
  const auto active = plim::combination_unrank(rank, L, Z);
  const cvec symbols = plim::psk_modulate(psk_bits, M);
  if (symbols.size() != static_cast<size_t>(Z))
    throw std::invalid_argument("im_onoff_encode: wrong PSK bit count");
  cvec x(L, cplx(0.0, 0.0));
  int s = 0;
  for (int l = 0; l < L; ++l)
    if (active[l]) x[l] = symbols[s++];
  return x;
}

detect::DetectionResult im_onoff_detect(const cvec& x_hat, int L, int Z, int M) {
  if (x_hat.size() != static_cast<size_t>(L))
    throw std::invalid_argument("im_onoff_detect: vector length != L");
  std::vector<int> order(L);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return std::norm(x_hat[a]) > std::norm(x_hat[b]); });
  std::vector<uint8_t> active(L, 0);
  for (int i = 0; i < Z; ++i) active[order[i]] = 1;

  detect::DetectionResult res;
  res.z_hat = active;
  const int payload = im_onoff_payload_bits(L, Z);
  plim::u128 rank = plim::combination_rank(active, Z);
  const plim::u128 max_rank = (static_cast<plim::u128>(1) << payload) - 1;
  if (rank > max_rank) rank = max_rank;
  res.im_bits_hat.resize(payload);
  plim::u128_to_bits(rank, payload, res.im_bits_hat.data());
  for (int l = 0; l < L; ++l)
    if (active[l]) plim::append_psk_bits(res.psk_bits_hat, plim::psk_nearest_index(x_hat[l], M), M);
  return res;
}

FramePayload make_chirp_frame(Waveform w, const ExperimentConfig& cfg, Rng& rng) {
  FramePayload frame;
  const auto& pc = cfg.plim;
  switch (w) {
    case Waveform::afdm_plim: {
      frame.im_bits = random_bits(rng, pc.im_bits_per_frame());
      frame.psk_bits = random_bits(rng, pc.psk_bits_per_frame());
      frame.x = plim::plim_encode(frame.im_bits, frame.psk_bits, pc).x;
      break;
    }
    case Waveform::afdm: {
      frame.psk_bits = random_bits(rng, pc.psk_bits_per_frame());
      frame.x = plim::psk_modulate(frame.psk_bits, pc.M);
      break;
    }
    case Waveform::afdm_im: {
      frame.im_bits = random_bits(rng, im_onoff_payload_bits(pc.L, cfg.z()));
      frame.psk_bits = random_bits(rng, cfg.z() * pc.bits_per_symbol());
      frame.x = im_onoff_encode(frame.im_bits, frame.psk_bits, pc.L, cfg.z(), pc.M);
      break;
    }
    case Waveform::fmcw:
      throw std::invalid_argument("make_chirp_frame: FMCW carries no chirp-domain payload");
  }
  return frame;
}

cvec tx_time_domain(Waveform w, const ExperimentConfig& cfg, Rng& rng) {
  const int L = cfg.plim.L;
  cvec y;
  if (w == Waveform::fmcw) {
    const double fs = cfg.sensing.sample_rate_hz;
    y = sensing::fmcw_waveform(cfg.sensing.bandwidth_hz, static_cast<double>(L) / fs, fs);
  } else {
    const FramePayload frame = make_chirp_frame(w, cfg, rng);
    y = afdm::afdm_modulate(frame.x, cfg.afdm_params());
  }
  double energy = 0.0;
  for (const auto& v : y) energy += std::norm(v);
  if (energy > 0.0) {
    const double scale = std::sqrt(static_cast<double>(y.size()) / energy);
    for (auto& v : y) v *= scale;
  }
  return y;
}

// --- Rate table ----------------------------------------------------------------

ResultTable run_rate_table(const ExperimentConfig& cfg) {
  cfg.validate();
  ResultTable table;
  table.meta = config_meta(cfg);
  table.meta.emplace_back("subcommand", "rate");
  table.sweep_label = "group_size";

  auto add_rows = [&table](double sweep, const plim::RateReport& rep, long long payload) {
    auto add = [&](const std::string& metric, double value) {
      table.rows.push_back({sweep, metric, value, 1, 0.0});
    };
    add("r_gamma", rep.r_gamma);
    add("r_gamma_ungrouped", rep.r_gamma_ungrouped);
    add("r_gamma_stirling", rep.r_gamma_stirling);
    add("r_beta", rep.r_beta);
    add("r_alpha", rep.r_alpha);
    add("im_payload_bits", static_cast<double>(payload));
    add("ordering_holds", rep.ordering_holds ? 1.0 : 0.0);
    if (rep.r_gamma > 0.0)
      add("stirling_rel_gap", std::abs(rep.r_gamma - rep.r_gamma_stirling) / rep.r_gamma);
  };

  // Ungrouped row first (sweep value 0), then each block size.
  plim::PlimConfig pc = cfg.plim;
  pc.group_size = 0;
  auto rep = plim::data_rates(pc, cfg.z());
  add_rows(0.0, rep, rep.im_payload_bits);
  for (const int u : cfg.rate_group_sizes) {
    if (u <= 0 || u % 2 != 0 || cfg.plim.L % u != 0) continue;
    pc.group_size = u;
    rep = plim::data_rates(pc, cfg.z());
    add_rows(static_cast<double>(u), rep, rep.im_payload_bits);
  }
  return table;
}

// --- BER sweep -----------------------------------------------------------------

ResultTable run_ber_sweep(const ExperimentConfig& cfg) {
  cfg.validate();
  if (cfg.waveform == Waveform::fmcw)
    throw std::invalid_argument("ber: waveform must be an AFDM variant");
  if (cfg.sweep_db.empty()) throw std::invalid_argument("ber: empty SNR sweep");
  const bool run_ml = cfg.detector != DetectorChoice::lc;
  const bool run_lc = cfg.detector != DetectorChoice::ml;
  if (cfg.waveform == Waveform::afdm_plim && run_ml && cfg.plim.grouped() &&
      cfg.plim.group_size > 16)
    throw std::invalid_argument("ber: ML detector requires group size U <= 16; use --detector lc");

  const int L = cfg.plim.L;
  const int points = static_cast<int>(cfg.sweep_db.size());
  const int trials = cfg.trials;
  const auto params = cfg.afdm_params();

  std::vector<std::string> dets;
  if (cfg.waveform == Waveform::afdm_plim) {
    if (run_lc) dets.emplace_back("lc");
    if (run_ml) dets.emplace_back("ml");
  } else {
    dets.emplace_back("");  // single detector for AFDM / AFDM-IM
  }
  const int n_det = static_cast<int>(dets.size());

  // Per (detector, point, trial) error fractions, filled by trial workers.
  struct TrialCell {
    double im = 0.0, psk = 0.0, total = 0.0;
    long long im_err = 0, psk_err = 0;
  };
  std::vector<TrialCell> cells(static_cast<size_t>(n_det) * points * trials);
  auto cell = [&](int d, int p, int t) -> TrialCell& {
    return cells[(static_cast<size_t>(d) * points + p) * trials + t];
  };

  int im_bits_n = 0, psk_bits_n = 0;
  switch (cfg.waveform) {
    case Waveform::afdm_plim:
      im_bits_n = cfg.plim.im_bits_per_frame();
      psk_bits_n = cfg.plim.psk_bits_per_frame();
      break;
    case Waveform::afdm:
      psk_bits_n = cfg.plim.psk_bits_per_frame();
      break;
    case Waveform::afdm_im:
      im_bits_n = im_onoff_payload_bits(L, cfg.z());
      psk_bits_n = cfg.z() * cfg.plim.bits_per_symbol();
      break;
    default: break;
  }
  const int frame_bits = im_bits_n + psk_bits_n;

  parallel_trials(trials, effective_workers(cfg), [&](int t) {
    Rng bits_rng = derive_rng(cfg.seed, stream_tag::ber_bits, t);
    Rng chan_rng = derive_rng(cfg.seed, stream_tag::ber_channel, t);
    Rng noise_rng = derive_rng(cfg.seed, stream_tag::ber_noise, t);

    std::vector<channel::PathSpec> paths;
    if (cfg.channel.use_fixed_paths) {
      paths = cfg.channel.fixed_paths;
      if (cfg.channel.normalize) channel::normalize_paths(paths);
    } else {
      paths = channel::random_channel(cfg.channel.profile, L, chan_rng);
    }
    const CMat h = channel::channel_matrix(paths, L);
    const CMat h_eff = channel::effective_channel(h, params);
    const detect::LmmseEqualizer eq(h_eff);

    const FramePayload frame = make_chirp_frame(cfg.waveform, cfg, bits_rng);
    const cvec y = afdm::afdm_modulate(frame.x, params);
    const cvec clean = matvec(h, y);
    cvec unit_noise(L);
    for (auto& v : unit_noise) v = noise_rng.cgaussian(1.0);

    for (int p = 0; p < points; ++p) {
      const double noise_var = snr_db_to_noise_var(cfg.sweep_db[p]);
      cvec r = clean;
      if (noise_var > 0.0) {
        const double sigma = std::sqrt(noise_var);
        for (int i = 0; i < L; ++i) r[i] += sigma * unit_noise[i];
      }
      const cvec r_daft = afdm::afdm_demodulate(r, params);
      const cvec x_hat = eq.equalize(r_daft, noise_var);

      for (int d = 0; d < n_det; ++d) {
        detect::DetectionResult res;
        if (cfg.waveform == Waveform::afdm_plim) {
          res = dets[d] == "ml" ? detect::ml_detect(x_hat, cfg.plim)
                                : detect::lc_detect(x_hat, cfg.plim, cfg.lc_mode);
        } else if (cfg.waveform == Waveform::afdm) {
          res.psk_bits_hat = plim::psk_demodulate(x_hat, cfg.plim.M);
        } else {
          res = im_onoff_detect(x_hat, L, cfg.z(), cfg.plim.M);
        }
        res.im_errors = im_bits_n ? detect::count_errors(frame.im_bits, res.im_bits_hat) : 0;
        res.psk_errors = detect::count_errors(frame.psk_bits, res.psk_bits_hat);
        TrialCell& c = cell(d, p, t);
        c.im_err = res.im_errors;
        c.psk_err = res.psk_errors;
        c.im = im_bits_n ? static_cast<double>(res.im_errors) / im_bits_n : 0.0;
        c.psk = static_cast<double>(res.psk_errors) / psk_bits_n;
        c.total = static_cast<double>(res.im_errors + res.psk_errors) / frame_bits;
      }
    }
  });

  ResultTable table;
  table.meta = config_meta(cfg);
  table.meta.emplace_back("subcommand", "ber");
  table.meta.emplace_back("bits-per-frame", std::to_string(frame_bits));
  table.sweep_label = "snr_db";

  std::vector<double> scratch(trials);
  for (int p = 0; p < points; ++p) {
    for (int d = 0; d < n_det; ++d) {
      const std::string suffix = dets[d].empty() ? "" : "_" + dets[d];
      auto emit = [&](const std::string& name, auto member) {
        for (int t = 0; t < trials; ++t) scratch[t] = cell(d, p, t).*member;
        const auto [mean, se] = mean_and_se(scratch);
        table.rows.push_back({cfg.sweep_db[p], name + suffix, mean, trials, se});
      };
      if (im_bits_n) emit("im_ber", &TrialCell::im);
      emit("psk_ber", &TrialCell::psk);
      emit("total_ber", &TrialCell::total);
    }
  }
  return table;
}

// --- Ambiguity functions ----------------------------------------------------------

AfResult run_af(const ExperimentConfig& cfg) {
  cfg.validate();
  const int L = cfg.plim.L;
  const int trials = std::max(1, cfg.sensing.af_payloads);
  const int max_delay = cfg.sensing.af_max_delay_bins > 0 ? cfg.sensing.af_max_delay_bins : L - 1;
  const double fs = cfg.sensing.sample_rate_hz;

  AfResult result;
  result.cuts.meta = config_meta(cfg);
  result.cuts.meta.emplace_back("subcommand", "af");
  result.cuts.sweep_label = "bin";
  result.summary.meta = result.cuts.meta;
  result.summary.sweep_label = "n_payloads";

  for (const Waveform w : cfg.compare_waveforms) {
    AfWaveformResult wr;
    wr.waveform = w;
    std::vector<sensing::AmbiguitySurface> surfaces(trials);
    wr.trial_mean_sidelobe.assign(trials, 0.0);

    parallel_trials(trials, effective_workers(cfg), [&](int t) {
      Rng rng = derive_rng(cfg.seed, stream_tag::af_payload, t);
      const cvec y = tx_time_domain(w, cfg, rng);
      surfaces[t] = sensing::ambiguity_function(y, max_delay, cfg.sensing.af_doppler_bins,
                                                cfg.sensing.af_zoom, fs);
      wr.trial_mean_sidelobe[t] = sensing::zero_doppler_cut(surfaces[t]).mean_sidelobe_linear;
    });

    wr.averaged = sensing::average_surfaces(surfaces);
    wr.delay_cut = sensing::zero_doppler_cut(wr.averaged);
    wr.doppler_cut = sensing::zero_delay_cut(wr.averaged);
    const auto [mean_sl, se_sl] = mean_and_se(wr.trial_mean_sidelobe);
    wr.mean_sidelobe_linear = mean_sl;
    wr.sidelobe_variance = se_sl * se_sl * trials;

    const std::string name = to_string(w);
    for (size_t i = 0; i < wr.delay_cut.bins.size(); ++i)
      result.cuts.rows.push_back({static_cast<double>(wr.delay_cut.bins[i]),
                                  name + "_delay_cut_db", wr.delay_cut.magnitude_db[i], trials,
                                  0.0});
    for (size_t i = 0; i < wr.doppler_cut.bins.size(); ++i)
      result.cuts.rows.push_back({static_cast<double>(wr.doppler_cut.bins[i]),
                                  name + "_doppler_cut_db", wr.doppler_cut.magnitude_db[i], trials,
                                  0.0});

    auto summarize = [&](const std::string& metric, double value, double se) {
      result.summary.rows.push_back({static_cast<double>(trials), name + "_" + metric, value,
                                     trials, se});
    };
    summarize("delay_peak_sidelobe_db", wr.delay_cut.peak_sidelobe_db, 0.0);
    summarize("delay_mean_sidelobe_linear", mean_sl, se_sl);
    summarize("delay_sidelobe_variance", wr.sidelobe_variance, 0.0);
    summarize("doppler_peak_sidelobe_db", wr.doppler_cut.peak_sidelobe_db, 0.0);
    summarize("doppler_mean_sidelobe_linear", wr.doppler_cut.mean_sidelobe_linear, 0.0);

    result.waveforms.push_back(std::move(wr));
  }
  return result;
}

// --- Range sweep --------------------------------------------------------------------

ResultTable run_range_sweep(const ExperimentConfig& cfg) {
  cfg.validate();
  if (cfg.sweep_db.empty()) throw std::invalid_argument("range: empty power sweep");
  const int L = cfg.plim.L;
  const double fs = cfg.sensing.sample_rate_hz;
  const double range_m = cfg.sensing.true_range_m;
  const int delay_bins = static_cast<int>(std::llround(2.0 * range_m / kSpeedOfLight * fs));
  const int window = cfg.sensing.window > 0 ? cfg.sensing.window : L + delay_bins;
  if (delay_bins + L > window)
    throw std::invalid_argument("range: echo exceeds the receive window; raise sensing.window");

  const int points = static_cast<int>(cfg.sweep_db.size());
  const int trials = cfg.trials;
  const int n_wave = static_cast<int>(cfg.compare_waveforms.size());

  // |estimate - T| / T per (waveform, point, trial).
  std::vector<double> err(static_cast<size_t>(n_wave) * points * trials, 0.0);
  auto err_at = [&](int w, int p, int t) -> double& {
    return err[(static_cast<size_t>(w) * points + p) * trials + t];
  };

  parallel_trials(trials, effective_workers(cfg), [&](int t) {
    Rng noise_rng = derive_rng(cfg.seed, stream_tag::range_noise, t);
    cvec unit_noise(window);
    for (auto& v : unit_noise) v = noise_rng.cgaussian(1.0);
    const double sigma = std::sqrt(cfg.sensing.noise_var);

    Rng payload_rng = derive_rng(cfg.seed, stream_tag::range_payload, t);
    for (int w = 0; w < n_wave; ++w) {
      const cvec y = tx_time_domain(cfg.compare_waveforms[w], cfg, payload_rng);
      cvec tx(window, cplx(0.0, 0.0));
      std::copy(y.begin(), y.end(), tx.begin());

      for (int p = 0; p < points; ++p) {
        const double amp = std::pow(10.0, cfg.sweep_db[p] / 20.0);
        cvec rx(window, cplx(0.0, 0.0));
        for (int i = 0; i < L; ++i) rx[delay_bins + i] = amp * y[i];
        if (sigma > 0.0)
          for (int i = 0; i < window; ++i) rx[i] += sigma * unit_noise[i];
        const double est = sensing::estimate_range(tx, rx, fs);
        err_at(w, p, t) = std::abs(est - range_m) / range_m;
      }
    }
  });

  ResultTable table;
  table.meta = config_meta(cfg);
  table.meta.emplace_back("subcommand", "range");
  table.meta.emplace_back("window", std::to_string(window));
  table.meta.emplace_back("echo-delay-bins", std::to_string(delay_bins));
  table.sweep_label = "power_db";

  std::vector<double> scratch(trials);
  for (int p = 0; p < points; ++p) {
    for (int w = 0; w < n_wave; ++w) {
      for (int t = 0; t < trials; ++t) scratch[t] = err_at(w, p, t);
      const auto [mean, se] = mean_and_se(scratch);
      table.rows.push_back(
          {cfg.sweep_db[p], "nmae_" + to_string(cfg.compare_waveforms[w]), mean, trials, se});
    }
  }
  return table;
}

}  // namespace afdmsim::harness
