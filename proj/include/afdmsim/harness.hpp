// Seeded Monte Carlo experiment engine behind the CLI: configuration,
// waveform construction for the four compared signals, the rate/BER/AF/range
// runners, and CSV/JSON result persistence.
//
// Determinism contract: every random draw comes from a stream derived from
// (master seed, purpose tag, trial index), and reductions run in trial order,
// so results are byte-identical for any worker count.

#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "afdmsim/channel.hpp"
#include "afdmsim/detect.hpp"
#include "afdmsim/plim.hpp"
#include "afdmsim/sensing.hpp"
#include "afdmsim/types.hpp"

namespace afdmsim::harness {

enum class Waveform { afdm, afdm_im, afdm_plim, fmcw };
enum class DetectorChoice { lc, ml, both };

std::string to_string(Waveform w);
Waveform waveform_from_string(const std::string& name);
std::string to_string(DetectorChoice d);
DetectorChoice detector_from_string(const std::string& name);

struct ChannelConfig {
  bool use_fixed_paths = false;
  std::vector<channel::PathSpec> fixed_paths;
  channel::RandomChannelProfile profile;
  bool normalize = true;
};

struct SensingConfig {
  double bandwidth_hz = 100e6;
  double sample_rate_hz = 100e6;
  double carrier_hz = 2.4e9;  // recorded in output metadata; the sim is baseband
  double true_range_m = 150.0;
  double noise_var = 1.0;
  int window = 0;  // receive window in samples; 0 = frame length + echo delay
  int af_payloads = 100;
  int af_max_delay_bins = 0;  // 0 = L - 1
  int af_doppler_bins = 128;
  double af_zoom = 1.0;
  bool af_export_surfaces = false;
};

struct ExperimentConfig {
  uint64_t seed = 1;
  Waveform waveform = Waveform::afdm_plim;
  std::vector<Waveform> compare_waveforms = {Waveform::fmcw, Waveform::afdm, Waveform::afdm_im,
                                             Waveform::afdm_plim};
  plim::PlimConfig plim{128, 4, 0.5, 8};
  double nu_max = 2.0;  // digital Doppler assumed by select_c1
  int xi = 1;
  double c2 = 0.0;
  ChannelConfig channel;
  std::vector<double> sweep_db;  // SNR (ber) or transmit power (range); +inf = noiseless
  int trials = 200;
  DetectorChoice detector = DetectorChoice::both;
  detect::LcMode lc_mode = detect::LcMode::block_sort;
  int z_active = -1;  // AFDM-IM active subcarriers; -1 = L/2
  std::vector<int> rate_group_sizes = {2, 4, 8, 16, 32, 64, 128};
  SensingConfig sensing;
  std::string out;
  std::string format = "csv";
  int workers = 0;  // 0 = AFDMSIM_WORKERS env var, else 1

  afdm::AfdmParams afdm_params() const;
  int z() const { return z_active > 0 ? z_active : plim.L / 2; }
  void validate() const;
};

struct ResultRow {
  double sweep = 0.0;
  std::string metric;
  double value = 0.0;
  long long trials = 0;
  double std_err = 0.0;
};

struct ResultTable {
  std::vector<std::pair<std::string, std::string>> meta;
  std::string sweep_label = "snr_db";
  std::vector<ResultRow> rows;
};

// --- Waveform construction ---------------------------------------------------

struct FramePayload {
  Bits im_bits;
  Bits psk_bits;
  cvec x;  // chirp-domain vector (empty for FMCW)
};

// Draws payload bits from rng and builds the chirp-domain frame for an AFDM
// variant. FMCW has no payload and is rejected here.
FramePayload make_chirp_frame(Waveform w, const ExperimentConfig& cfg, Rng& rng);

// Time-domain transmit frame (L samples), normalized to unit average sample
// power so waveform comparisons run at equal transmit energy.
cvec tx_time_domain(Waveform w, const ExperimentConfig& cfg, Rng& rng);

// AFDM-IM helpers (Z active subcarriers chosen combinadically).
int im_onoff_payload_bits(int L, int Z);
cvec im_onoff_encode(const Bits& im_bits, const Bits& psk_bits, int L, int Z, int M);
detect::DetectionResult im_onoff_detect(const cvec& x_hat, int L, int Z, int M);

// --- Runners -------------------------------------------------------------------

ResultTable run_rate_table(const ExperimentConfig& cfg);
ResultTable run_ber_sweep(const ExperimentConfig& cfg);
ResultTable run_range_sweep(const ExperimentConfig& cfg);

struct AfWaveformResult {
  Waveform waveform = Waveform::afdm;
  sensing::AmbiguitySurface averaged;
  sensing::CutProfile delay_cut;
  sensing::CutProfile doppler_cut;
  std::vector<double> trial_mean_sidelobe;  // zero-Doppler mean sidelobe per payload
  double mean_sidelobe_linear = 0.0;
  double sidelobe_variance = 0.0;  // variance of the per-trial means
};

struct AfResult {
  std::vector<AfWaveformResult> waveforms;
  ResultTable cuts;
  ResultTable summary;
};

AfResult run_af(const ExperimentConfig& cfg);

// --- Config & persistence ----------------------------------------------------

// Key-value config file: one `key = value` per line, '#' comments. The
// channel.path key repeats, one path per line ("re im delay doppler").
std::vector<std::pair<std::string, std::string>> parse_config_file(const std::string& path);
void apply_setting(ExperimentConfig& cfg, const std::string& key, const std::string& value);

// "a:b:step" inclusive range, or a comma-separated list; "inf" = noiseless.
std::vector<double> parse_sweep(const std::string& text);

std::vector<std::pair<std::string, std::string>> config_meta(const ExperimentConfig& cfg);

void write_table(const std::string& path, const ResultTable& table, const std::string& format);
void write_af_surface(const std::string& path, const sensing::AmbiguitySurface& surface,
                      const std::vector<std::pair<std::string, std::string>>& meta);

int effective_workers(const ExperimentConfig& cfg);

// Runs fn(trial) for 0 <= trial < trials on a small thread pool. Callbacks
// must write only to trial-indexed slots.
void parallel_trials(int trials, int workers, const std::function<void(int)>& fn);

}  // namespace afdmsim::harness
