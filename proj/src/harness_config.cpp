#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "afdmsim/harness.hpp"

#include "json.hpp"

namespace afdmsim::harness {

std::string to_string(Waveform w) {
  switch (w) {
    case Waveform::afdm: return "afdm";
    case Waveform::afdm_im: return "afdm-im";
    case Waveform::afdm_plim: return "afdm-plim";
    case Waveform::fmcw: return "fmcw";
  }
  return "?";
}

Waveform waveform_from_string(const std::string& name) {
  if (name == "afdm") return Waveform::afdm;
  if (name == "afdm-im" || name == "afdm_im") return Waveform::afdm_im;
  if (name == "afdm-plim" || name == "afdm_plim") return Waveform::afdm_plim;
  if (name == "fmcw") return Waveform::fmcw;
  throw std::invalid_argument("unknown waveform: " + name);
}

std::string to_string(DetectorChoice d) {
  switch (d) {
    case DetectorChoice::lc: return "lc";
    case DetectorChoice::ml: return "ml";
    case DetectorChoice::both: return "both";
  }
  return "?";
}

DetectorChoice detector_from_string(const std::string& name) {
  if (name == "lc") return DetectorChoice::lc;
  if (name == "ml") return DetectorChoice::ml;
  if (name == "both") return DetectorChoice::both;
  throw std::invalid_argument("unknown detector: " + name);
}

afdm::AfdmParams ExperimentConfig::afdm_params() const {
  afdm::AfdmParams p;
  p.L = plim.L;
  p.c1 = afdm::select_c1(nu_max, xi, plim.L);
  p.c2 = c2;
  return p;
}

void ExperimentConfig::validate() const {
  plim.validate();
  if (trials < 1) throw std::invalid_argument("config: trials must be >= 1");
  if (!sweep_db.empty()) {
    for (size_t i = 1; i < sweep_db.size(); ++i)
      if (!(sweep_db[i] > sweep_db[i - 1]))
        throw std::invalid_argument("config: sweep must be strictly increasing");
  }
  if (z() < 1 || z() > plim.L) throw std::invalid_argument("config: Z must satisfy 1 <= Z <= L");
  if (format != "csv" && format != "json")
    throw std::invalid_argument("config: format must be csv or json");
  if (channel.use_fixed_paths && channel.fixed_paths.empty())
    throw std::invalid_argument("config: fixed channel selected but no paths given");
  if (sensing.sample_rate_hz <= 0.0 || sensing.bandwidth_hz <= 0.0)
    throw std::invalid_argument("config: sensing rates must be positive");
  if (sensing.true_range_m <= 0.0) throw std::invalid_argument("config: true range must be positive");
}

// --- Parsing -------------------------------------------------------------------

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& s) {
  if (s == "inf" || s == "+inf") return std::numeric_limits<double>::infinity();
  size_t pos = 0;
  const double v = std::stod(s, &pos);
  if (pos != s.size()) throw std::invalid_argument("bad number: " + s);
  return v;
}

long long parse_int(const std::string& s) {
  size_t pos = 0;
  const long long v = std::stoll(s, &pos);
  if (pos != s.size()) throw std::invalid_argument("bad integer: " + s);
  return v;
}

bool parse_bool(const std::string& s) {
  if (s == "1" || s == "true" || s == "yes" || s == "on") return true;
  if (s == "0" || s == "false" || s == "no" || s == "off") return false;
  throw std::invalid_argument("bad boolean: " + s);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) parts.push_back(trim(item));
  return parts;
}

std::string format_double(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

}  // namespace

std::vector<double> parse_sweep(const std::string& text) {
  std::vector<double> out;
  const std::string body = trim(text);
  if (body.empty()) throw std::invalid_argument("empty sweep specification");
  if (body.find(':') != std::string::npos) {
    const auto parts = split(body, ':');
    if (parts.size() != 3) throw std::invalid_argument("sweep range must be a:b:step");
    const double a = parse_double(parts[0]);
    const double b = parse_double(parts[1]);
    const double step = parse_double(parts[2]);
    if (!(step > 0.0)) throw std::invalid_argument("sweep step must be positive");
    for (double v = a; v <= b + 1e-9 * std::abs(step); v += step) out.push_back(v);
  } else {
    for (const auto& item : split(body, ',')) out.push_back(parse_double(item));
  }
  if (out.empty()) throw std::invalid_argument("empty sweep");
  return out;
}

std::vector<std::pair<std::string, std::string>> parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  std::vector<std::pair<std::string, std::string>> settings;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument(path + ":" + std::to_string(lineno) + ": expected key = value");
    settings.emplace_back(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return settings;
}

void apply_setting(ExperimentConfig& cfg, const std::string& key, const std::string& value) {
  if (key == "seed") {
    cfg.seed = static_cast<uint64_t>(std::stoull(value));
  } else if (key == "waveform") {
    cfg.waveform = waveform_from_string(value);
  } else if (key == "trials") {
    cfg.trials = static_cast<int>(parse_int(value));
  } else if (key == "out") {
    cfg.out = value;
  } else if (key == "format") {
    cfg.format = value;
  } else if (key == "detector") {
    cfg.detector = detector_from_string(value);
  } else if (key == "lc-mode") {
    if (value == "sort") cfg.lc_mode = detect::LcMode::block_sort;
    else if (value == "global") cfg.lc_mode = detect::LcMode::global_threshold;
    else throw std::invalid_argument("lc-mode must be sort or global");
  } else if (key == "L") {
    cfg.plim.L = static_cast<int>(parse_int(value));
  } else if (key == "M") {
    cfg.plim.M = static_cast<int>(parse_int(value));
  } else if (key == "beta") {
    cfg.plim.beta = parse_double(value);
  } else if (key == "group-size") {
    cfg.plim.group_size = static_cast<int>(parse_int(value));
  } else if (key == "Z") {
    cfg.z_active = static_cast<int>(parse_int(value));
  } else if (key == "nu-max") {
    cfg.nu_max = parse_double(value);
  } else if (key == "xi") {
    cfg.xi = static_cast<int>(parse_int(value));
  } else if (key == "c2") {
    cfg.c2 = parse_double(value);
  } else if (key == "snr-db" || key == "power-db") {
    cfg.sweep_db = parse_sweep(value);
  } else if (key == "workers") {
    cfg.workers = static_cast<int>(parse_int(value));
  } else if (key == "rate.group-sizes") {
    cfg.rate_group_sizes.clear();
    for (const auto& item : split(value, ','))
      cfg.rate_group_sizes.push_back(static_cast<int>(parse_int(item)));
  } else if (key == "channel.num-paths") {
    cfg.channel.profile.num_paths = static_cast<int>(parse_int(value));
  } else if (key == "channel.max-delay") {
    cfg.channel.profile.max_delay = static_cast<int>(parse_int(value));
  } else if (key == "channel.max-doppler") {
    cfg.channel.profile.max_doppler_digital = parse_double(value);
  } else if (key == "channel.normalize") {
    cfg.channel.normalize = parse_bool(value);
  } else if (key == "channel.path") {
    std::stringstream ss(value);
    double re, im, doppler;
    int delay;
    if (!(ss >> re >> im >> delay >> doppler))
      throw std::invalid_argument("channel.path needs: re im delay doppler");
    cfg.channel.fixed_paths.push_back({cplx(re, im), delay, doppler});
    cfg.channel.use_fixed_paths = true;
  } else if (key == "af.payloads") {
    cfg.sensing.af_payloads = static_cast<int>(parse_int(value));
  } else if (key == "af.max-delay-bins") {
    cfg.sensing.af_max_delay_bins = static_cast<int>(parse_int(value));
  } else if (key == "af.doppler-bins") {
    cfg.sensing.af_doppler_bins = static_cast<int>(parse_int(value));
  } else if (key == "af.zoom") {
    cfg.sensing.af_zoom = parse_double(value);
  } else if (key == "af.surfaces") {
    cfg.sensing.af_export_surfaces = parse_bool(value);
  } else if (key == "af.waveforms" || key == "compare-waveforms") {
    cfg.compare_waveforms.clear();
    for (const auto& item : split(value, ','))
      cfg.compare_waveforms.push_back(waveform_from_string(item));
  } else if (key == "range.true-m") {
    cfg.sensing.true_range_m = parse_double(value);
  } else if (key == "sensing.noise-var") {
    cfg.sensing.noise_var = parse_double(value);
  } else if (key == "sensing.bandwidth-hz") {
    cfg.sensing.bandwidth_hz = parse_double(value);
  } else if (key == "sensing.sample-rate-hz") {
    cfg.sensing.sample_rate_hz = parse_double(value);
  } else if (key == "sensing.carrier-hz") {
    cfg.sensing.carrier_hz = parse_double(value);
  } else if (key == "sensing.window") {
    cfg.sensing.window = static_cast<int>(parse_int(value));
  } else {
    throw std::invalid_argument("unknown config key: " + key);
  }
}

std::vector<std::pair<std::string, std::string>> config_meta(const ExperimentConfig& cfg) {
  std::vector<std::pair<std::string, std::string>> meta;
  auto add = [&meta](const std::string& k, const std::string& v) { meta.emplace_back(k, v); };
  add("seed", std::to_string(cfg.seed));
  add("waveform", to_string(cfg.waveform));
  add("L", std::to_string(cfg.plim.L));
  add("M", std::to_string(cfg.plim.M));
  add("beta", format_double(cfg.plim.beta));
  add("group-size", std::to_string(cfg.plim.group_size));
  add("Z", std::to_string(cfg.z()));
  add("nu-max", format_double(cfg.nu_max));
  add("xi", std::to_string(cfg.xi));
  add("c1", format_double(cfg.afdm_params().c1));
  add("c2", format_double(cfg.c2));
  add("detector", to_string(cfg.detector));
  add("lc-mode", cfg.lc_mode == detect::LcMode::block_sort ? "sort" : "global");
  add("trials", std::to_string(cfg.trials));
  if (cfg.channel.use_fixed_paths) {
    add("channel", "fixed");
    for (const auto& p : cfg.channel.fixed_paths) {
      std::stringstream ss;
      ss << format_double(p.gain.real()) << " " << format_double(p.gain.imag()) << " "
         << p.delay_samples << " " << format_double(p.doppler_norm);
      add("channel.path", ss.str());
    }
  } else {
    add("channel", "random");
    add("channel.num-paths", std::to_string(cfg.channel.profile.num_paths));
    add("channel.max-delay", std::to_string(cfg.channel.profile.max_delay));
    add("channel.max-doppler", format_double(cfg.channel.profile.max_doppler_digital));
  }
  add("channel.normalize", cfg.channel.normalize ? "1" : "0");
  add("snr-definition", "per-subcarrier symbol energy over noise variance; snr = 1/sigma^2");
  {
    std::string sweep;
    for (size_t i = 0; i < cfg.sweep_db.size(); ++i) {
      if (i) sweep += ",";
      sweep += format_double(cfg.sweep_db[i]);
    }
    add("sweep-db", sweep);
  }
  add("sensing.bandwidth-hz", format_double(cfg.sensing.bandwidth_hz));
  add("sensing.sample-rate-hz", format_double(cfg.sensing.sample_rate_hz));
  add("sensing.carrier-hz", format_double(cfg.sensing.carrier_hz));
  add("sensing.noise-var", format_double(cfg.sensing.noise_var));
  add("range.true-m", format_double(cfg.sensing.true_range_m));
  return meta;
}

// --- Persistence ------------------------------------------------------------------

void write_table(const std::string& path, const ResultTable& table, const std::string& format) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open output file: " + path);
  if (format == "csv") {
    for (const auto& [k, v] : table.meta) out << "# " << k << " = " << v << "\n";
    out << table.sweep_label << ",metric,value,trials,std_err\n";
    for (const auto& row : table.rows) {
      out << format_double(row.sweep) << "," << row.metric << "," << format_double(row.value)
          << "," << row.trials << "," << format_double(row.std_err) << "\n";
    }
  } else if (format == "json") {
    nlohmann::ordered_json j;
    for (const auto& [k, v] : table.meta) j["config"][k] = v;
    j["sweep_label"] = table.sweep_label;
    j["rows"] = nlohmann::ordered_json::array();
    for (const auto& row : table.rows) {
      nlohmann::ordered_json r;
      r["sweep"] = row.sweep;
      r["metric"] = row.metric;
      r["value"] = row.value;
      r["trials"] = row.trials;
      r["std_err"] = row.std_err;
      j["rows"].push_back(std::move(r));
    }
    out << j.dump(2) << "\n";
  } else {
    throw std::invalid_argument("unknown output format: " + format);
  }
  if (!out) throw std::runtime_error("failed writing output file: " + path);
}

void write_af_surface(const std::string& path, const sensing::AmbiguitySurface& surface,
                      const std::vector<std::pair<std::string, std::string>>& meta) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open output file: " + path);
  for (const auto& [k, v] : meta) out << "# " << k << " = " << v << "\n";
  out << "# delay_bin_seconds = " << format_double(surface.delay_bin_seconds) << "\n";
  out << "# doppler_bin_hz = " << format_double(surface.doppler_bin_hz) << "\n";
  out << "delay_bin,doppler_bin,magnitude_db\n";
  const double peak = surface.peak_value > 0.0 ? surface.peak_value : 1.0;
  for (int d = -surface.max_delay_bins; d <= surface.max_delay_bins; ++d) {
    for (int m = -surface.doppler_half_bins; m <= surface.doppler_half_bins; ++m) {
      const double rel = surface.at(d, m) / peak;
      const double db = rel > 0.0 ? 20.0 * std::log10(rel) : -300.0;
      out << d << "," << m << "," << format_double(db) << "\n";
    }
  }
  if (!out) throw std::runtime_error("failed writing output file: " + path);
}

int effective_workers(const ExperimentConfig& cfg) {
  if (const char* env = std::getenv("AFDMSIM_WORKERS")) {
    const int w = std::atoi(env);
    if (w > 0) return w;
  }
  if (cfg.workers > 0) return cfg.workers;
  return 1;
}

void parallel_trials(int trials, int workers, const std::function<void(int)>& fn) {
  workers = std::max(1, std::min(workers, trials));
  if (workers == 1) {
    for (int t = 0; t < trials; ++t) fn(t);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  std::exception_ptr first_error;
  std::mutex error_mutex;
  const int chunk = (trials + workers - 1) / workers;
  for (int w = 0; w < workers; ++w) {
    const int lo = w * chunk;
    const int hi = std::min(trials, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back([&, lo, hi] {
      try {
        for (int t = lo; t < hi; ++t) fn(t);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace afdmsim::harness
