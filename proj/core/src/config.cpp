#include "jfcs/config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace jfcs {

std::string to_string(SchedulerKind s) { return s == SchedulerKind::zfbf ? "zfbf" : "mrt"; }

std::string to_string(Scheme s) {
  switch (s) {
    case Scheme::jfcs: return "jfcs";
    case Scheme::num_fra: return "num-fra";
    case Scheme::num_efsd: return "num-efsd";
    case Scheme::num_nru: return "num-nru";
  }
  return "?";
}

SchedulerKind scheduler_from_string(const std::string& s) {
  if (s == "zfbf") return SchedulerKind::zfbf;
  if (s == "mrt") return SchedulerKind::mrt;
  throw ConfigError("unknown scheduler '" + s + "' (expected zfbf or mrt)");
}

Scheme scheme_from_string(const std::string& s) {
  if (s == "jfcs") return Scheme::jfcs;
  if (s == "num-fra") return Scheme::num_fra;
  if (s == "num-efsd") return Scheme::num_efsd;
  if (s == "num-nru") return Scheme::num_nru;
  throw ConfigError("unknown scheme '" + s + "'");
}

void SimConfig::validate() const {
  try {
    topo.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  if (frames < 1 || slots_per_frame < 1) throw ConfigError("frames and slots_per_frame must be >= 1");
  if (tau_s <= 0.0) throw ConfigError("tau must be > 0");
  if (phi <= 0.0) throw ConfigError("phi must be > 0");
  if (lambda <= 0.0) throw ConfigError("lambda must be > 0");
  if (arrival_lo < 0.0 || arrival_hi < arrival_lo) throw ConfigError("bad arrival bounds");
  if (arrival_max < arrival_hi) throw ConfigError("a_max must be >= a_hi");
  if (rate_unit_bps <= 0.0) throw ConfigError("rate_unit must be > 0");
  if (eps <= 0.0 || eps > 1.0) throw ConfigError("eps must be in (0,1]");
  if (dbar_s < 0.0) throw ConfigError("dbar must be >= 0");
  if (path_set_size < 1) throw ConfigError("path_set_size must be >= 1");
  if (beta_active < 0.0 || beta_active >= 1.0) throw ConfigError("beta_active must be in [0,1)");
  if (ue_redraw_period < 0) throw ConfigError("ue_redraw_period must be >= 0");
  if (tail_fraction <= 0.0 || tail_fraction > 1.0) throw ConfigError("tail_fraction in (0,1]");
  if (utility_offset <= 0.0) throw ConfigError("utility_offset must be > 0");
  const auto violations = validate_schedule(schedule);
  if (!violations.empty()) {
    std::string msg = "learning schedule invalid:";
    for (const auto& v : violations) msg += " " + v + ";";
    throw ConfigError(msg);
  }
}

SimConfig SimConfig::desk_preset() {
  SimConfig c;
  c.topo.num_dus = 2;
  c.topo.rus_per_du = 2;
  c.topo.num_ues = 4;
  c.topo.antennas_per_ru = 8;
  // Scaled-down cell: higher per-link SNR and wider band keep the
  // congestion-control relaxation well inside the 500-frame budget while
  // frozen shadowing preserves per-path heterogeneity.
  c.topo.cell_radius_m = 225.0;
  c.topo.bandwidth_hz = 50e6;
  c.topo.shadow_sigma_db = 8.0;
  c.frames = 500;
  c.slots_per_frame = 10;
  c.arrival_lo = 0.02;
  c.arrival_hi = 0.50;
  c.arrival_max = 0.50;
  c.dbar_s = 80e-3;
  c.phi = 15.0;
  c.beta_active = 0.10;
  c.ue_redraw_period = 0;  // static UEs, persistent large-scale state
  c.run_name = "desk";
  return c;
}

namespace {

double parse_double(const std::string& key, const std::string& v) {
  double out = 0.0;
  const char* b = v.data();
  const char* e = v.data() + v.size();
  auto [p, ec] = std::from_chars(b, e, out);
  if (ec != std::errc{} || p != e) throw ConfigError("bad number for '" + key + "': " + v);
  return out;
}

long long parse_int(const std::string& key, const std::string& v) {
  long long out = 0;
  const char* b = v.data();
  const char* e = v.data() + v.size();
  auto [p, ec] = std::from_chars(b, e, out);
  if (ec != std::errc{} || p != e) throw ConfigError("bad integer for '" + key + "': " + v);
  return out;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

}  // namespace

void apply_config_entry(SimConfig& cfg, const std::string& key, const std::string& value) {
  if (key == "frames") cfg.frames = static_cast<int>(parse_int(key, value));
  else if (key == "slots_per_frame") cfg.slots_per_frame = static_cast<int>(parse_int(key, value));
  else if (key == "tau") cfg.tau_s = parse_double(key, value);
  else if (key == "phi") cfg.phi = parse_double(key, value);
  else if (key == "lambda") cfg.lambda = parse_double(key, value);
  else if (key == "eta_u") cfg.schedule.e_u = parse_double(key, value);
  else if (key == "eta_theta") cfg.schedule.e_theta = parse_double(key, value);
  else if (key == "eta_beta") cfg.schedule.e_beta = parse_double(key, value);
  else if (key == "a_lo") cfg.arrival_lo = parse_double(key, value);
  else if (key == "a_hi") cfg.arrival_hi = parse_double(key, value);
  else if (key == "a_max") cfg.arrival_max = parse_double(key, value);
  else if (key == "rate_unit") cfg.rate_unit_bps = parse_double(key, value);
  else if (key == "dbar") cfg.dbar_s = parse_double(key, value);
  else if (key == "eps") cfg.eps = parse_double(key, value);
  else if (key == "scheduler") cfg.scheduler = scheduler_from_string(value);
  else if (key == "scheme") cfg.scheme = scheme_from_string(value);
  else if (key == "seed") cfg.seed = static_cast<std::uint64_t>(parse_int(key, value));
  else if (key == "path_set_size") cfg.path_set_size = static_cast<int>(parse_int(key, value));
  else if (key == "beta_active") cfg.beta_active = parse_double(key, value);
  else if (key == "ue_redraw_period") cfg.ue_redraw_period = static_cast<int>(parse_int(key, value));
  else if (key == "tail_fraction") cfg.tail_fraction = parse_double(key, value);
  else if (key == "utility_offset") cfg.utility_offset = parse_double(key, value);
  else if (key == "num_dus") cfg.topo.num_dus = static_cast<int>(parse_int(key, value));
  else if (key == "rus_per_du") cfg.topo.rus_per_du = static_cast<int>(parse_int(key, value));
  else if (key == "num_ues") cfg.topo.num_ues = static_cast<int>(parse_int(key, value));
  else if (key == "antennas") cfg.topo.antennas_per_ru = static_cast<int>(parse_int(key, value));
  else if (key == "radius") cfg.topo.cell_radius_m = parse_double(key, value);
  else if (key == "ru_height") cfg.topo.ru_height_m = parse_double(key, value);
  else if (key == "ue_height") cfg.topo.ue_height_m = parse_double(key, value);
  else if (key == "bandwidth") cfg.topo.bandwidth_hz = parse_double(key, value);
  else if (key == "noise_figure") cfg.topo.noise_figure_db = parse_double(key, value);
  else if (key == "p_max_dbm") cfg.topo.p_max_w = dbm_to_watts(parse_double(key, value));
  else if (key == "shadow_sigma") cfg.topo.shadow_sigma_db = parse_double(key, value);
  else if (key == "kappa_max") cfg.topo.kappa_max = parse_double(key, value);
  else if (key == "out") cfg.out_dir = value;
  else if (key == "name") cfg.run_name = value;
  else throw ConfigError("unknown config key '" + key + "'");
}

SimConfig load_config_file(const std::string& path, SimConfig base) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError(path + ":" + std::to_string(lineno) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    apply_config_entry(base, key, value);
  }
  return base;
}

}  // namespace jfcs
