#ifndef JFCS_CONFIG_HPP
#define JFCS_CONFIG_HPP

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>

#include "jfcs/channel.hpp"
#include "jfcs/flow_split.hpp"
#include "jfcs/sched_mrt.hpp"
#include "jfcs/sched_zfbf.hpp"

namespace jfcs {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class SchedulerKind { zfbf, mrt };
enum class Scheme { jfcs, num_fra, num_efsd, num_nru };

std::string to_string(SchedulerKind s);
std::string to_string(Scheme s);
SchedulerKind scheduler_from_string(const std::string& s);  // throws ConfigError
Scheme scheme_from_string(const std::string& s);            // throws ConfigError

/// Full simulation configuration. Rates (arrival bounds, caps) are expressed
/// in units of rate_unit_bps (Gbps by default); queues are then rate units
/// times seconds. Table-I values are the defaults.
struct SimConfig {
  TopologyConfig topo;

  int frames = 10000;
  int slots_per_frame = 10;
  double tau_s = 1e-3;
  double phi = 25.0;
  double lambda = 0.3;
  LearningSchedule schedule;

  double arrival_lo = 1.0;
  double arrival_hi = 3.0;
  double arrival_max = 3.0;
  double rate_unit_bps = 1e9;

  double dbar_s = 10e-3;
  double eps = 0.95;

  SchedulerKind scheduler = SchedulerKind::zfbf;
  Scheme scheme = Scheme::jfcs;
  std::uint64_t seed = 1;

  int path_set_size = 4;      // RUs per flow, best large-scale gain
  double beta_active = 0.05;  // split share below which a path is not scheduled
  int ue_redraw_period = 1;   // frames between UE placement redraws; 0 = fixed
  double tail_fraction = 0.6;  // steady-state window (warmup = 1 - this)
  double utility_offset = 1e-3;

  double instability_threshold = 1e9;  // rate-unit-seconds; divergence flag

  ZfSolverConfig zf;
  MrtSolverConfig mrt;

  std::string out_dir = ".";
  std::string run_name = "run";

  void validate() const;  // throws ConfigError

  /// CI-scale preset: small topology, near-critical load, persistent
  /// geometry. Keeps every mechanism active at a fraction of the runtime.
  static SimConfig desk_preset();
};

/// Flat key=value config file ('#' comments). Unknown keys are errors.
SimConfig load_config_file(const std::string& path, SimConfig base = SimConfig{});

/// Applies one key=value pair (same keys as the file format).
void apply_config_entry(SimConfig& cfg, const std::string& key, const std::string& value);

}  // namespace jfcs

#endif
