#ifndef JFCS_CHANNEL_HPP
#define JFCS_CHANNEL_HPP

#include <complex>
#include <span>
#include <vector>

#include "jfcs/rng.hpp"

namespace jfcs {

/// dB power ratio to linear.
inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double lin) { return 10.0 * std::log10(lin); }
inline double dbm_to_watts(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }

struct TopologyConfig {
  int num_dus = 2;
  int rus_per_du = 4;  // J_i, uniform across DUs; J = num_dus * rus_per_du
  int num_ues = 12;
  int antennas_per_ru = 16;
  double cell_radius_m = 1000.0;
  double ru_height_m = 10.0;
  double ue_height_m = 1.5;
  double bandwidth_hz = 20e6;
  double noise_figure_db = 9.0;
  double p_max_w = dbm_to_watts(43.0);
  double shadow_sigma_db = 8.0;
  double kappa_max = 1e3;

  int num_rus() const { return num_dus * rus_per_du; }
  /// Throws std::invalid_argument if any count or bound is out of range.
  void validate() const;
};

/// Three-slope path loss, distances in meters, returns gain in dB.
/// Breakpoints at 10 m and 50 m; the distance term is evaluated in km
/// against the -140.7 dB intercept. Throws std::domain_error for d <= 0.
double path_loss_db(double d_m, double shadow_db);

/// 3GPP-UMa line-of-sight probability. Throws std::domain_error for d <= 0.
double los_probability(double d_m);

/// Rician factor p/(1-p), clamped to kappa_max so p = 1 stays finite.
double rician_factor(double p_los, double kappa_max = 1e3);

/// Uniform-linear-array response, element m (1-based) = exp(j pi (m-1) sin phi).
std::vector<std::complex<double>> array_response(double phi_rad, int num_antennas);

/// Noise power in dBm over bandwidth W with noise figure NF.
double noise_power_dbm(double bandwidth_hz, double noise_figure_db);

struct Position {
  double x = 0.0;
  double y = 0.0;
};

/// RU placement: square grid covering the disc, clipped to the J cells
/// closest to the center, rotated by a seeded angle.
struct Topology {
  TopologyConfig cfg;
  std::vector<Position> ru_pos;  // size J
};

Topology make_topology(const TopologyConfig& cfg, RngStream& placement);

/// UEs uniform in the disc.
std::vector<Position> draw_ue_positions(const TopologyConfig& cfg, RngStream& placement);

double distance_3d(const Position& ru, const Position& ue, double ru_height_m,
                   double ue_height_m);

/// Per-(RU, UE) large-scale state, fixed within one frame.
struct LargeScaleEntry {
  double xi = 0.0;     // linear power gain
  double kappa = 0.0;  // Rician factor
  double aod = 0.0;    // angle of departure, [-pi/2, pi/2)
  std::vector<std::complex<double>> los;  // unit-modulus, length M
};

struct LargeScaleState {
  int num_rus = 0;
  int num_ues = 0;
  int antennas = 0;
  std::vector<LargeScaleEntry> entries;  // indexed ru * num_ues + ue

  LargeScaleEntry& at(int ru, int ue) { return entries[ru * num_ues + ue]; }
  const LargeScaleEntry& at(int ru, int ue) const { return entries[ru * num_ues + ue]; }
};

LargeScaleState make_large_scale(const Topology& topo, const std::vector<Position>& ue_pos,
                                 RngStream& shadowing);

/// Per-slot channel vectors h for every (RU, UE) pair.
struct ChannelRealization {
  int num_rus = 0;
  int num_ues = 0;
  int antennas = 0;
  std::vector<std::complex<double>> h;  // (ru, ue, m) row-major

  std::span<const std::complex<double>> at(int ru, int ue) const {
    return {h.data() + (static_cast<std::size_t>(ru) * num_ues + ue) * antennas,
            static_cast<std::size_t>(antennas)};
  }
  std::span<std::complex<double>> at(int ru, int ue) {
    return {h.data() + (static_cast<std::size_t>(ru) * num_ues + ue) * antennas,
            static_cast<std::size_t>(antennas)};
  }
};

/// Rician composition: sqrt(xi) (sqrt(k/(k+1)) hbar + sqrt(1/(k+1)) htilde),
/// NLoS part redrawn per call. kappa = +inf yields the pure LoS channel.
ChannelRealization draw_channel(const LargeScaleState& ls, RngStream& fading);

}  // namespace jfcs

#endif
