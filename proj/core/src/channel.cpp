#include "jfcs/channel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace jfcs {

void TopologyConfig::validate() const {
  if (num_dus < 1 || rus_per_du < 1 || num_ues < 1 || antennas_per_ru < 1)
    throw std::invalid_argument("topology: all counts must be >= 1");
  if (cell_radius_m <= 0.0) throw std::invalid_argument("topology: cell radius must be > 0");
  if (p_max_w <= 0.0) throw std::invalid_argument("topology: power budget must be > 0");
  if (bandwidth_hz <= 0.0) throw std::invalid_argument("topology: bandwidth must be > 0");
  if (ru_height_m <= 0.0 || ue_height_m < 0.0)
    throw std::invalid_argument("topology: bad heights");
  if (shadow_sigma_db < 0.0) throw std::invalid_argument("topology: shadow sigma must be >= 0");
  if (kappa_max <= 0.0) throw std::invalid_argument("topology: kappa_max must be > 0");
}

double path_loss_db(double d_m, double shadow_db) {
  if (d_m <= 0.0) throw std::domain_error("path_loss: distance must be > 0");
  constexpr double kD0M = 10.0;
  constexpr double kD1M = 50.0;
  const double d_km = d_m * 1e-3;
  const double xi0 = -140.7 + shadow_db;
  // c_i = 1 strictly below the breakpoint, 0 at and above it.
  const double c0 = d_m < kD0M ? 1.0 : 0.0;
  const double c1 = d_m < kD1M ? 1.0 : 0.0;
  double gain = xi0 - 35.0 * std::log10(d_km);
  if (c0 != 0.0) gain += 20.0 * std::log10(d_m / kD0M);
  if (c1 != 0.0) gain += 15.0 * std::log10(d_m / kD1M);
  return gain;
}

double los_probability(double d_m) {
  if (d_m <= 0.0) throw std::domain_error("los_probability: distance must be > 0");
  const double e = std::exp(-d_m / 36.0);
  return std::min(18.0 / d_m, 1.0) * (1.0 - e) + e;
}

double rician_factor(double p_los, double kappa_max) {
  if (p_los < 0.0 || p_los > 1.0)
    throw std::domain_error("rician_factor: probability out of [0,1]");
  if (p_los >= 1.0) return kappa_max;
  return std::min(p_los / (1.0 - p_los), kappa_max);
}

std::vector<std::complex<double>> array_response(double phi_rad, int num_antennas) {
  if (num_antennas < 1) throw std::domain_error("array_response: need at least one antenna");
  std::vector<std::complex<double>> a(num_antennas);
  const double s = std::sin(phi_rad);
  for (int m = 0; m < num_antennas; ++m) {
    const double arg = std::numbers::pi * m * s;
    a[m] = {std::cos(arg), std::sin(arg)};
  }
  return a;
}

double noise_power_dbm(double bandwidth_hz, double noise_figure_db) {
  if (bandwidth_hz <= 0.0) throw std::domain_error("noise_power: bandwidth must be > 0");
  return -170.0 + 10.0 * std::log10(bandwidth_hz) + noise_figure_db;
}

Topology make_topology(const TopologyConfig& cfg, RngStream& placement) {
  cfg.validate();
  const int j = cfg.num_rus();
  // Grid side: smallest n with n^2 >= J, laid over the inscribed square.
  int side = 1;
  while (side * side < j) ++side;
  const double half = cfg.cell_radius_m / std::numbers::sqrt2;
  std::vector<Position> grid;
  grid.reserve(static_cast<std::size_t>(side) * side);
  for (int iy = 0; iy < side; ++iy) {
    for (int ix = 0; ix < side; ++ix) {
      const double fx = side == 1 ? 0.0 : (2.0 * ix / (side - 1) - 1.0);
      const double fy = side == 1 ? 0.0 : (2.0 * iy / (side - 1) - 1.0);
      grid.push_back({fx * half, fy * half});
    }
  }
  // Keep the J cells closest to the center (stable order on ties).
  std::stable_sort(grid.begin(), grid.end(), [](const Position& a, const Position& b) {
    return a.x * a.x + a.y * a.y < b.x * b.x + b.y * b.y;
  });
  grid.resize(j);
  // Seeded rotation so different seeds give different geometry.
  const double rot = placement.uniform(0.0, 2.0 * std::numbers::pi);
  const double c = std::cos(rot), s = std::sin(rot);
  for (auto& p : grid) {
    const Position q{c * p.x - s * p.y, s * p.x + c * p.y};
    p = q;
  }
  return Topology{cfg, std::move(grid)};
}

std::vector<Position> draw_ue_positions(const TopologyConfig& cfg, RngStream& placement) {
  std::vector<Position> pos(cfg.num_ues);
  for (auto& p : pos) {
    const double r = cfg.cell_radius_m * std::sqrt(placement.uniform());
    const double a = placement.uniform(0.0, 2.0 * std::numbers::pi);
    p = {r * std::cos(a), r * std::sin(a)};
  }
  return pos;
}

double distance_3d(const Position& ru, const Position& ue, double ru_height_m,
                   double ue_height_m) {
  const double dx = ru.x - ue.x;
  const double dy = ru.y - ue.y;
  const double dz = ru_height_m - ue_height_m;
  return std::sqrt(dx * dx + dy * dy + dz * dz);
}

LargeScaleState make_large_scale(const Topology& topo, const std::vector<Position>& ue_pos,
                                 RngStream& shadowing) {
  const auto& cfg = topo.cfg;
  LargeScaleState ls;
  ls.num_rus = cfg.num_rus();
  ls.num_ues = static_cast<int>(ue_pos.size());
  ls.antennas = cfg.antennas_per_ru;
  ls.entries.resize(static_cast<std::size_t>(ls.num_rus) * ls.num_ues);
  for (int ru = 0; ru < ls.num_rus; ++ru) {
    for (int ue = 0; ue < ls.num_ues; ++ue) {
      auto& e = ls.at(ru, ue);
      const double d = distance_3d(topo.ru_pos[ru], ue_pos[ue], cfg.ru_height_m, cfg.ue_height_m);
      const double shadow = cfg.shadow_sigma_db * shadowing.normal();
      e.xi = db_to_linear(path_loss_db(d, shadow));
      e.kappa = rician_factor(los_probability(d), cfg.kappa_max);
      // AoD from geometry; only sin(phi) enters the response, so fold the
      // bearing into [-pi/2, pi/2] via asin(sin(.)).
      const double bearing =
          std::atan2(ue_pos[ue].y - topo.ru_pos[ru].y, ue_pos[ue].x - topo.ru_pos[ru].x);
      e.aod = std::asin(std::sin(bearing));
      e.los = array_response(e.aod, cfg.antennas_per_ru);
    }
  }
  return ls;
}

ChannelRealization draw_channel(const LargeScaleState& ls, RngStream& fading) {
  ChannelRealization ch;
  ch.num_rus = ls.num_rus;
  ch.num_ues = ls.num_ues;
  ch.antennas = ls.antennas;
  ch.h.resize(static_cast<std::size_t>(ls.num_rus) * ls.num_ues * ls.antennas);
  for (int ru = 0; ru < ls.num_rus; ++ru) {
    for (int ue = 0; ue < ls.num_ues; ++ue) {
      const auto& e = ls.at(ru, ue);
      const double amp = std::sqrt(e.xi);
      auto out = ch.at(ru, ue);
      if (std::isinf(e.kappa)) {
        for (int m = 0; m < ls.antennas; ++m) out[m] = amp * e.los[m];
        continue;
      }
      const double w_los = std::sqrt(e.kappa / (e.kappa + 1.0));
      const double w_nlos = std::sqrt(1.0 / (e.kappa + 1.0));
      for (int m = 0; m < ls.antennas; ++m) {
        out[m] = amp * (w_los * e.los[m] + w_nlos * fading.cgauss());
      }
    }
  }
  return ch;
}

}  // namespace jfcs
