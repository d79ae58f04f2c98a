#include <doctest.h>

#include <cmath>
#include <limits>

#include "jfcs/channel.hpp"

using namespace jfcs;
using doctest::Approx;

TEST_CASE("three-slope path loss reference values") {
  CHECK(path_loss_db(1000.0, 0.0) == Approx(-140.7).epsilon(1e-12));
  // below both breakpoints: c0 = 0 at the boundary, c1 = 1
  CHECK(path_loss_db(10.0, 0.0) == Approx(-140.7 + 70.0 + 15.0 * std::log10(0.2)).epsilon(1e-12));
  CHECK(path_loss_db(10.0, 0.0) == Approx(-81.1845).epsilon(1e-4));
  // shadowing shifts the intercept
  CHECK(path_loss_db(1000.0, 3.0) == Approx(-137.7).epsilon(1e-12));
  CHECK_THROWS_AS(path_loss_db(0.0, 0.0), std::domain_error);
  CHECK_THROWS_AS(path_loss_db(-5.0, 0.0), std::domain_error);
}

TEST_CASE("path loss is continuous at both breakpoints") {
  for (double d : {10.0, 50.0}) {
    const double below = path_loss_db(d * (1.0 - 1e-9), 0.0);
    const double at = path_loss_db(d, 0.0);
    const double above = path_loss_db(d * (1.0 + 1e-9), 0.0);
    CHECK(std::abs(below - at) < 1e-6);
    CHECK(std::abs(above - at) < 1e-6);
  }
}

TEST_CASE("LoS probability reference values and monotonicity") {
  CHECK(los_probability(5.0) == Approx(1.0).epsilon(1e-12));
  CHECK(los_probability(18.0) == Approx(1.0).epsilon(1e-12));
  CHECK(los_probability(36.0) == Approx(0.5 * (1.0 - std::exp(-1.0)) + std::exp(-1.0)));
  CHECK(los_probability(36.0) == Approx(0.68394).epsilon(1e-4));
  CHECK(los_probability(1e7) < 1e-5);
  double prev = los_probability(18.0);
  for (double d = 19.0; d < 2000.0; d += 7.3) {
    const double p = los_probability(d);
    CHECK(p <= prev + 1e-15);
    prev = p;
  }
}

TEST_CASE("Rician factor from LoS probability") {
  CHECK(rician_factor(0.5) == Approx(1.0));
  CHECK(rician_factor(0.0) == Approx(0.0));
  CHECK(rician_factor(1.0) == Approx(1e3));  // clamp
  CHECK(rician_factor(0.999999999, 1e3) == Approx(1e3));
}

TEST_CASE("array response") {
  const auto ones = array_response(0.0, 5);
  for (const auto& v : ones) {
    CHECK(v.real() == Approx(1.0));
    CHECK(v.imag() == Approx(0.0));
  }
  const auto single = array_response(1.234, 1);
  REQUIRE(single.size() == 1);
  CHECK(single[0].real() == Approx(1.0));
  const auto pair = array_response(std::acos(-1.0) / 2.0, 2);
  CHECK(pair[1].real() == Approx(-1.0));
  CHECK(std::abs(pair[1].imag()) < 1e-12);
  for (const auto& v : array_response(-0.7, 16)) CHECK(std::abs(v) == Approx(1.0));
}

TEST_CASE("noise power") {
  CHECK(noise_power_dbm(1.0, 0.0) == Approx(-170.0));
  CHECK(noise_power_dbm(20e6, 9.0) == Approx(-87.9897).epsilon(1e-5));
  const double base = noise_power_dbm(5e6, 3.0);
  CHECK(noise_power_dbm(10e6, 3.0) - base == Approx(10.0 * std::log10(2.0)));
}

namespace {

LargeScaleEntry make_entry(double xi, double kappa, int antennas) {
  LargeScaleEntry e;
  e.xi = xi;
  e.kappa = kappa;
  e.aod = 0.3;
  e.los = array_response(e.aod, antennas);
  return e;
}

LargeScaleState single_pair_state(double xi, double kappa, int antennas) {
  LargeScaleState ls;
  ls.num_rus = 1;
  ls.num_ues = 1;
  ls.antennas = antennas;
  ls.entries = {make_entry(xi, kappa, antennas)};
  return ls;
}

}  // namespace

TEST_CASE("infinite Rician factor gives the deterministic LoS channel") {
  const auto ls = single_pair_state(0.25, std::numeric_limits<double>::infinity(), 4);
  RngStream fading(1, "fading");
  const auto ch = draw_channel(ls, fading);
  const auto h = ch.at(0, 0);
  for (int m = 0; m < 4; ++m) {
    CHECK(h[m].real() == Approx(0.5 * ls.entries[0].los[m].real()));
    CHECK(h[m].imag() == Approx(0.5 * ls.entries[0].los[m].imag()));
  }
}

TEST_CASE("Rayleigh norm matches the large-scale gain") {
  const double xi = 3.7e-11;
  const auto ls = single_pair_state(xi, 0.0, 4);
  RngStream fading(77, "fading");
  double acc = 0.0;
  const int draws = 100000;
  for (int i = 0; i < draws; ++i) {
    const auto ch = draw_channel(ls, fading);
    for (const auto& v : ch.at(0, 0)) acc += std::norm(v);
  }
  const double mean_per_antenna = acc / (4.0 * draws);
  CHECK(std::abs(mean_per_antenna - xi) / xi < 0.02);
}

TEST_CASE("per-element variance passes a chi-square test at 1%") {
  const double xi = 2.0;
  const auto ls = single_pair_state(xi, 0.0, 1);
  RngStream fading(5, "fading");
  const int n = 10000;
  double t = 0.0;
  for (int i = 0; i < n; ++i) {
    const auto ch = draw_channel(ls, fading);
    t += 2.0 * std::norm(ch.at(0, 0)[0]) / xi;
  }
  // T ~ chi^2 with k = 2n dof; Wilson-Hilferty quantiles at 0.5% / 99.5%
  const double k = 2.0 * n;
  const double z = 2.575829;
  const double c = 2.0 / (9.0 * k);
  const double lo = k * std::pow(1.0 - c - z * std::sqrt(c), 3);
  const double hi = k * std::pow(1.0 - c + z * std::sqrt(c), 3);
  CHECK(t > lo);
  CHECK(t < hi);
}

TEST_CASE("channel draws replay bit-exactly for a fixed seed") {
  TopologyConfig cfg;
  cfg.num_dus = 2;
  cfg.rus_per_du = 2;
  cfg.num_ues = 3;
  cfg.antennas_per_ru = 4;
  const auto draw_all = [&]() {
    RngStream placement(123, "placement"), shadowing(123, "shadowing"), fading(123, "fading");
    const auto topo = make_topology(cfg, placement);
    const auto pos = draw_ue_positions(cfg, placement);
    const auto ls = make_large_scale(topo, pos, shadowing);
    return draw_channel(ls, fading);
  };
  const auto a = draw_all();
  const auto b = draw_all();
  REQUIRE(a.h.size() == b.h.size());
  for (std::size_t i = 0; i < a.h.size(); ++i) CHECK(a.h[i] == b.h[i]);
}

TEST_CASE("large-scale state is geometrically consistent") {
  TopologyConfig cfg;
  cfg.num_dus = 2;
  cfg.rus_per_du = 2;
  cfg.num_ues = 8;
  cfg.antennas_per_ru = 4;
  cfg.shadow_sigma_db = 0.0;
  RngStream placement(3, "placement"), shadowing(3, "shadowing");
  const auto topo = make_topology(cfg, placement);
  const auto pos = draw_ue_positions(cfg, placement);
  const auto ls = make_large_scale(topo, pos, shadowing);
  for (int ru = 0; ru < 4; ++ru) {
    for (int ue = 0; ue < 8; ++ue) {
      const auto& e = ls.at(ru, ue);
      CHECK(e.xi > 0.0);
      CHECK(e.kappa >= 0.0);
      CHECK(e.kappa <= cfg.kappa_max);
      CHECK(e.aod >= -std::acos(-1.0) / 2.0);
      CHECK(e.aod <= std::acos(-1.0) / 2.0);
      for (const auto& v : e.los) CHECK(std::abs(v) == Approx(1.0));
    }
  }
  for (const auto& p : pos)
    CHECK(p.x * p.x + p.y * p.y <= cfg.cell_radius_m * cfg.cell_radius_m + 1e-9);
}

TEST_CASE("topology validation rejects bad configs") {
  TopologyConfig cfg;
  cfg.num_ues = 0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = TopologyConfig{};
  cfg.cell_radius_m = -1.0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = TopologyConfig{};
  cfg.p_max_w = 0.0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}
