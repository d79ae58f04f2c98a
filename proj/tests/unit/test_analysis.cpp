#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "jfcs/analysis.hpp"

using namespace jfcs;
using doctest::Approx;

TEST_CASE("quadratic Lyapunov value") {
  const std::vector<double> empty;
  CHECK(lyapunov(empty, empty, 1.0) == 0.0);
  const std::vector<double> qhat{1.0};
  CHECK(lyapunov(empty, qhat, 1.0) == Approx(0.5));  // qhat = tau
  const std::vector<double> q{3.0, 4.0};
  CHECK(lyapunov(q, empty, 1.0) == Approx(12.5));
  CHECK(lyapunov(q, empty, 2.0) == Approx(12.5 / 4.0));
  const std::vector<double> bad{-1.0};
  CHECK_THROWS_AS(lyapunov(bad, empty, 1.0), std::domain_error);
}

TEST_CASE("drift upper bound hand trace") {
  // one queue 2 -> 4 with inflow 3, service 1, tau 1: dL = 6, bound = 4 + 2
  const std::vector<double> q{2.0}, inflow{3.0}, rate{1.0};
  const std::vector<double> none;
  const auto b = drift_upper_bound(q, inflow, rate, none, none, none, 1.0);
  CHECK(b.upper == Approx(6.0));
  CHECK(b.second_moment == Approx(2.0));
  const double next = std::max(0.0, q[0] + inflow[0] - rate[0]);
  const double dl = 0.5 * next * next - 0.5 * q[0] * q[0];
  CHECK(dl == Approx(6.0));  // tight when nothing clamps
}

TEST_CASE("balanced slot leaves only the second-moment term") {
  const std::vector<double> q{5.0, 2.0}, inflow{1.0, 0.5}, rate{1.0, 0.5};
  const std::vector<double> qhat{3.0}, admitted{2.0}, served{2.0};
  const auto b = drift_upper_bound(q, inflow, rate, qhat, admitted, served, 1.0);
  CHECK(b.upper == Approx(b.second_moment));
  CHECK(b.second_moment == 0.0);
}

TEST_CASE("clamped slot leaves the bound strictly above the drift") {
  const std::vector<double> q{1.0}, inflow{0.0}, rate{5.0};
  const std::vector<double> none;
  const double tau = 1.0;
  const auto b = drift_upper_bound(q, inflow, rate, none, none, none, tau);
  const double next = std::max(0.0, q[0] + (inflow[0] - rate[0]) * tau);
  const double dl = 0.5 * next * next - 0.5 * q[0] * q[0];
  CHECK(dl < b.upper - 1e-9);
}

TEST_CASE("stability-bound constants") {
  const auto c = stability_constants(1, 1.0, 1.0, 1.0, 1.0, 1.0);
  CHECK(c.c1 == Approx(1.0));
  CHECK(c.c2 == Approx(1.0));
  CHECK(c.c3 == Approx(0.5));
  CHECK(c.c3_cross == Approx(c.c3).epsilon(1e-12));

  // tau doubling doubles C1, leaves C2 and C3 unchanged
  const auto d = stability_constants(1, 2.0, 1.0, 1.0, 1.0, 1.0);
  CHECK(d.c1 == Approx(2.0 * c.c1));
  CHECK(d.c2 == Approx(c.c2));
  CHECK(d.c3 == Approx(c.c3));

  // K -> 4K doubles C1 and C2, quadruples C3
  const auto k4 = stability_constants(4, 1.0, 1.0, 1.0, 1.0, 1.0);
  CHECK(k4.c1 == Approx(2.0 * c.c1));
  CHECK(k4.c2 == Approx(2.0 * c.c2));
  CHECK(k4.c3 == Approx(4.0 * c.c3));

  // cross identity holds away from psi = 1 as well
  const auto g = stability_constants(7, 1e-3, 0.37, 11.0, 9.0, 2.0);
  CHECK(g.c3_cross == Approx(g.c3).epsilon(1e-12));

  CHECK_THROWS_AS(stability_constants(1, 1.0, 0.0, 1.0, 1.0, 1.0), std::domain_error);
  CHECK_THROWS_AS(stability_constants(1, 1.0, 2.0, 1.0, 1.0, 1.0), std::domain_error);
}

TEST_CASE("scaling verification on synthetic traces") {
  // exact sqrt(phi) growth fits exponent 1/2
  std::vector<PhiRunStats> runs;
  for (double phi : {5.0, 15.0, 25.0, 35.0}) {
    PhiRunStats s;
    s.phi = phi;
    s.steady_qhat_l1 = 3.0 * std::sqrt(phi);
    s.steady_rate = {1.0 - 0.1 / std::sqrt(phi), 2.0 - 0.2 / std::sqrt(phi)};
    s.bound = 1e9;
    runs.push_back(s);
  }
  const auto rep = verify_scaling(runs);
  CHECK(rep.runs_used == 4);
  CHECK(rep.all_bounds_hold);
  CHECK(rep.fitted_exponent == Approx(0.5).epsilon(0.05));
  CHECK(rep.gap_nonincreasing);

  // constant traces fit exponent 0
  std::vector<PhiRunStats> flat;
  for (double phi : {5.0, 15.0, 25.0}) {
    PhiRunStats s;
    s.phi = phi;
    s.steady_qhat_l1 = 42.0;
    s.steady_rate = {1.0};
    s.bound = 1e9;
    flat.push_back(s);
  }
  CHECK(verify_scaling(flat).fitted_exponent == Approx(0.0).epsilon(0.05));

  // unconverged runs are excluded with a warning
  auto mixed = runs;
  mixed[1].converged = false;
  const auto rep2 = verify_scaling(mixed);
  CHECK(rep2.runs_used == 3);
  CHECK(!rep2.warnings.empty());

  // bound violations are reported
  auto violated = runs;
  violated[0].bound = 0.1;
  CHECK_FALSE(verify_scaling(violated).all_bounds_hold);
}
