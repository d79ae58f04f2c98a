#include "jfcs/congestion.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace jfcs {

UtilityFunction make_log_utility(double offset, double domain_max) {
  if (offset <= 0.0) throw std::invalid_argument("log utility: offset must be > 0");
  UtilityFunction u;
  u.value = [offset](double a) { return std::log(offset + a); };
  u.deriv = [offset](double a) { return 1.0 / (offset + a); };
  u.deriv_inv = [offset](double y) { return 1.0 / y - offset; };
  u.domain_max = domain_max;
  return u;
}

double optimal_rate(double qhat, double phi, double tau, double a_max,
                    const UtilityFunction& u) {
  if (qhat < 0.0) throw std::domain_error("optimal_rate: qhat must be >= 0");
  if (phi <= 0.0 || tau <= 0.0) throw std::domain_error("optimal_rate: phi and tau must be > 0");
  if (a_max < 0.0) throw std::domain_error("optimal_rate: a_max must be >= 0");
  const double y = qhat / (phi * tau);
  if (y <= 0.0) return a_max;  // U'^{-1}(0+) = +inf for any admissible utility
  const double a = u.deriv_inv(y);
  return std::clamp(a, 0.0, a_max);
}

CurvatureBounds curvature_bounds(const UtilityFunction& u, double lo, double hi,
                                 int grid_points) {
  if (grid_points < 2) throw std::invalid_argument("curvature_bounds: need >= 2 grid points");
  if (!(hi > lo)) throw std::invalid_argument("curvature_bounds: empty domain");
  CurvatureBounds b{std::numeric_limits<double>::infinity(), 0.0};
  for (int i = 0; i < grid_points; ++i) {
    const double a = lo + (hi - lo) * i / (grid_points - 1);
    const double h = 1e-5 * std::max(std::abs(a), 1e-3);
    const double second = (u.value(a + h) - 2.0 * u.value(a) + u.value(a - h)) / (h * h);
    const double curv = -second;
    if (curv <= 0.0)
      throw std::domain_error("curvature_bounds: utility not strictly concave on the domain");
    b.psi = std::min(b.psi, curv);
    b.big_psi = std::max(b.big_psi, curv);
  }
  return b;
}

bool check_assumptions(const UtilityFunction& u, double lo, double hi, int grid_points) {
  for (int i = 0; i < grid_points; ++i) {
    const double a = lo + (hi - lo) * i / (grid_points - 1);
    const double h = 1e-5 * std::max(std::abs(a), 1e-3);
    const double first = (u.value(a + h) - u.value(a - h)) / (2.0 * h);
    const double second = (u.value(a + h) - 2.0 * u.value(a) + u.value(a - h)) / (h * h);
    if (first <= 0.0 || second >= 0.0) return false;
  }
  return true;
}

}  // namespace jfcs
