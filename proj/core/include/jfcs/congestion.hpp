#ifndef JFCS_CONGESTION_HPP
#define JFCS_CONGESTION_HPP

#include <functional>

namespace jfcs {

/// Twice-differentiable increasing strictly concave utility, with its
/// derivative and inverse derivative. Rates are in configured rate units
/// (Gbps by default at the harness level).
struct UtilityFunction {
  std::function<double(double)> value;
  std::function<double(double)> deriv;
  /// Inverse of deriv for y > 0; may return values outside [0, domain_max]
  /// (callers clamp). Never called with y <= 0.
  std::function<double(double)> deriv_inv;
  double domain_max = 0.0;  // rbar_max
};

/// Proportional-fairness style log utility: U(a) = ln(offset + a).
UtilityFunction make_log_utility(double offset = 1e-3, double domain_max = 3.0);

/// Closed-form congestion control rate:
///   a* = clamp(Uinv(qhat / (phi*tau)), 0, a_max)
/// with qhat = 0 mapping to a_max. Throws std::domain_error on bad inputs.
double optimal_rate(double qhat, double phi, double tau, double a_max,
                    const UtilityFunction& u);

struct CurvatureBounds {
  double psi = 0.0;  // min of -U'' on the grid
  double big_psi = 0.0;  // max of -U''
};

/// Numerical curvature bounds of -U'' over [lo, hi] via central differences
/// on a uniform grid (>= 2 points). Throws std::domain_error if non-concavity
/// is detected anywhere on the grid.
CurvatureBounds curvature_bounds(const UtilityFunction& u, double lo, double hi, int grid_points);

/// Finite-difference check that U is increasing and strictly concave at the
/// sampled grid points.
bool check_assumptions(const UtilityFunction& u, double lo, double hi, int grid_points);

}  // namespace jfcs

#endif
