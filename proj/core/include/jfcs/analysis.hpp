#ifndef JFCS_ANALYSIS_HPP
#define JFCS_ANALYSIS_HPP

#include <span>
#include <string>
#include <vector>

namespace jfcs {

/// Quadratic Lyapunov value (sum q^2 + sum qhat^2) / (2 tau^2).
double lyapunov(std::span<const double> q, std::span<const double> qhat, double tau);

struct DriftBound {
  double upper = 0.0;   // linear terms + second-moment term
  double second_moment = 0.0;  // B[t_s]
};

/// Per-slot drift upper bound evaluated with realized quantities:
///   sum_links (q/tau)(inflow - r) + sum_ues (qhat/tau)(a - r_ue) + B.
/// inflow is beta*A per link; links and per-UE vectors follow the caller's
/// flattening.
DriftBound drift_upper_bound(std::span<const double> q, std::span<const double> inflow,
                             std::span<const double> rate_link, std::span<const double> qhat,
                             std::span<const double> admitted, std::span<const double> rate_ue,
                             double tau);

struct StabilityConstants {
  double c1 = 0.0;
  double c2 = 0.0;
  double c3 = 0.0;

  /// c3 recomputed from the closed form in K, Psi, psi directly; equals the
  /// primary definition identically.
  double c3_cross = 0.0;
};

/// C1 = sqrt(K tau^2 Psi (A1max + rmax^2) / 2), C2 = C1/(psi tau),
/// C3 = Psi C1^2 / (2 psi^2 tau^2). Throws std::domain_error for psi <= 0 or
/// Psi < psi.
StabilityConstants stability_constants(int num_ues, double tau, double psi, double big_psi,
                                   double a1_max, double r_max);

struct PhiRunStats {
  double phi = 0.0;
  double steady_qhat_l1 = 0.0;
  std::vector<double> steady_rate;  // per-UE steady admitted rate
  double bound = 0.0;               // tau Psi K Amax phi + sqrt(K) C1 sqrt(phi)
  bool converged = true;
};

struct ScalingReport {
  bool all_bounds_hold = false;
  double fitted_exponent = 0.0;   // slope of log qhat_l1 vs log phi
  bool gap_nonincreasing = false;  // ||a(phi) - a_ref|| nonincreasing in phi
  int runs_used = 0;
  std::vector<std::string> warnings;
  std::string text;  // human-readable summary
};

/// Cross-run verification over >= 3 values of phi: per-run queue bound,
/// log-log growth exponent, and monotone shrinkage of the rate gap to the
/// largest-phi run. Unconverged runs are excluded with a warning.
ScalingReport verify_scaling(std::vector<PhiRunStats> runs);

}  // namespace jfcs

#endif
