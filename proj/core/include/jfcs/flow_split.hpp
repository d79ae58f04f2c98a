#ifndef JFCS_FLOW_SPLIT_HPP
#define JFCS_FLOW_SPLIT_HPP

#include <cmath>
#include <span>
#include <string>
#include <vector>

namespace jfcs {

/// Power-law learning rates eta_x[t] = 1/(t+1)^e_x for the three-step
/// procedure. Valid schedules need 0.5 < e_u < e_theta < e_beta <= 1.
struct LearningSchedule {
  double e_u = 0.51;
  double e_theta = 0.55;
  double e_beta = 0.60;

  double eta_u(int frame) const { return std::pow(frame + 1.0, -e_u); }
  double eta_theta(int frame) const { return std::pow(frame + 1.0, -e_theta); }
  double eta_beta(int frame) const { return std::pow(frame + 1.0, -e_beta); }
};

/// Analytic schedule validation; returns an empty list when the exponents
/// give square-summable, non-summable, timescale-separated rates.
std::vector<std::string> validate_schedule(const LearningSchedule& s);

/// One slot's contribution to a path's utility observation:
/// (q / tau) * (rate - beta * arrival). Summed over a frame by the caller.
double utility_observation(double q, double tau, double rate, double beta, double arrival);

/// uhat' = uhat + eta_u * 1{selected} * (ubar - uhat)
double update_utility_estimate(double uhat, double ubar, double eta_u, bool selected);

/// thetahat' = thetahat + eta_theta * 1{selected} * (ubar - uhat - thetahat)
double update_regret_estimate(double thetahat, double ubar, double uhat, double eta_theta,
                              bool selected);

/// Entropy-regularized best response: softmax of lambda * [thetahat]^+,
/// computed with max-subtraction.
std::vector<double> best_response(std::span<const double> thetahat, double lambda);

/// beta' = beta + eta_beta * (f - beta); stays on the simplex when beta and
/// f are on it.
void update_flow_split(std::span<double> beta, std::span<const double> f, double eta_beta);

/// Per-flow learning state over the global RU index space. Only the current
/// path set of a flow participates in updates; the frame-level split is the
/// state restricted to the path set and renormalized.
struct RlState {
  std::vector<double> uhat;      // size J
  std::vector<double> thetahat;  // size J
  std::vector<double> beta;      // size J, zero off the initial path set

  explicit RlState(int num_rus)
      : uhat(num_rus, 0.0), thetahat(num_rus, 0.0), beta(num_rus, 0.0) {}
};

}  // namespace jfcs

#endif
