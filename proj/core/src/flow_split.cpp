#include "jfcs/flow_split.hpp"

#include <algorithm>
#include <stdexcept>

namespace jfcs {

std::vector<std::string> validate_schedule(const LearningSchedule& s) {
  std::vector<std::string> violations;
  const double exps[3] = {s.e_u, s.e_theta, s.e_beta};
  const char* names[3] = {"e_u", "e_theta", "e_beta"};
  for (int i = 0; i < 3; ++i) {
    if (exps[i] <= 0.5)
      violations.push_back(std::string(names[i]) + " <= 0.5: rates not square-summable");
    if (exps[i] > 1.0)
      violations.push_back(std::string(names[i]) + " > 1: rates summable (not persistent)");
  }
  if (!(s.e_u < s.e_theta))
    violations.emplace_back("e_u >= e_theta: utility/regret timescales not separated");
  if (!(s.e_theta < s.e_beta))
    violations.emplace_back("e_theta >= e_beta: regret/split timescales not separated");
  return violations;
}

double utility_observation(double q, double tau, double rate, double beta, double arrival) {
  return q / tau * (rate - beta * arrival);
}

double update_utility_estimate(double uhat, double ubar, double eta_u, bool selected) {
  if (eta_u <= 0.0 || eta_u > 1.0) throw std::domain_error("eta_u outside (0,1]");
  if (!selected) return uhat;
  return uhat + eta_u * (ubar - uhat);
}

double update_regret_estimate(double thetahat, double ubar, double uhat, double eta_theta,
                              bool selected) {
  if (eta_theta <= 0.0 || eta_theta > 1.0) throw std::domain_error("eta_theta outside (0,1]");
  if (!selected) return thetahat;
  return thetahat + eta_theta * (ubar - uhat - thetahat);
}

std::vector<double> best_response(std::span<const double> thetahat, double lambda) {
  if (lambda <= 0.0) throw std::domain_error("best_response: lambda must be > 0");
  if (thetahat.empty()) return {};
  std::vector<double> x(thetahat.size());
  double xmax = 0.0;
  for (std::size_t i = 0; i < thetahat.size(); ++i) {
    x[i] = lambda * std::max(thetahat[i], 0.0);
    xmax = std::max(xmax, x[i]);
  }
  double z = 0.0;
  for (auto& v : x) {
    v = std::exp(v - xmax);
    z += v;
  }
  for (auto& v : x) v /= z;
  return x;
}

void update_flow_split(std::span<double> beta, std::span<const double> f, double eta_beta) {
  if (eta_beta <= 0.0 || eta_beta > 1.0) throw std::domain_error("eta_beta outside (0,1]");
  if (beta.size() != f.size()) throw std::invalid_argument("update_flow_split: size mismatch");
  for (std::size_t i = 0; i < beta.size(); ++i) beta[i] += eta_beta * (f[i] - beta[i]);
}

}  // namespace jfcs
