#include "jfcs/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace jfcs {

double lyapunov(std::span<const double> q, std::span<const double> qhat, double tau) {
  if (tau <= 0.0) throw std::domain_error("lyapunov: tau must be > 0");
  double s = 0.0;
  for (double v : q) {
    if (v < 0.0) throw std::domain_error("lyapunov: negative queue");
    s += v * v;
  }
  for (double v : qhat) {
    if (v < 0.0) throw std::domain_error("lyapunov: negative queue");
    s += v * v;
  }
  return s / (2.0 * tau * tau);
}

DriftBound drift_upper_bound(std::span<const double> q, std::span<const double> inflow,
                             std::span<const double> rate_link, std::span<const double> qhat,
                             std::span<const double> admitted, std::span<const double> rate_ue,
                             double tau) {
  if (q.size() != inflow.size() || q.size() != rate_link.size() || qhat.size() != admitted.size() ||
      qhat.size() != rate_ue.size())
    throw std::invalid_argument("drift_upper_bound: size mismatch");
  DriftBound out;
  double linear = 0.0;
  for (std::size_t i = 0; i < q.size(); ++i) {
    const double diff = inflow[i] - rate_link[i];
    linear += q[i] / tau * diff;
    out.second_moment += 0.5 * diff * diff;
  }
  for (std::size_t k = 0; k < qhat.size(); ++k) {
    const double diff = admitted[k] - rate_ue[k];
    linear += qhat[k] / tau * diff;
    out.second_moment += 0.5 * diff * diff;
  }
  out.upper = linear + out.second_moment;
  return out;
}

StabilityConstants stability_constants(int num_ues, double tau, double psi, double big_psi,
                                   double a1_max, double r_max) {
  if (psi <= 0.0) throw std::domain_error("stability_constants: psi must be > 0");
  if (big_psi < psi) throw std::domain_error("stability_constants: Psi must be >= psi");
  if (num_ues < 1 || tau <= 0.0 || a1_max < 0.0 || r_max < 0.0)
    throw std::domain_error("stability_constants: bad inputs");
  const double k = static_cast<double>(num_ues);
  const double moment = a1_max + r_max * r_max;
  StabilityConstants c;
  c.c1 = std::sqrt(0.5 * k * tau * tau * big_psi * moment);
  c.c2 = c.c1 / (psi * tau);
  c.c3 = big_psi * c.c1 * c.c1 / (2.0 * psi * psi * tau * tau);
  c.c3_cross = k * big_psi * big_psi * moment / (4.0 * psi * psi);
  return c;
}

ScalingReport verify_scaling(std::vector<PhiRunStats> runs) {
  ScalingReport rep;
  std::vector<PhiRunStats> usable;
  for (auto& r : runs) {
    if (r.converged)
      usable.push_back(std::move(r));
    else
      rep.warnings.push_back("run at phi=" + std::to_string(r.phi) + " not converged, excluded");
  }
  if (usable.size() < 3) {
    rep.warnings.emplace_back("fewer than 3 converged runs, scaling fit skipped");
    rep.text = "verify_scaling: insufficient converged runs";
    return rep;
  }
  std::sort(usable.begin(), usable.end(),
            [](const PhiRunStats& a, const PhiRunStats& b) { return a.phi < b.phi; });
  rep.runs_used = static_cast<int>(usable.size());

  rep.all_bounds_hold = true;
  for (const auto& r : usable)
    if (r.steady_qhat_l1 > r.bound) rep.all_bounds_hold = false;

  // least-squares slope of log(qhat) on log(phi)
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(usable.size());
  for (const auto& r : usable) {
    const double x = std::log(r.phi);
    const double y = std::log(std::max(r.steady_qhat_l1, 1e-300));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  rep.fitted_exponent = (n * sxy - sx * sy) / (n * sxx - sx * sx);

  // gap to the largest-phi steady rate vector, expected nonincreasing in phi
  const auto& ref = usable.back().steady_rate;
  std::vector<double> gaps;
  for (const auto& r : usable) {
    double g2 = 0.0;
    for (std::size_t k = 0; k < ref.size() && k < r.steady_rate.size(); ++k) {
      const double d = r.steady_rate[k] - ref[k];
      g2 += d * d;
    }
    gaps.push_back(std::sqrt(g2));
  }
  rep.gap_nonincreasing = true;
  for (std::size_t i = 1; i < gaps.size(); ++i)
    if (gaps[i] > gaps[i - 1] + 1e-12) rep.gap_nonincreasing = false;

  std::ostringstream os;
  os << "verify_scaling over " << rep.runs_used << " runs\n";
  os << "  queue bound: " << (rep.all_bounds_hold ? "holds for every run" : "VIOLATED") << "\n";
  os << "  fitted log-log exponent of steady ||qhat||_1 vs phi: " << rep.fitted_exponent << "\n";
  os << "  rate gap to largest-phi run nonincreasing: " << (rep.gap_nonincreasing ? "yes" : "no")
     << "\n";
  for (std::size_t i = 0; i < usable.size(); ++i) {
    os << "  phi=" << usable[i].phi << "  steady ||qhat||_1=" << usable[i].steady_qhat_l1
       << "  bound=" << usable[i].bound << "  gap=" << gaps[i] << "\n";
  }
  rep.text = os.str();
  return rep;
}

}  // namespace jfcs
