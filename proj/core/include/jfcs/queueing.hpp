#ifndef JFCS_QUEUEING_HPP
#define JFCS_QUEUEING_HPP

#include <span>
#include <vector>

namespace jfcs {

/// One slot of the per-(flow, RU) physical queue:
/// max(0, q + beta*A*tau - r*tau). Throws std::domain_error on negative
/// inputs or beta outside [0, 1].
double update_physical_queue(double q, double beta, double arrival_rate, double service_rate,
                             double tau);

/// One slot of the per-flow virtual queue: max(0, qhat + a*tau - r*tau).
double update_virtual_queue(double qhat, double admitted_rate, double service_rate, double tau);

/// Running minimum-service budget per (flow, RU):
///   Rbar[t_s] = sum_{l<=t_s} beta[l]*Abar*tau - (1-eps)*Abar*dbar
///             - sum_{l<t_s} r[l]*tau
/// Call begin_slot before scheduling (accumulates the admitted budget for the
/// slot) and end_slot after (accumulates realized service). value() may be
/// negative, meaning the constraint is inactive.
class DelayBudget {
 public:
  DelayBudget() = default;
  DelayBudget(int num_ues, int num_rus, double mean_arrival, double dbar, double eps, double tau);

  void begin_slot(std::span<const double> beta);   // beta flattened [ue*num_rus + ru]
  void end_slot(std::span<const double> rates);    // same layout, service rates
  double value(int ue, int ru) const;

  double admitted(int ue, int ru) const { return admitted_[idx(ue, ru)]; }
  double served(int ue, int ru) const { return served_[idx(ue, ru)]; }

 private:
  std::size_t idx(int ue, int ru) const { return static_cast<std::size_t>(ue) * num_rus_ + ru; }
  int num_ues_ = 0;
  int num_rus_ = 0;
  double mean_arrival_ = 0.0;
  double slack_ = 0.0;  // (1-eps)*Abar*dbar
  double tau_ = 0.0;
  std::vector<double> admitted_;
  std::vector<double> served_;
};

/// Tail-window mean of a queue-length trace (limsup estimator). The window is
/// the final tail_fraction of the samples, at least one. Throws
/// std::invalid_argument if the trace is shorter than the implied warmup.
double stability_metric(std::span<const double> trace, double tail_fraction);

/// Divergence flag: tail mean above the configured blow-up threshold.
bool is_unstable(std::span<const double> trace, double tail_fraction, double threshold);

}  // namespace jfcs

#endif
