#include "jfcs/queueing.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace jfcs {

double update_physical_queue(double q, double beta, double arrival_rate, double service_rate,
                             double tau) {
  if (q < 0.0 || arrival_rate < 0.0 || service_rate < 0.0 || tau < 0.0)
    throw std::domain_error("update_physical_queue: negative input");
  if (beta < 0.0 || beta > 1.0)
    throw std::domain_error("update_physical_queue: beta outside [0,1]");
  return std::max(0.0, q + beta * arrival_rate * tau - service_rate * tau);
}

double update_virtual_queue(double qhat, double admitted_rate, double service_rate, double tau) {
  if (qhat < 0.0 || admitted_rate < 0.0 || service_rate < 0.0 || tau < 0.0)
    throw std::domain_error("update_virtual_queue: negative input");
  return std::max(0.0, qhat + admitted_rate * tau - service_rate * tau);
}

DelayBudget::DelayBudget(int num_ues, int num_rus, double mean_arrival, double dbar, double eps,
                         double tau)
    : num_ues_(num_ues),
      num_rus_(num_rus),
      mean_arrival_(mean_arrival),
      slack_((1.0 - eps) * mean_arrival * dbar),
      tau_(tau),
      admitted_(static_cast<std::size_t>(num_ues) * num_rus, 0.0),
      served_(static_cast<std::size_t>(num_ues) * num_rus, 0.0) {
  if (num_ues < 1 || num_rus < 1) throw std::invalid_argument("DelayBudget: bad dimensions");
  if (eps <= 0.0 || eps > 1.0) throw std::invalid_argument("DelayBudget: eps outside (0,1]");
  if (dbar < 0.0 || tau <= 0.0 || mean_arrival < 0.0)
    throw std::invalid_argument("DelayBudget: negative parameter");
}

void DelayBudget::begin_slot(std::span<const double> beta) {
  if (beta.size() != admitted_.size()) throw std::invalid_argument("DelayBudget: beta size");
  for (std::size_t i = 0; i < admitted_.size(); ++i)
    admitted_[i] += beta[i] * mean_arrival_ * tau_;
}

void DelayBudget::end_slot(std::span<const double> rates) {
  if (rates.size() != served_.size()) throw std::invalid_argument("DelayBudget: rates size");
  for (std::size_t i = 0; i < served_.size(); ++i) served_[i] += rates[i] * tau_;
}

double DelayBudget::value(int ue, int ru) const {
  const std::size_t i = idx(ue, ru);
  return admitted_[i] - slack_ - served_[i];
}

double stability_metric(std::span<const double> trace, double tail_fraction) {
  if (tail_fraction <= 0.0 || tail_fraction > 1.0)
    throw std::invalid_argument("stability_metric: tail fraction outside (0,1]");
  const std::size_t n = trace.size();
  const auto window = static_cast<std::size_t>(std::ceil(tail_fraction * static_cast<double>(n)));
  if (n == 0 || window == 0 || window > n)
    throw std::invalid_argument("stability_metric: trace shorter than warmup");
  double sum = 0.0;
  for (std::size_t i = n - window; i < n; ++i) sum += trace[i];
  return sum / static_cast<double>(window);
}

bool is_unstable(std::span<const double> trace, double tail_fraction, double threshold) {
  return stability_metric(trace, tail_fraction) > threshold;
}

}  // namespace jfcs
