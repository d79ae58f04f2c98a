#include "jfcs/solver_util.hpp"

#include <algorithm>
#include <vector>

namespace jfcs {

void project_capped_simplex(std::span<double> x, double cap) {
  double clipped_sum = 0.0;
  for (double v : x) clipped_sum += std::max(v, 0.0);
  if (clipped_sum <= cap) {
    for (auto& v : x) v = std::max(v, 0.0);
    return;
  }
  // Projection onto {x >= 0, sum = cap}: find tau with sum(max(x - tau, 0)) = cap.
  std::vector<double> sorted(x.begin(), x.end());
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  double running = 0.0;
  double tau = 0.0;
  for (std::size_t k = 0; k < sorted.size(); ++k) {
    running += sorted[k];
    const double cand = (running - cap) / static_cast<double>(k + 1);
    if (k + 1 == sorted.size() || sorted[k + 1] <= cand) {
      tau = cand;
      break;
    }
  }
  for (auto& v : x) v = std::max(v - tau, 0.0);
}

}  // namespace jfcs
