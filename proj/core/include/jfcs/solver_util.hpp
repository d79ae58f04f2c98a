#ifndef JFCS_SOLVER_UTIL_HPP
#define JFCS_SOLVER_UTIL_HPP

#include <span>

namespace jfcs {

/// Euclidean projection onto {x >= 0, sum(x) <= cap}. Clips negatives; when
/// the clipped sum still exceeds cap, projects onto the simplex sum(x) = cap
/// by the sort-and-threshold rule.
void project_capped_simplex(std::span<double> x, double cap);

}  // namespace jfcs

#endif
