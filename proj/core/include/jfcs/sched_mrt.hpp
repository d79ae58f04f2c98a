#ifndef JFCS_SCHED_MRT_HPP
#define JFCS_SCHED_MRT_HPP

#include <optional>
#include <span>
#include <vector>

#include "jfcs/channel.hpp"

namespace jfcs {

/// Concave lower bound of ln(1 + v/z) expanded at (vbar, zbar):
///   ln(1+vbar/zbar) - vbar/zbar + 2 sqrt(vbar v)/zbar - vbar (z+v)/(zbar (zbar+vbar))
/// Tight (with matching gradient) at the expansion point.
double concave_lower_bound(double v, double z, double vbar, double zbar);

struct MrtSolverConfig {
  int max_outer_iters = 50;
  int max_inner_iters = 500;
  double rel_obj_tol = 1e-5;
  double grad_mapping_tol = 1e-6;  // on normalized variables
  double feas_tol_rel = 1e-7;
  int max_feasibility_rounds = 20;
  int max_penalty_doublings = 24;
};

/// One (UE, RU) transmission under maximum-ratio beams. Everything in SI:
/// watts, Hz, bits/s.
struct MrtLink {
  int ue = 0;
  int ru = 0;
  double nu = 0.0;        // ||h||^2
  double min_rate = 0.0;  // bits/s required this slot; <= 0 means inactive
};

/// Power-control instance for one slot. interference[l][m] is the
/// coefficient of p_m in the denominator Phi_l; zero on the diagonal.
struct MrtInstance {
  std::vector<MrtLink> links;
  std::vector<std::vector<double>> interference;
  std::vector<double> weight;    // per UE: qhat/tau (any consistent scale)
  std::vector<double> p_max_ru;  // indexed by RU id
  double noise_w = 0.0;
  double bandwidth_hz = 0.0;

  int num_links() const { return static_cast<int>(links.size()); }
};

/// Builds the instance from a channel realization and the active path sets
/// (active[ue] = list of RU ids).
MrtInstance make_mrt_instance(const ChannelRealization& ch,
                              const std::vector<std::vector<int>>& active,
                              std::span<const double> weight, std::span<const double> min_rate_ue_ru,
                              double p_max_w, double noise_w, double bandwidth_hz);

/// True SINR of link l at power vector p.
double mrt_sinr(const MrtInstance& inst, std::span<const double> p, int link);

/// True per-link rates W log2(1 + sinr), bits/s.
std::vector<double> mrt_rates(const MrtInstance& inst, std::span<const double> p);

/// Weighted sum rate: sum_l weight[ue(l)] * r_l(p).
double mrt_objective(const MrtInstance& inst, std::span<const double> p);

/// Maximizes the surrogate objective expanded at p_expand, starting from the
/// feasible p_start, subject to per-RU power caps and the active minimum-rate
/// constraints (exact penalty, weight doubled until feasible). The returned
/// point never decreases the surrogate objective relative to p_start.
std::vector<double> solve_inner_convex(const MrtInstance& inst, std::span<const double> p_expand,
                                       std::span<const double> p_start,
                                       const MrtSolverConfig& cfg);

/// Feasibility bootstrap: maximizes the minimum constraint slack until it is
/// positive. nullopt when provably or numerically infeasible.
std::optional<std::vector<double>> find_feasible_init(const MrtInstance& inst,
                                                      const MrtSolverConfig& cfg);

struct MrtScheduleResult {
  bool feasible = false;  // false: minimum-rate set unattainable, no powers
  std::vector<double> powers;
  std::vector<double> rates;  // true per-link rates, bits/s
  std::vector<double> objective_trace;  // true weighted sum rate per IA iteration
  int iterations = 0;
};

/// Full inner-approximation loop: feasibility phase, then successive concave
/// surrogate maximization until the relative objective change is below tol.
MrtScheduleResult ia_schedule(const MrtInstance& inst, const MrtSolverConfig& cfg = {},
                              std::span<const double> warm_start = {});

}  // namespace jfcs

#endif
