#ifndef JFCS_SCHED_ZFBF_HPP
#define JFCS_SCHED_ZFBF_HPP

#include <Eigen/Dense>

#include <span>
#include <vector>

#include "jfcs/channel.hpp"

namespace jfcs {

struct ZfSolverConfig {
  double bisect_delta_rel = 1e-12;  // bracket width target, relative to the initial upper bound
  double rank_tol = 1e-12;          // relative R-diagonal threshold for rank detection
  double degenerate_gain = 1e-15;   // nutilde below this drops the UE from the RU for the slot
  bool want_beamformers = false;
};

/// Orthonormal basis of the orthogonal complement of the column space of
/// h_minus (the null space of h_minus^H), via column-pivoted Householder QR.
/// Rank deficiency widens the basis. h_minus may have zero columns, in which
/// case the identity basis is returned.
Eigen::MatrixXcd null_space_basis(const Eigen::MatrixXcd& h_minus, double rank_tol = 1e-12);

/// Minimum power meeting the running rate budget rbar (bits) over bandwidth
/// w_hz in a slot of length tau: (N0/nutilde) (2^(rbar/(w tau)) - 1), zero
/// when rbar <= 0.
double min_power(double rbar_bits, double w_hz, double tau, double nutilde, double noise_w);

/// Water-filling power at multiplier mu:
///   max(p_min, qhat W / (tau mu ln2) - N0/nutilde).
double waterfill_power(double mu, double qhat, double w_hz, double tau, double nutilde,
                       double noise_w, double p_min);

struct WaterfillItem {
  double qhat = 0.0;     // scheduler weight numerator (any consistent scale)
  double nutilde = 0.0;  // effective channel gain after projection
  double p_min = 0.0;
};

struct BisectResult {
  double mu = 0.0;
  std::vector<double> powers;
  bool budget_tight = false;
};

/// Per-RU bisection on the power-budget multiplier. Requires
/// sum(p_min) <= p_max (throws std::domain_error otherwise, with the first
/// offending item in the message).
BisectResult bisect_mu(std::span<const WaterfillItem> items, double p_max, double w_hz,
                       double tau, double noise_w, const ZfSolverConfig& cfg = {});

struct ZfScheduleResult {
  // flattened [ue * num_rus + ru]; zero where inactive
  std::vector<double> rates;   // bits/s
  std::vector<double> powers;  // watts
  int dropped_min_rus = 0;          // RUs with an unattainable minimum-rate set this slot
  int dropped_min_constraints = 0;  // individual minimum-power demands shed
  int dropped_degenerate = 0;       // (ue, ru) pairs dropped for vanishing projected gain
  // beamformers[ue * num_rus + ru], each length M; filled when requested
  std::vector<Eigen::VectorXcd> beamformers;
};

/// Zero-forcing scheduler for one slot. active[ue] lists the RU ids carrying
/// the flow; each RU independently projects co-scheduled channels, computes
/// per-UE minimum powers from min_rate (bits/s; <= 0 inactive) and
/// water-fills the remaining budget. Rates use per-RU bandwidth w_prime_hz
/// with no interference terms. Throws std::runtime_error when a RU
/// co-schedules as many UEs as it has antennas or more.
ZfScheduleResult zf_schedule(const ChannelRealization& ch,
                             const std::vector<std::vector<int>>& active,
                             std::span<const double> weight, std::span<const double> min_rate_ue_ru,
                             double p_max_w, double w_prime_hz, double tau, double noise_w,
                             const ZfSolverConfig& cfg = {});

/// Benchmark variant: equal power split among the RU's co-scheduled UEs,
/// same zero-forcing geometry, minimum-rate constraints ignored.
ZfScheduleResult zf_schedule_equal_power(const ChannelRealization& ch,
                                         const std::vector<std::vector<int>>& active,
                                         double p_max_w, double w_prime_hz, double noise_w,
                                         const ZfSolverConfig& cfg = {});

}  // namespace jfcs

#endif
