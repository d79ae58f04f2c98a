#ifndef JFCS_SIM_HPP
#define JFCS_SIM_HPP

#include <string>
#include <vector>

#include "jfcs/analysis.hpp"
#include "jfcs/config.hpp"

namespace jfcs {

struct SimulationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// One slot of per-UE observables, internal rate units.
struct SlotRecord {
  int frame = 0;  // 1-based
  int slot = 0;   // 1-based within the frame
  std::vector<double> admitted;   // a_k
  std::vector<double> rate;       // r_k (total over paths)
  std::vector<double> qhat;       // virtual queues
  std::vector<double> sum_q;      // per-UE sum of physical queues
  double lyap = 0.0;
  double drift = 0.0;
  double drift_ub = 0.0;
  double second_moment = 0.0;  // B term inside the bound
};

struct FramePathRecord {
  int frame = 0;
  int ue = 0;
  int ru = 0;
  double beta = 0.0;
  double uhat = 0.0;
  double thetahat = 0.0;
};

struct RunSummary {
  double steady_a_norm = 0.0;    // tail mean of ||a[t_s]||_2, rate units
  double steady_qhat_l1 = 0.0;   // tail mean of ||qhat||_1, rate-unit-seconds
  double worst_delay_s = 0.0;    // max_k steady qhat_k / mean arrival
  std::vector<double> steady_a_ue;
  std::vector<double> steady_r_ue;
  int slots_to_steady = 0;       // first slot staying within 10% of steady ||a||
  int drift_violations = 0;      // slots with dL > dL_ub
  long min_rate_drops = 0;       // minimum-rate constraints dropped (infeasible)
  long degenerate_drops = 0;     // vanishing projected gains (ZFBF)
  double b_max = 0.0;            // largest realized second-moment term
  double r_max_capacity = 0.0;   // capacity bound on any flow rate, rate units
  double psi = 0.0, big_psi = 0.0;
  double c1 = 0.0, c2 = 0.0, c3 = 0.0;
  double queue_growth_bound = 0.0;  // tau Psi K Amax phi + sqrt(K) C1 sqrt(phi)
  bool queue_bound_holds = false;
  bool unstable = false;
};

struct RunTrace {
  SimConfig cfg;
  std::vector<SlotRecord> slots;        // frames * slots_per_frame entries
  std::vector<FramePathRecord> frames;  // per frame, per (ue, path)
  RunSummary summary;
};

/// Two-timescale loop: per frame, path-set selection and the three-step
/// flow-split update; per slot, closed-form congestion control, the chosen
/// scheduler, queue updates and drift bookkeeping. Scheduler infeasibility is
/// logged in the summary, never fatal.
RunTrace run_simulation(const SimConfig& cfg);

/// Benchmark schemes share the loop with overridden splits or power rules.
RunTrace run_benchmark(Scheme scheme, SimConfig cfg);

struct SweepResult {
  std::string parameter;
  std::vector<double> values;
  std::vector<RunSummary> summaries;  // sorted by parameter value
  ScalingReport scaling;              // filled for phi sweeps
  bool scaling_ran = false;
};

/// Runs one simulation per value of "phi", "M" or "lambda" (workers in
/// parallel, deterministic merge). Per-run failures are isolated into the
/// report.
SweepResult sweep(const SimConfig& base, const std::string& parameter,
                  const std::vector<double>& values);

/// Stats bundle handed to analysis::verify_scaling.
PhiRunStats phi_stats_from_summary(const RunSummary& s, double phi);

}  // namespace jfcs

#endif
