#include "jfcs/sim.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <numeric>

#include "jfcs/congestion.hpp"
#include "jfcs/queueing.hpp"
#include "jfcs/sched_mrt.hpp"
#include "jfcs/sched_zfbf.hpp"

namespace jfcs {

namespace {

std::vector<int> top_gain_paths(const LargeScaleState& ls, int ue, int count) {
  std::vector<int> rus(ls.num_rus);
  std::iota(rus.begin(), rus.end(), 0);
  std::stable_sort(rus.begin(), rus.end(),
                   [&](int a, int b) { return ls.at(a, ue).xi > ls.at(b, ue).xi; });
  rus.resize(std::min<std::size_t>(rus.size(), count));
  std::sort(rus.begin(), rus.end());
  return rus;
}

int nearest_ru(const Topology& topo, const Position& ue_pos) {
  int best = 0;
  double best_d = 1e300;
  for (int ru = 0; ru < static_cast<int>(topo.ru_pos.size()); ++ru) {
    const double d =
        distance_3d(topo.ru_pos[ru], ue_pos, topo.cfg.ru_height_m, topo.cfg.ue_height_m);
    if (d < best_d) {
      best_d = d;
      best = ru;
    }
  }
  return best;
}

double tail_mean(const std::vector<double>& v, double fraction) {
  return stability_metric(v, fraction);
}

int slots_to_within(const std::vector<double>& series, double steady, double rel) {
  if (series.empty() || steady <= 0.0) return 0;
  const int w = std::max<int>(5, static_cast<int>(series.size() / 100));
  std::vector<double> smooth(series.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < series.size(); ++i) {
    acc += series[i];
    if (i >= static_cast<std::size_t>(w)) acc -= series[i - w];
    smooth[i] = acc / std::min<std::size_t>(i + 1, w);
  }
  int first_bad = -1;
  for (int i = static_cast<int>(smooth.size()) - 1; i >= 0; --i) {
    if (std::abs(smooth[i] - steady) > rel * steady) {
      first_bad = i;
      break;
    }
  }
  return first_bad + 2;  // 1-based slot index after the last excursion
}

struct SchedOutcome {
  std::vector<double> rates;  // flattened ue*J + ru, rate units
  long min_rate_drops = 0;
  long degenerate_drops = 0;
};

}  // namespace

RunTrace run_simulation(const SimConfig& cfg) {
  cfg.validate();
  const int num_ues = cfg.topo.num_ues;
  const int num_rus = cfg.topo.num_rus();
  const int pairs = num_ues * num_rus;
  const double tau = cfg.tau_s;
  const double unit = cfg.rate_unit_bps;
  const double noise_w =
      dbm_to_watts(noise_power_dbm(cfg.topo.bandwidth_hz, cfg.topo.noise_figure_db));
  const double w_prime = cfg.topo.bandwidth_hz / num_rus;
  const double abar = 0.5 * (cfg.arrival_lo + cfg.arrival_hi);
  const UtilityFunction utility = make_log_utility(cfg.utility_offset, cfg.arrival_max);

  RngStream placement(cfg.seed, "placement");
  RngStream shadowing(cfg.seed, "shadowing");
  RngStream fading(cfg.seed, "fading");
  RngStream arrivals(cfg.seed, "arrivals");

  const Topology topo = make_topology(cfg.topo, placement);
  std::vector<Position> ue_pos;

  std::vector<double> q(pairs, 0.0);
  std::vector<double> qhat(num_ues, 0.0);
  DelayBudget budget(num_ues, num_rus, abar, cfg.dbar_s, cfg.eps, tau);
  std::vector<RlState> rl(num_ues, RlState(num_rus));
  std::vector<std::vector<int>> paths(num_ues), prev_paths(num_ues);
  std::vector<double> beta_frame(pairs, 0.0);
  std::vector<double> u_acc(pairs, 0.0);

  // MRT warm start carried across slots while the link layout is unchanged
  std::vector<double> mrt_warm;
  std::vector<std::pair<int, int>> mrt_layout;

  RunTrace trace;
  trace.cfg = cfg;
  trace.slots.reserve(static_cast<std::size_t>(cfg.frames) * cfg.slots_per_frame);

  RunSummary& sum = trace.summary;
  std::vector<double> a_norm_series;
  std::vector<double> qhat_l1_series;
  std::vector<std::vector<double>> a_ue_series(num_ues), r_ue_series(num_ues);
  std::vector<std::vector<double>> qhat_ue_series(num_ues);

  // Large-scale coherence tied to placement: static UEs keep their shadowing.
  LargeScaleState ls;
  for (int frame = 1; frame <= cfg.frames; ++frame) {
    const bool redraw = ue_pos.empty() || (cfg.ue_redraw_period > 0 &&
                                           (frame - 1) % cfg.ue_redraw_period == 0);
    if (redraw) {
      ue_pos = draw_ue_positions(cfg.topo, placement);
      ls = make_large_scale(topo, ue_pos, shadowing);
    }

    for (int ue = 0; ue < num_ues; ++ue) {
      if (cfg.scheme == Scheme::num_nru) {
        paths[ue] = {nearest_ru(topo, ue_pos[ue])};
      } else {
        paths[ue] = top_gain_paths(ls, ue, cfg.path_set_size);
      }
    }

    // Three-step update from last frame's per-path observations; every path
    // of the split transmits, so each is treated as selected.
    if (frame > 1) {
      const double eta_u = cfg.schedule.eta_u(frame);
      const double eta_t = cfg.schedule.eta_theta(frame);
      for (int ue = 0; ue < num_ues; ++ue) {
        for (int ru : prev_paths[ue]) {
          const double ubar = u_acc[ue * num_rus + ru];
          auto& s = rl[ue];
          s.uhat[ru] = update_utility_estimate(s.uhat[ru], ubar, eta_u, true);
          s.thetahat[ru] =
              update_regret_estimate(s.thetahat[ru], ubar, s.uhat[ru], eta_t, true);
        }
      }
    }
    std::fill(u_acc.begin(), u_acc.end(), 0.0);

    // Frame split: restricted to the current path set, normalized.
    std::fill(beta_frame.begin(), beta_frame.end(), 0.0);
    for (int ue = 0; ue < num_ues; ++ue) {
      auto& s = rl[ue];
      const auto& p = paths[ue];
      const int np = static_cast<int>(p.size());
      std::vector<double> b(np, 0.0);
      if (frame == 1 || cfg.scheme == Scheme::num_efsd) {
        std::fill(b.begin(), b.end(), 1.0 / np);
      } else if (cfg.scheme == Scheme::num_nru) {
        b[0] = 1.0;
      } else {
        double bsum = 0.0;
        for (int i = 0; i < np; ++i) {
          b[i] = s.beta[p[i]];
          bsum += b[i];
        }
        if (bsum <= 1e-300) {
          std::fill(b.begin(), b.end(), 1.0 / np);
        } else {
          for (auto& v : b) v /= bsum;
        }
        std::vector<double> theta(np);
        for (int i = 0; i < np; ++i) theta[i] = s.thetahat[p[i]];
        const auto f = best_response(theta, cfg.lambda);
        update_flow_split(b, f, cfg.schedule.eta_beta(frame));
      }
      for (int i = 0; i < np; ++i) {
        s.beta[p[i]] = b[i];
        beta_frame[ue * num_rus + p[i]] = b[i];
      }
      trace.frames.reserve(trace.frames.size() + np);
      for (int i = 0; i < np; ++i)
        trace.frames.push_back(
            {frame, ue, p[i], b[i], s.uhat[p[i]], s.thetahat[p[i]]});
    }

    // Scheduled path set: paths carrying a meaningful share (the split's
    // selection vector); the top share is always kept.
    std::vector<std::vector<int>> active(num_ues);
    for (int ue = 0; ue < num_ues; ++ue) {
      int best = paths[ue].front();
      for (int ru : paths[ue])
        if (beta_frame[ue * num_rus + ru] > beta_frame[ue * num_rus + best]) best = ru;
      for (int ru : paths[ue]) {
        if (ru == best || beta_frame[ue * num_rus + ru] >= cfg.beta_active)
          active[ue].push_back(ru);
      }
    }

    std::vector<double> arrival(num_ues);
    for (int ue = 0; ue < num_ues; ++ue) arrival[ue] = arrivals.uniform(cfg.arrival_lo, cfg.arrival_hi);

    for (int slot = 1; slot <= cfg.slots_per_frame; ++slot) {
      const ChannelRealization ch = draw_channel(ls, fading);

      // closed-form congestion control
      std::vector<double> admitted(num_ues);
      for (int ue = 0; ue < num_ues; ++ue)
        admitted[ue] = optimal_rate(qhat[ue], cfg.phi, tau, cfg.arrival_max, utility);

      budget.begin_slot(beta_frame);

      // capacity bound r_k <= sum_paths W log2(1 + P ||h||^2 / N0)
      for (int ue = 0; ue < num_ues; ++ue) {
        double cap = 0.0;
        for (int ru : paths[ue]) {
          double nu = 0.0;
          for (const auto& c : ch.at(ru, ue)) nu += std::norm(c);
          cap += cfg.topo.bandwidth_hz *
                 std::log2(1.0 + cfg.topo.p_max_w * nu / noise_w) / unit;
        }
        sum.r_max_capacity = std::max(sum.r_max_capacity, cap);
      }

      // queue-weighted scheduling
      std::vector<double> weight(num_ues);
      for (int ue = 0; ue < num_ues; ++ue) weight[ue] = qhat[ue] / tau;
      std::vector<double> min_rate_si(pairs, 0.0);
      for (int ue = 0; ue < num_ues; ++ue)
        for (int ru : active[ue])
          min_rate_si[ue * num_rus + ru] = budget.value(ue, ru) * unit / tau;

      SchedOutcome sched;
      sched.rates.assign(pairs, 0.0);
      if (cfg.scheduler == SchedulerKind::zfbf) {
        ZfScheduleResult zr;
        if (cfg.scheme == Scheme::num_fra) {
          zr = zf_schedule_equal_power(ch, active, cfg.topo.p_max_w, w_prime, noise_w, cfg.zf);
        } else {
          zr = zf_schedule(ch, active, weight, min_rate_si, cfg.topo.p_max_w, w_prime, tau,
                           noise_w, cfg.zf);
        }
        for (int i = 0; i < pairs; ++i) sched.rates[i] = zr.rates[i] / unit;
        sched.min_rate_drops = zr.dropped_min_constraints;
        sched.degenerate_drops = zr.dropped_degenerate;
      } else {
        MrtInstance inst = make_mrt_instance(ch, active, weight, min_rate_si, cfg.topo.p_max_w,
                                             noise_w, cfg.topo.bandwidth_hz);
        std::vector<std::pair<int, int>> layout;
        layout.reserve(inst.links.size());
        for (const auto& l : inst.links) layout.emplace_back(l.ue, l.ru);
        if (layout != mrt_layout) {
          mrt_warm.clear();
          mrt_layout = layout;
        }
        if (cfg.scheme == Scheme::num_fra) {
          std::vector<int> count(num_rus, 0);
          for (const auto& l : inst.links) ++count[l.ru];
          std::vector<double> p(inst.links.size());
          for (std::size_t i = 0; i < inst.links.size(); ++i)
            p[i] = cfg.topo.p_max_w / count[inst.links[i].ru];
          const auto rates = mrt_rates(inst, p);
          for (std::size_t i = 0; i < inst.links.size(); ++i)
            sched.rates[inst.links[i].ue * num_rus + inst.links[i].ru] = rates[i] / unit;
        } else {
          MrtScheduleResult mr = ia_schedule(inst, cfg.mrt, mrt_warm);
          if (!mr.feasible) {
            // Delay budgets unattainable this slot: drop them and resolve.
            for (auto& l : inst.links) {
              if (l.min_rate > 0.0) ++sched.min_rate_drops;
              l.min_rate = 0.0;
            }
            mr = ia_schedule(inst, cfg.mrt, mrt_warm);
          }
          mrt_warm = mr.powers;
          for (std::size_t i = 0; i < inst.links.size(); ++i)
            sched.rates[inst.links[i].ue * num_rus + inst.links[i].ru] = mr.rates[i] / unit;
        }
      }
      sum.min_rate_drops += sched.min_rate_drops;
      sum.degenerate_drops += sched.degenerate_drops;

      std::vector<double> rate_ue(num_ues, 0.0);
      for (int ue = 0; ue < num_ues; ++ue)
        for (int ru = 0; ru < num_rus; ++ru) rate_ue[ue] += sched.rates[ue * num_rus + ru];

      // Drift bookkeeping with realized quantities
      std::vector<double> inflow(pairs, 0.0);
      for (int ue = 0; ue < num_ues; ++ue)
        for (int ru : paths[ue])
          inflow[ue * num_rus + ru] = beta_frame[ue * num_rus + ru] * arrival[ue];
      const double lyap_now = lyapunov(q, qhat, tau);
      const DriftBound db = drift_upper_bound(q, inflow, sched.rates, qhat, admitted, rate_ue, tau);
      sum.b_max = std::max(sum.b_max, db.second_moment);

      // Per-path utility observations, queue weights taken before the update
      for (int ue = 0; ue < num_ues; ++ue)
        for (int ru : paths[ue]) {
          const int i = ue * num_rus + ru;
          u_acc[i] += utility_observation(q[i], tau, sched.rates[i], beta_frame[i], arrival[ue]);
        }

      // Queue updates
      for (int ue = 0; ue < num_ues; ++ue) {
        for (int ru : paths[ue]) {
          const int i = ue * num_rus + ru;
          q[i] = update_physical_queue(q[i], beta_frame[i], arrival[ue], sched.rates[i], tau);
        }
        qhat[ue] = update_virtual_queue(qhat[ue], admitted[ue], rate_ue[ue], tau);
      }
      budget.end_slot(sched.rates);

      const double lyap_next = lyapunov(q, qhat, tau);
      const double drift = lyap_next - lyap_now;
      if (drift > db.upper + 1e-9 * std::max(1.0, std::abs(db.upper))) ++sum.drift_violations;

      SlotRecord rec;
      rec.frame = frame;
      rec.slot = slot;
      rec.admitted = admitted;
      rec.rate = rate_ue;
      rec.qhat = qhat;
      rec.sum_q.assign(num_ues, 0.0);
      for (int ue = 0; ue < num_ues; ++ue)
        for (int ru = 0; ru < num_rus; ++ru) rec.sum_q[ue] += q[ue * num_rus + ru];
      rec.lyap = lyap_now;
      rec.drift = drift;
      rec.drift_ub = db.upper;
      rec.second_moment = db.second_moment;
      trace.slots.push_back(std::move(rec));

      double an = 0.0, ql1 = 0.0;
      for (int ue = 0; ue < num_ues; ++ue) {
        an += admitted[ue] * admitted[ue];
        ql1 += qhat[ue];
        a_ue_series[ue].push_back(admitted[ue]);
        r_ue_series[ue].push_back(rate_ue[ue]);
        qhat_ue_series[ue].push_back(qhat[ue]);
      }
      a_norm_series.push_back(std::sqrt(an));
      qhat_l1_series.push_back(ql1);
    }

    prev_paths = paths;
  }

  // Steady-state statistics and bound constants
  sum.steady_a_norm = tail_mean(a_norm_series, cfg.tail_fraction);
  sum.steady_qhat_l1 = tail_mean(qhat_l1_series, cfg.tail_fraction);
  sum.steady_a_ue.resize(num_ues);
  sum.steady_r_ue.resize(num_ues);
  double worst = 0.0;
  for (int ue = 0; ue < num_ues; ++ue) {
    sum.steady_a_ue[ue] = tail_mean(a_ue_series[ue], cfg.tail_fraction);
    sum.steady_r_ue[ue] = tail_mean(r_ue_series[ue], cfg.tail_fraction);
    worst = std::max(worst, tail_mean(qhat_ue_series[ue], cfg.tail_fraction) / std::max(abar, 1e-300));
  }
  sum.worst_delay_s = worst;
  sum.slots_to_steady = slots_to_within(a_norm_series, sum.steady_a_norm, 0.10);
  sum.unstable = is_unstable(qhat_l1_series, cfg.tail_fraction, cfg.instability_threshold);

  const auto curv = curvature_bounds(utility, 0.0, std::max(cfg.arrival_max, 1e-6), 101);
  sum.psi = curv.psi;
  sum.big_psi = curv.big_psi;
  const double a1_max = cfg.arrival_hi * cfg.arrival_hi;
  const auto tc =
      stability_constants(num_ues, tau, curv.psi, curv.big_psi, a1_max, sum.r_max_capacity);
  sum.c1 = tc.c1;
  sum.c2 = tc.c2;
  sum.c3 = tc.c3;
  sum.queue_growth_bound = tau * curv.big_psi * num_ues * cfg.arrival_max * cfg.phi +
                        std::sqrt(static_cast<double>(num_ues)) * tc.c1 * std::sqrt(cfg.phi);
  sum.queue_bound_holds = sum.steady_qhat_l1 <= sum.queue_growth_bound;
  return trace;
}

RunTrace run_benchmark(Scheme scheme, SimConfig cfg) {
  if (scheme == Scheme::jfcs)
    throw ConfigError("run_benchmark expects one of num-fra, num-efsd, num-nru");
  cfg.scheme = scheme;
  return run_simulation(cfg);
}

PhiRunStats phi_stats_from_summary(const RunSummary& s, double phi) {
  PhiRunStats st;
  st.phi = phi;
  st.steady_qhat_l1 = s.steady_qhat_l1;
  st.steady_rate = s.steady_a_ue;
  st.bound = s.queue_growth_bound;
  st.converged = !s.unstable;
  return st;
}

SweepResult sweep(const SimConfig& base, const std::string& parameter,
                  const std::vector<double>& values) {
  if (parameter != "phi" && parameter != "M" && parameter != "lambda")
    throw ConfigError("sweep parameter must be phi, M or lambda");
  SweepResult out;
  out.parameter = parameter;
  out.values = values;
  std::sort(out.values.begin(), out.values.end());
  if (out.values.empty()) return out;

  std::vector<std::future<RunSummary>> futures;
  for (double v : out.values) {
    SimConfig cfg = base;
    if (parameter == "phi") cfg.phi = v;
    else if (parameter == "M") cfg.topo.antennas_per_ru = static_cast<int>(v);
    else cfg.lambda = v;
    futures.push_back(std::async(std::launch::async, [cfg]() {
      return run_simulation(cfg).summary;
    }));
  }
  for (auto& f : futures) out.summaries.push_back(f.get());

  if (parameter == "phi" && out.values.size() >= 3) {
    std::vector<PhiRunStats> stats;
    for (std::size_t i = 0; i < out.values.size(); ++i)
      stats.push_back(phi_stats_from_summary(out.summaries[i], out.values[i]));
    out.scaling = verify_scaling(std::move(stats));
    out.scaling_ran = true;
  }
  return out;
}

}  // namespace jfcs
