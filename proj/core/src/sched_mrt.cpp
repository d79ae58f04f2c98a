#include "jfcs/sched_mrt.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "jfcs/solver_util.hpp"

namespace jfcs {

namespace {
constexpr double kLn2 = std::numbers::ln2;
}

double concave_lower_bound(double v, double z, double vbar, double zbar) {
  if (v < 0.0 || z <= 0.0 || vbar <= 0.0 || zbar <= 0.0)
    throw std::domain_error("concave_lower_bound: arguments out of domain");
  // Grouped so the correction vanishes identically at the expansion point:
  // ln(1+g) + g (2 sqrt(v/vbar) - 1 - (z+v)/(zbar+vbar))
  const double gbar = vbar / zbar;
  return std::log1p(gbar) +
         gbar * (2.0 * std::sqrt(v / vbar) - 1.0 - (z + v) / (zbar + vbar));
}

MrtInstance make_mrt_instance(const ChannelRealization& ch,
                              const std::vector<std::vector<int>>& active,
                              std::span<const double> weight,
                              std::span<const double> min_rate_ue_ru, double p_max_w,
                              double noise_w, double bandwidth_hz) {
  MrtInstance inst;
  inst.noise_w = noise_w;
  inst.bandwidth_hz = bandwidth_hz;
  inst.weight.assign(weight.begin(), weight.end());
  inst.p_max_ru.assign(ch.num_rus, p_max_w);
  const int num_rus = ch.num_rus;
  for (int ue = 0; ue < static_cast<int>(active.size()); ++ue) {
    for (int ru : active[ue]) {
      double nu = 0.0;
      for (const auto& c : ch.at(ru, ue)) nu += std::norm(c);
      MrtLink link{ue, ru, nu, 0.0};
      if (!min_rate_ue_ru.empty()) link.min_rate = min_rate_ue_ru[ue * num_rus + ru];
      inst.links.push_back(link);
    }
  }
  const int n = inst.num_links();
  inst.interference.assign(n, std::vector<double>(n, 0.0));
  for (int l = 0; l < n; ++l) {
    for (int m = 0; m < n; ++m) {
      if (m == l) continue;
      const auto& a = inst.links[l];
      const auto& b = inst.links[m];
      if (b.ue == a.ue) {
        // Own sub-flows from other RUs arrive at full beamformed power.
        inst.interference[l][m] = b.nu;
      } else {
        // Cross beam |h_a^H h_b|^2 / nu_b at RU of link m.
        const auto ha = ch.at(b.ru, a.ue);
        const auto hb = ch.at(b.ru, b.ue);
        std::complex<double> dot{0.0, 0.0};
        for (int i = 0; i < ch.antennas; ++i) dot += std::conj(ha[i]) * hb[i];
        inst.interference[l][m] = std::norm(dot) / b.nu;
      }
    }
  }
  return inst;
}

namespace {

double denom(const MrtInstance& inst, std::span<const double> p, int l) {
  double z = inst.noise_w;
  const auto& row = inst.interference[l];
  for (int m = 0; m < inst.num_links(); ++m) z += row[m] * p[m];
  return z;
}

/// Surrogate coefficients at a fixed expansion point. Per link:
///   T_l(p) = c0 + s * sqrt(p_l) - d * (nu_l p_l + Phi_l(p))   [nats]
struct Surrogate {
  std::vector<double> c0, s, d;

  static Surrogate at(const MrtInstance& inst, std::span<const double> pbar) {
    const int n = inst.num_links();
    Surrogate sur;
    sur.c0.resize(n);
    sur.s.resize(n);
    sur.d.resize(n);
    for (int l = 0; l < n; ++l) {
      const double vbar = pbar[l] * inst.links[l].nu;
      const double zbar = denom(inst, pbar, l);
      if (vbar <= 0.0) {
        sur.c0[l] = sur.s[l] = sur.d[l] = 0.0;
        continue;
      }
      const double gbar = vbar / zbar;
      sur.c0[l] = std::log1p(gbar) - gbar;
      sur.s[l] = 2.0 * std::sqrt(vbar * inst.links[l].nu) / zbar;
      sur.d[l] = vbar / (zbar * (zbar + vbar));
    }
    return sur;
  }

  /// Surrogate rate of link l in bits/s.
  double rate(const MrtInstance& inst, std::span<const double> p, int l) const {
    if (s[l] == 0.0 && d[l] == 0.0 && c0[l] == 0.0) return 0.0;
    const double t = c0[l] + s[l] * std::sqrt(std::max(p[l], 0.0)) -
                     d[l] * (inst.links[l].nu * p[l] + denom(inst, p, l));
    return inst.bandwidth_hz / kLn2 * t;
  }
};

struct PgdProblem {
  const MrtInstance* inst;
  const Surrogate* sur;
  // objective mode: weighted sum with hinge penalty, or LSE soft-min of slacks
  bool softmin = false;
  double penalty = 0.0;        // hinge weight (weighted-sum mode)
  double beta = 0.0;           // LSE sharpness (softmin mode)
  double rate_scale = 1.0;     // normalizer for rates
  std::vector<int> active;     // links with min_rate > 0

  double value(std::span<const double> p, std::vector<double>* slacks_out = nullptr) const {
    const int n = inst->num_links();
    if (!softmin) {
      double f = 0.0;
      for (int l = 0; l < n; ++l)
        f += inst->weight[inst->links[l].ue] * sur->rate(*inst, p, l);
      double pen = 0.0;
      for (int l : active)
        pen += std::max(0.0, inst->links[l].min_rate - sur->rate(*inst, p, l));
      return (f - penalty * pen) / rate_scale;
    }
    double lse = 0.0;
    double smin = 1e300;
    std::vector<double> slack(active.size());
    for (std::size_t i = 0; i < active.size(); ++i) {
      const int l = active[i];
      slack[i] = (sur->rate(*inst, p, l) - inst->links[l].min_rate) / rate_scale;
      smin = std::min(smin, slack[i]);
    }
    for (double s : slack) lse += std::exp(-beta * (s - smin));
    if (slacks_out) *slacks_out = slack;
    return smin - std::log(lse) / beta;
  }

  std::vector<double> gradient(std::span<const double> p) const {
    const int n = inst->num_links();
    std::vector<double> g(n, 0.0);
    // weight attached to each link's surrogate rate gradient
    std::vector<double> wl(n, 0.0);
    if (!softmin) {
      for (int l = 0; l < n; ++l) wl[l] = inst->weight[inst->links[l].ue] / rate_scale;
      for (int l : active) {
        if (sur->rate(*inst, p, l) < inst->links[l].min_rate) wl[l] += penalty / rate_scale;
      }
    } else {
      // softmax(-beta * slack) weights
      std::vector<double> slack;
      value(p, &slack);
      double smin = 1e300;
      for (double s : slack) smin = std::min(smin, s);
      double z = 0.0;
      std::vector<double> w(active.size());
      for (std::size_t i = 0; i < active.size(); ++i) {
        w[i] = std::exp(-beta * (slack[i] - smin));
        z += w[i];
      }
      for (std::size_t i = 0; i < active.size(); ++i) wl[active[i]] = w[i] / (z * rate_scale);
    }
    const double wln = inst->bandwidth_hz / kLn2;
    for (int l = 0; l < n; ++l) {
      if (wl[l] == 0.0) continue;
      if (sur->s[l] == 0.0 && sur->d[l] == 0.0) continue;
      const double coef = wl[l] * wln;
      // d/dp_l of s*sqrt(p_l) - d*nu*p_l
      const double pl = std::max(p[l], 1e-300);
      g[l] += coef * (0.5 * sur->s[l] / std::sqrt(pl) - sur->d[l] * inst->links[l].nu);
      // d/dp_m of -d * Phi_l(p)
      const auto& row = inst->interference[l];
      for (int m = 0; m < n; ++m) {
        if (row[m] != 0.0) g[m] -= coef * sur->d[l] * row[m];
      }
    }
    return g;
  }
};

void project_per_ru(const MrtInstance& inst, std::span<double> p) {
  // group link indices by RU, project each group
  for (std::size_t ru = 0; ru < inst.p_max_ru.size(); ++ru) {
    std::vector<int> idx;
    for (int l = 0; l < inst.num_links(); ++l)
      if (inst.links[l].ru == static_cast<int>(ru)) idx.push_back(l);
    if (idx.empty()) continue;
    std::vector<double> sub(idx.size());
    for (std::size_t i = 0; i < idx.size(); ++i) sub[i] = p[idx[i]];
    project_capped_simplex(sub, inst.p_max_ru[ru]);
    for (std::size_t i = 0; i < idx.size(); ++i) p[idx[i]] = sub[i];
  }
}

/// Projected gradient ascent with Armijo backtracking. Monotone in the
/// problem value; returns the final (best) iterate.
std::vector<double> pgd_ascent(const PgdProblem& prob, std::span<const double> p_start,
                               const MrtSolverConfig& cfg) {
  const double p_scale = *std::max_element(prob.inst->p_max_ru.begin(), prob.inst->p_max_ru.end());
  std::vector<double> p(p_start.begin(), p_start.end());
  project_per_ru(*prob.inst, p);
  double fp = prob.value(p);
  double step = p_scale;  // carried between iterations
  for (int it = 0; it < cfg.max_inner_iters; ++it) {
    const auto g = prob.gradient(p);
    // gradient mapping at nominal step p_scale, in normalized units
    std::vector<double> trial(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) trial[i] = p[i] + p_scale * g[i];
    project_per_ru(*prob.inst, trial);
    double gm2 = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
      const double d = (trial[i] - p[i]) / p_scale;
      gm2 += d * d;
    }
    if (std::sqrt(gm2) < cfg.grad_mapping_tol) break;

    step = std::min(step * 2.0, 1e6 * p_scale);
    bool accepted = false;
    for (int bt = 0; bt < 60; ++bt) {
      std::vector<double> cand(p.size());
      for (std::size_t i = 0; i < p.size(); ++i) cand[i] = p[i] + step * g[i];
      project_per_ru(*prob.inst, cand);
      double dot = 0.0;
      for (std::size_t i = 0; i < p.size(); ++i) dot += g[i] * (cand[i] - p[i]);
      const double fc = prob.value(cand);
      if (fc >= fp + 1e-4 * dot && fc >= fp) {
        p = std::move(cand);
        fp = fc;
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) break;  // no ascent direction left at machine precision
  }
  return p;
}

double min_true_slack(const MrtInstance& inst, std::span<const double> p,
                      const std::vector<int>& active) {
  double smin = 1e300;
  for (int l : active) {
    const double sinr = mrt_sinr(inst, p, l);
    const double r = inst.bandwidth_hz * std::log2(1.0 + sinr);
    smin = std::min(smin, r - inst.links[l].min_rate);
  }
  return smin;
}

std::vector<int> active_links(const MrtInstance& inst) {
  std::vector<int> a;
  for (int l = 0; l < inst.num_links(); ++l)
    if (inst.links[l].min_rate > 0.0) a.push_back(l);
  return a;
}

// Full-budget starts. A symmetric split is projected-stationary for the
// surrogate (its gradient matches the truth there), and growing a link from a
// small expansion point is slow, so candidate starts put the mass where
// optima tend to live: proportional to weight * gain, equal shares, and
// winner-take-all per RU.
std::vector<std::vector<double>> initial_power_candidates(const MrtInstance& inst) {
  const std::size_t n = inst.links.size();
  double wmax = 0.0;
  for (double w : inst.weight) wmax = std::max(wmax, w);
  std::vector<double> score(n);
  std::vector<double> per_ru(inst.p_max_ru.size(), 0.0);
  std::vector<int> count(inst.p_max_ru.size(), 0);
  std::vector<int> winner(inst.p_max_ru.size(), -1);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& l = inst.links[i];
    score[i] = (inst.weight[l.ue] + 0.01 * std::max(wmax, 1e-300)) * l.nu;
    per_ru[l.ru] += score[i];
    ++count[l.ru];
    if (winner[l.ru] < 0 || score[i] > score[winner[l.ru]]) winner[l.ru] = static_cast<int>(i);
  }

  std::vector<double> prop(n, 0.0), equal(n, 0.0), wta(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& l = inst.links[i];
    if (per_ru[l.ru] > 0.0) prop[i] = inst.p_max_ru[l.ru] * score[i] / per_ru[l.ru];
    equal[i] = inst.p_max_ru[l.ru] / count[l.ru];
    if (winner[l.ru] == static_cast<int>(i)) wta[i] = inst.p_max_ru[l.ru];
  }
  std::vector<std::vector<double>> candidates;
  candidates.push_back(std::move(prop));
  candidates.push_back(std::move(equal));
  candidates.push_back(std::move(wta));
  return candidates;
}

std::vector<double> initial_power(const MrtInstance& inst) {
  auto candidates = initial_power_candidates(inst);
  std::size_t best = 0;
  double best_obj = -1e300;
  for (std::size_t c = 0; c < candidates.size(); ++c) {
    const double obj = mrt_objective(inst, candidates[c]);
    if (obj > best_obj) {
      best_obj = obj;
      best = c;
    }
  }
  return candidates[best];
}

}  // namespace

double mrt_sinr(const MrtInstance& inst, std::span<const double> p, int link) {
  return p[link] * inst.links[link].nu / denom(inst, p, link);
}

std::vector<double> mrt_rates(const MrtInstance& inst, std::span<const double> p) {
  std::vector<double> r(inst.num_links());
  for (int l = 0; l < inst.num_links(); ++l)
    r[l] = inst.bandwidth_hz * std::log2(1.0 + mrt_sinr(inst, p, l));
  return r;
}

double mrt_objective(const MrtInstance& inst, std::span<const double> p) {
  double f = 0.0;
  const auto r = mrt_rates(inst, p);
  for (int l = 0; l < inst.num_links(); ++l) f += inst.weight[inst.links[l].ue] * r[l];
  return f;
}

std::vector<double> solve_inner_convex(const MrtInstance& inst, std::span<const double> p_expand,
                                       std::span<const double> p_start,
                                       const MrtSolverConfig& cfg) {
  const auto sur = Surrogate::at(inst, p_expand);
  PgdProblem prob;
  prob.inst = &inst;
  prob.sur = &sur;
  prob.active = active_links(inst);
  double wmax = 0.0;
  for (double w : inst.weight) wmax = std::max(wmax, w);
  prob.rate_scale = std::max(wmax, 1.0) * inst.bandwidth_hz / kLn2;
  prob.penalty = std::max(wmax, 1.0);

  std::vector<double> p(p_start.begin(), p_start.end());
  double feas_scale = 0.0;
  for (int l : prob.active) feas_scale = std::max(feas_scale, inst.links[l].min_rate);
  const double feas_tol = cfg.feas_tol_rel * std::max(feas_scale, 1.0);
  const auto violation = [&](std::span<const double> x) {
    double viol = 0.0;
    for (int l : prob.active) viol = std::max(viol, inst.links[l].min_rate - sur.rate(inst, x, l));
    return viol;
  };
  const auto raw_objective = [&](std::span<const double> x) {
    double f = 0.0;
    for (int l = 0; l < inst.num_links(); ++l)
      f += inst.weight[inst.links[l].ue] * sur.rate(inst, x, l);
    return f;
  };

  // best constraint-feasible point seen; the start qualifies by precondition
  std::vector<double> best(p);
  double best_obj = raw_objective(best);
  for (int round = 0; round <= cfg.max_penalty_doublings; ++round) {
    p = pgd_ascent(prob, p, cfg);
    const bool feasible = prob.active.empty() || violation(p) <= feas_tol;
    if (feasible) {
      const double obj = raw_objective(p);
      if (obj > best_obj) {
        best = p;
        best_obj = obj;
      }
      break;
    }
    prob.penalty *= 2.0;
  }
  return best;
}

std::optional<std::vector<double>> find_feasible_init(const MrtInstance& inst,
                                                      const MrtSolverConfig& cfg) {
  const auto active = active_links(inst);
  if (active.empty()) return initial_power(inst);

  // Capacity precheck: even alone at full power the link cannot reach its
  // minimum rate -> provably infeasible.
  for (int l : active) {
    const auto& link = inst.links[l];
    const double cap =
        inst.bandwidth_hz * std::log2(1.0 + inst.p_max_ru[link.ru] * link.nu / inst.noise_w);
    if (link.min_rate > cap) return std::nullopt;
  }

  // start from the candidate with the best minimum slack
  auto candidates = initial_power_candidates(inst);
  std::vector<double> p;
  double best_slack = -1e300;
  for (auto& cand : candidates) {
    const double slack = min_true_slack(inst, cand, active);
    if (slack > best_slack) {
      best_slack = slack;
      p = std::move(cand);
    }
  }
  if (best_slack > 0.0) return p;

  PgdProblem prob;
  prob.inst = &inst;
  prob.softmin = true;
  prob.active = active;
  prob.rate_scale = inst.bandwidth_hz / kLn2;
  MrtSolverConfig inner_cfg = cfg;
  inner_cfg.max_inner_iters = std::min(cfg.max_inner_iters, 200);
  for (int round = 0; round < cfg.max_feasibility_rounds; ++round) {
    const auto sur = Surrogate::at(inst, p);
    prob.sur = &sur;
    prob.beta = 20.0 * (1 << std::min(round, 4));
    p = pgd_ascent(prob, p, inner_cfg);
    if (min_true_slack(inst, p, active) > 0.0) return p;
  }
  return std::nullopt;
}

namespace {

MrtScheduleResult ia_loop(const MrtInstance& inst, const MrtSolverConfig& cfg,
                          std::vector<double> p) {
  MrtScheduleResult res;
  double obj = mrt_objective(inst, p);
  res.objective_trace.push_back(obj);
  for (int n = 0; n < cfg.max_outer_iters; ++n) {
    p = solve_inner_convex(inst, p, p, cfg);
    const double obj_new = mrt_objective(inst, p);
    res.objective_trace.push_back(obj_new);
    ++res.iterations;
    if (std::abs(obj_new - obj) <= cfg.rel_obj_tol * std::max(std::abs(obj), 1e-30)) {
      obj = obj_new;
      break;
    }
    obj = obj_new;
  }
  res.feasible = true;
  res.powers = std::move(p);
  res.rates = mrt_rates(inst, res.powers);
  return res;
}

}  // namespace

MrtScheduleResult ia_schedule(const MrtInstance& inst, const MrtSolverConfig& cfg,
                              std::span<const double> warm_start) {
  const auto active = active_links(inst);

  if (!warm_start.empty()) {
    std::vector<double> p(warm_start.begin(), warm_start.end());
    project_per_ru(inst, p);
    if (active.empty() || min_true_slack(inst, p, active) > 0.0)
      return ia_loop(inst, cfg, std::move(p));
  }

  if (!active.empty()) {
    auto init = find_feasible_init(inst, cfg);
    if (!init) return {};  // infeasible minimum-rate set, reported to caller
    return ia_loop(inst, cfg, std::move(*init));
  }

  // Unconstrained slot: the weighted sum rate has one-hot and mixed local
  // optima, so the surrogate loop runs from each candidate start and the best
  // endpoint wins.
  MrtScheduleResult best;
  for (auto& start : initial_power_candidates(inst)) {
    auto res = ia_loop(inst, cfg, std::move(start));
    if (!best.feasible || res.objective_trace.back() > best.objective_trace.back())
      best = std::move(res);
  }
  return best;
}

}  // namespace jfcs
