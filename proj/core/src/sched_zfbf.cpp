#include "jfcs/sched_zfbf.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace jfcs {

namespace {
constexpr double kLn2 = std::numbers::ln2;

Eigen::Map<const Eigen::VectorXcd> as_vec(std::span<const std::complex<double>> h) {
  return {h.data(), static_cast<Eigen::Index>(h.size())};
}
}  // namespace

Eigen::MatrixXcd null_space_basis(const Eigen::MatrixXcd& h_minus, double rank_tol) {
  const Eigen::Index m = h_minus.rows();
  if (h_minus.cols() == 0) return Eigen::MatrixXcd::Identity(m, m);
  Eigen::ColPivHouseholderQR<Eigen::MatrixXcd> qr(h_minus);
  const auto& r = qr.matrixR();
  const double pivot0 = std::abs(r(0, 0));
  Eigen::Index rank = 0;
  const Eigen::Index kmax = std::min(m, h_minus.cols());
  for (Eigen::Index i = 0; i < kmax; ++i) {
    if (std::abs(r(i, i)) > rank_tol * pivot0) ++rank;
  }
  const Eigen::MatrixXcd q = qr.householderQ();
  return q.rightCols(m - rank);
}

double min_power(double rbar_bits, double w_hz, double tau, double nutilde, double noise_w) {
  if (w_hz <= 0.0 || tau <= 0.0 || nutilde <= 0.0 || noise_w <= 0.0)
    throw std::domain_error("min_power: nonpositive parameter");
  if (rbar_bits <= 0.0) return 0.0;
  return noise_w / nutilde * (std::exp2(rbar_bits / (w_hz * tau)) - 1.0);
}

double waterfill_power(double mu, double qhat, double w_hz, double tau, double nutilde,
                       double noise_w, double p_min) {
  if (mu <= 0.0) throw std::domain_error("waterfill_power: mu must be > 0");
  return std::max(p_min, qhat * w_hz / (tau * mu * kLn2) - noise_w / nutilde);
}

BisectResult bisect_mu(std::span<const WaterfillItem> items, double p_max, double w_hz,
                       double tau, double noise_w, const ZfSolverConfig& cfg) {
  double sum_pmin = 0.0;
  for (std::size_t k = 0; k < items.size(); ++k) {
    if (items[k].p_min > p_max) {
      std::ostringstream os;
      os << "bisect_mu: item " << k << " needs p_min " << items[k].p_min << " W > budget "
         << p_max << " W";
      throw std::domain_error(os.str());
    }
    sum_pmin += items[k].p_min;
  }
  if (sum_pmin > p_max) {
    std::ostringstream os;
    os << "bisect_mu: sum of minimum powers " << sum_pmin << " W exceeds budget " << p_max
       << " W";
    throw std::domain_error(os.str());
  }

  const auto total = [&](double mu) {
    double s = 0.0;
    for (const auto& it : items)
      s += waterfill_power(mu, it.qhat, w_hz, tau, it.nutilde, noise_w, it.p_min);
    return s;
  };
  const auto powers_at = [&](double mu) {
    std::vector<double> p(items.size());
    for (std::size_t k = 0; k < items.size(); ++k)
      p[k] = waterfill_power(mu, items[k].qhat, w_hz, tau, items[k].nutilde, noise_w,
                             items[k].p_min);
    return p;
  };

  double qmax = 0.0;
  for (const auto& it : items) qmax = std::max(qmax, it.qhat);
  if (qmax <= 0.0) {
    // No backlog anywhere: every item sits at its minimum power.
    BisectResult res;
    res.mu = 0.0;
    res.powers = powers_at(1.0);  // mu irrelevant when qhat = 0
    res.budget_tight = std::abs(sum_pmin - p_max) <= 1e-12 * std::max(p_max, 1.0);
    return res;
  }

  const double p_unit = p_max / (10.0 * static_cast<double>(items.size()));
  double mu_hi = qmax * w_hz / (tau * kLn2 * p_unit);
  int guard = 0;
  while (total(mu_hi) > p_max && guard++ < 200) mu_hi *= 2.0;
  const double delta = cfg.bisect_delta_rel * mu_hi;
  double lo = 0.0, hi = mu_hi;
  while (hi - lo > delta) {
    const double mid = 0.5 * (lo + hi);
    if (total(mid) <= p_max)
      hi = mid;
    else
      lo = mid;
  }
  BisectResult res;
  res.mu = hi;
  res.powers = powers_at(hi);
  double used = 0.0;
  for (double p : res.powers) used += p;
  res.budget_tight = used >= p_max * (1.0 - 1e-9) - 1e-15;
  return res;
}

namespace {

struct RuMember {
  int ue = 0;
  Eigen::MatrixXcd v;  // null-space basis
  Eigen::RowVectorXcd htilde;
  double nutilde = 0.0;
};

ZfScheduleResult zf_common(const ChannelRealization& ch,
                           const std::vector<std::vector<int>>& active,
                           std::span<const double> weight,
                           std::span<const double> min_rate_ue_ru, double p_max_w,
                           double w_prime_hz, double tau, double noise_w,
                           const ZfSolverConfig& cfg, bool equal_power) {
  const int num_rus = ch.num_rus;
  const int num_ues = static_cast<int>(active.size());
  ZfScheduleResult res;
  res.rates.assign(static_cast<std::size_t>(num_ues) * num_rus, 0.0);
  res.powers.assign(static_cast<std::size_t>(num_ues) * num_rus, 0.0);
  if (cfg.want_beamformers)
    res.beamformers.assign(static_cast<std::size_t>(num_ues) * num_rus, Eigen::VectorXcd());

  std::vector<std::vector<int>> ues_at_ru(num_rus);
  for (int ue = 0; ue < num_ues; ++ue)
    for (int ru : active[ue]) ues_at_ru[ru].push_back(ue);

  // Independent per-RU subproblems (parallelizable; kept sequential for
  // reproducible event counters).
  for (int ru = 0; ru < num_rus; ++ru) {
    const auto& ues = ues_at_ru[ru];
    if (ues.empty()) continue;
    const int n = static_cast<int>(ues.size());
    if (ch.antennas <= n) {
      std::ostringstream os;
      os << "zf_schedule: RU " << ru << " co-schedules " << n << " UEs with only "
         << ch.antennas << " antennas";
      throw std::runtime_error(os.str());
    }

    std::vector<RuMember> members;
    members.reserve(n);
    for (int ue : ues) {
      Eigen::MatrixXcd h_minus(ch.antennas, n - 1);
      int col = 0;
      for (int other : ues) {
        if (other == ue) continue;
        h_minus.col(col++) = as_vec(ch.at(ru, other));
      }
      RuMember m;
      m.ue = ue;
      m.v = null_space_basis(h_minus, cfg.rank_tol);
      m.htilde = as_vec(ch.at(ru, ue)).adjoint() * m.v;
      m.nutilde = m.htilde.squaredNorm();
      if (m.nutilde < cfg.degenerate_gain) {
        ++res.dropped_degenerate;
        continue;
      }
      members.push_back(std::move(m));
    }
    if (members.empty()) continue;

    std::vector<double> pw(members.size(), 0.0);
    double mu_used = 0.0;
    if (equal_power) {
      const double share = p_max_w / static_cast<double>(members.size());
      std::fill(pw.begin(), pw.end(), share);
    } else {
      std::vector<WaterfillItem> items(members.size());
      for (std::size_t i = 0; i < members.size(); ++i) {
        items[i].qhat = weight[members[i].ue];
        items[i].nutilde = members[i].nutilde;
        const double min_rate =
            min_rate_ue_ru.empty() ? 0.0 : min_rate_ue_ru[members[i].ue * num_rus + ru];
        items[i].p_min = min_power(min_rate * tau, w_prime_hz, tau, items[i].nutilde, noise_w);
      }
      // Unattainable minimum-rate set: shed the largest demands until the
      // remainder fits the budget.
      bool shed = false;
      for (;;) {
        double sum_pmin = 0.0;
        for (const auto& it : items) sum_pmin += it.p_min;
        if (!(sum_pmin > p_max_w)) break;
        auto it = std::max_element(items.begin(), items.end(),
                                   [](const WaterfillItem& a, const WaterfillItem& b) {
                                     return a.p_min < b.p_min;
                                   });
        it->p_min = 0.0;
        ++res.dropped_min_constraints;
        shed = true;
      }
      if (shed) ++res.dropped_min_rus;
      auto bis = bisect_mu(items, p_max_w, w_prime_hz, tau, noise_w, cfg);
      pw = std::move(bis.powers);
      mu_used = bis.mu;
    }
    (void)mu_used;

    for (std::size_t i = 0; i < members.size(); ++i) {
      const auto& m = members[i];
      const std::size_t idx = static_cast<std::size_t>(m.ue) * num_rus + ru;
      res.powers[idx] = pw[i];
      res.rates[idx] = w_prime_hz * std::log2(1.0 + pw[i] * m.nutilde / noise_w);
      if (cfg.want_beamformers && pw[i] > 0.0) {
        res.beamformers[idx] =
            std::sqrt(pw[i]) / std::sqrt(m.nutilde) * (m.v * m.htilde.adjoint());
      }
    }
  }
  return res;
}

}  // namespace

ZfScheduleResult zf_schedule(const ChannelRealization& ch,
                             const std::vector<std::vector<int>>& active,
                             std::span<const double> weight,
                             std::span<const double> min_rate_ue_ru, double p_max_w,
                             double w_prime_hz, double tau, double noise_w,
                             const ZfSolverConfig& cfg) {
  return zf_common(ch, active, weight, min_rate_ue_ru, p_max_w, w_prime_hz, tau, noise_w, cfg,
                   /*equal_power=*/false);
}

ZfScheduleResult zf_schedule_equal_power(const ChannelRealization& ch,
                                         const std::vector<std::vector<int>>& active,
                                         double p_max_w, double w_prime_hz, double noise_w,
                                         const ZfSolverConfig& cfg) {
  return zf_common(ch, active, {}, {}, p_max_w, w_prime_hz, 1.0, noise_w, cfg,
                   /*equal_power=*/true);
}

}  // namespace jfcs
