#include "coopjam/power_opt.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "coopjam/gp.hpp"
#include "coopjam/numerics/lp.hpp"
#include "coopjam/numerics/search.hpp"

namespace coopjam {

namespace {

// max_m (1 + SINR_Em) / (1 + SINR_D); the secrecy rate is [-log2 of this]^+.
double worst_ratio(const Scenario& s, const ChannelGains& c, const PowerAllocation& p) {
  const double d = sinr_destination(s, c, p);
  return (1.0 + sinr_eavesdropper_max(s, c, p)) / (1.0 + d);
}

}  // namespace

PowerAllocation default_initial_allocation(const Scenario& s) {
  PowerAllocation p{s.p_max};
  for (double& v : p.p) v *= 0.5;
  return p;
}

OptimizationResult algorithm_a(const Scenario& s, const ChannelGains& c, const PowerAllocation& p0,
                               const AlgorithmAOptions& opts) {
  s.validate();
  c.validate(s);
  p0.validate(s);
  if (!(opts.tol > 0.0) || opts.max_iter < 1) throw InvalidInput("algorithm_a: bad options");

  const double p_floor = gp::p_floor_for(s);
  PowerAllocation current = p0;
  for (std::size_t i = 0; i < s.n_jammers; ++i) current.p[i] = std::clamp(current.p[i], p_floor, s.p_max[i]);

  OptimizationResult out;
  IterationTrace& trace = out.trace;
  double ratio = worst_ratio(s, c, current);
  double rate = secrecy_rate(s, c, current);
  trace.iterations.push_back({current, rate, ratio});

  for (int k = 0; k < opts.max_iter; ++k) {
    gp::P3Solution sol;
    try {
      sol = gp::solve_p3(gp::build_p3(s, c, current), opts.gp_tol);
    } catch (const Error& e) {
      throw OptimizationFailed(std::string("algorithm_a: GP solve failed: ") + e.what(), trace);
    }
    PowerAllocation next{sol.p};
    const double next_ratio = worst_ratio(s, c, next);
    // The previous point is feasible for the new GP, so a worse exact ratio
    // can only come from solver tolerance; treat it as convergence.
    if (next_ratio > ratio) {
      trace.converged = true;
      trace.stop_reason = StopReason::kTolerance;
      break;
    }
    const double next_rate = secrecy_rate(s, c, next);
    trace.iterations.push_back({next, next_rate, sol.tau});
    // Compared on the unclamped objective so that progress below zero rate counts.
    const double change = std::abs(std::log2(ratio) - std::log2(next_ratio));
    current = std::move(next);
    ratio = next_ratio;
    rate = next_rate;
    if (change < opts.tol) {
      trace.converged = true;
      trace.stop_reason = StopReason::kTolerance;
      break;
    }
  }

  PowerAllocation snapped = current;
  for (double& v : snapped.p)
    if (v <= 10.0 * p_floor) v = 0.0;
  const double snapped_rate = secrecy_rate(s, c, snapped);
  if (snapped_rate >= rate - 1e-12) {
    out.p = std::move(snapped);
    out.rate = snapped_rate;
  } else {
    out.p = current;
    out.rate = rate;
  }
  return out;
}

OptimizationResult algorithm_a(const Scenario& s, const ChannelGains& c) {
  return algorithm_a(s, c, default_initial_allocation(s));
}

KktReport kkt_check(const Scenario& s, const ChannelGains& c, const PowerAllocation& p_star, int n_probes,
                    std::uint64_t seed) {
  const auto prob = gp::build_p3(s, c, p_star);
  const std::size_t n = s.n_jammers;
  const std::size_t m_count = s.n_eavesdroppers;
  const std::vector<double>& at = prob.expansion;
  KktReport rep;

  for (std::size_t m = 0; m < m_count; ++m)
    rep.equality_residual = std::max(rep.equality_residual, std::abs(prob.gamma(m, at) - prob.gamma_hat(m, at)));

  rep.min_bound_gap = std::numeric_limits<double>::infinity();
  Rng rng(seed);
  std::vector<double> probe(n);
  for (int k = 0; k < n_probes; ++k) {
    for (std::size_t i = 0; i < n; ++i) probe[i] = prob.p_floor + (s.p_max[i] - prob.p_floor) * rng.uniform_open0();
    for (std::size_t m = 0; m < m_count; ++m)
      rep.min_bound_gap = std::min(rep.min_bound_gap, prob.gamma_hat(m, probe) - prob.gamma(m, probe));
  }

  std::vector<double> plus = at, minus = at;
  for (std::size_t i = 0; i < n; ++i) {
    if (at[i] > 10.0 * prob.p_floor) {
      ++rep.interior_coordinates;
      // central difference in y = ln p_i
      constexpr double kLogStep = 1e-5;
      plus[i] = at[i] * std::exp(kLogStep);
      minus[i] = at[i] * std::exp(-kLogStep);
      for (std::size_t m = 0; m < m_count; ++m) {
        const double dg = (prob.gamma(m, plus) - prob.gamma(m, minus)) / (2.0 * kLogStep);
        const double dgh = (prob.gamma_hat(m, plus) - prob.gamma_hat(m, minus)) / (2.0 * kLogStep);
        rep.gradient_residual = std::max(rep.gradient_residual, std::abs(dg - dgh));
      }
    } else {
      const double h = 1e-6 * s.p_max[i];
      plus[i] = at[i] + h;
      for (std::size_t m = 0; m < m_count; ++m) {
        const double dg = prob.gamma(m, plus) - prob.gamma(m, at);
        const double dgh = prob.gamma_hat(m, plus) - prob.gamma_hat(m, at);
        if (dg * dgh < 0.0) ++rep.boundary_sign_mismatches;
      }
    }
    plus[i] = at[i];
    minus[i] = at[i];
  }
  return rep;
}

std::optional<P5Result> solve_p5(const Scenario& s, const ChannelGains& c, double t0, double rel_tol) {
  const std::size_t n = s.n_jammers;
  const double cap = 1.0 + s.p_source * c.h_d / (t0 + s.sigma2_dest);

  // Candidate t is feasible iff the LP below has a point; min total power
  // picks a canonical witness.
  auto feasible_at = [&](double t) -> std::optional<PowerAllocation> {
    numerics::LinearProgram lp;
    lp.objective.assign(n, 1.0);
    lp.lower_bounds.assign(n, 0.0);
    lp.upper_bounds = s.p_max;
    lp.constraints.push_back({c.g_d, numerics::Relation::kEqual, t0});
    for (std::size_t m = 0; m < s.n_eavesdroppers; ++m) {
      if (c.h_e[m] == 0.0) {
        if (t > cap) return std::nullopt;
        continue;
      }
      const double headroom = cap / t - 1.0;
      if (!(headroom > 0.0)) return std::nullopt;
      numerics::LinearConstraint row;
      row.a.resize(n);
      for (std::size_t i = 0; i < n; ++i) row.a[i] = c.ge(m, i);
      row.relation = numerics::Relation::kGreaterEqual;
      row.b = s.p_source * c.h_e[m] / headroom - s.sigma2_eaves[m];
      lp.constraints.push_back(std::move(row));
    }
    const auto r = numerics::lp_solve(lp);
    if (!r.optimal()) return std::nullopt;
    return PowerAllocation{r.x};
  };

  // Every allocation meeting the interference level achieves t_lo.
  double t_lo = cap;
  for (std::size_t m = 0; m < s.n_eavesdroppers; ++m)
    t_lo = std::min(t_lo, cap / (1.0 + s.p_source * c.h_e[m] / s.sigma2_eaves[m]));
  auto best = feasible_at(t_lo);
  if (!best) return std::nullopt;

  double lo = t_lo, hi = cap;
  if (auto top = feasible_at(hi)) return P5Result{hi, *top};
  while (hi - lo > rel_tol * lo) {
    const double mid = 0.5 * (lo + hi);
    if (auto p = feasible_at(mid)) {
      lo = mid;
      best = std::move(p);
    } else {
      hi = mid;
    }
  }
  return P5Result{lo, *best};
}

AlgorithmBResult algorithm_b(const Scenario& s, const ChannelGains& c, double eps) {
  s.validate();
  c.validate(s);
  if (!(eps > 0.0)) throw InvalidInput("algorithm_b: eps must be positive");

  double t_max = 0.0;
  for (std::size_t i = 0; i < s.n_jammers; ++i) t_max += s.p_max[i] * c.g_d[i];
  const double t_min = 0.0;

  AlgorithmBResult out;
  auto score = [&](double t0) {
    ++out.p5_solves;
    const auto r = solve_p5(s, c, t0);
    return r ? r->t : -std::numeric_limits<double>::infinity();
  };

  double best_t0 = 0.0;
  if (t_max > 0.0) {
    // The subproblem value need not be unimodal in t0, so bisection runs
    // inside the bracket of the best candidate from a coarse scan: a uniform
    // grid, every full-power subset of jammers, and the warm start.
    std::vector<double> cand;
    constexpr int kGrid = 64;
    for (int k = 0; k <= kGrid; ++k) cand.push_back(t_min + (t_max - t_min) * k / kGrid);
    if (s.n_jammers <= 12) {
      for (std::uint32_t mask = 1; mask < (1u << s.n_jammers); ++mask) {
        double t0 = 0.0;
        for (std::size_t i = 0; i < s.n_jammers; ++i)
          if (mask & (1u << i)) t0 += s.p_max[i] * c.g_d[i];
        cand.push_back(std::min(t0, t_max));
      }
    }
    cand.push_back(0.25 * (t_min + 3.0 * t_max));
    std::sort(cand.begin(), cand.end());
    cand.erase(std::unique(cand.begin(), cand.end()), cand.end());

    std::size_t best_k = 0;
    double best_v = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < cand.size(); ++k) {
      const double v = score(cand[k]);
      if (v > best_v) {
        best_v = v;
        best_k = k;
      }
    }
    best_t0 = cand[best_k];
    const double lo = cand[best_k == 0 ? 0 : best_k - 1];
    const double hi = cand[std::min(best_k + 1, cand.size() - 1)];
    if (hi - lo > eps) {
      const auto found = numerics::bisect_max(score, lo, hi, eps);
      if (found.value > best_v) best_t0 = found.x;
    }
  }
  // Jamming that never reaches D: t0 = 0 is the only level.
  const auto final_p5 = solve_p5(s, c, best_t0);
  ++out.p5_solves;
  if (!final_p5) throw NumericalError("algorithm_b: subproblem infeasible at the selected interference level");
  out.t0 = best_t0;
  out.p = final_p5->p;
  out.rate = secrecy_rate(s, c, out.p);
  return out;
}

AlgorithmBResult algorithm_b(const Scenario& s, const ChannelGains& c) {
  double t_max = 0.0;
  for (std::size_t i = 0; i < s.n_jammers; ++i) t_max += s.p_max[i] * c.g_d[i];
  return algorithm_b(s, c, std::max(1e-10 * t_max, 1e-14));
}

SingleJammerResult best_jammer_selection(const Scenario& s, const ChannelGains& c) {
  s.validate();
  c.validate(s);
  constexpr int kGrid = 200;
  SingleJammerResult best;
  best.p = zero_allocation(s);
  best.rate = secrecy_rate(s, c, best.p);

  for (std::size_t j = 0; j < s.n_jammers; ++j) {
    PowerAllocation trial = zero_allocation(s);
    auto rate_at = [&](double pj) {
      trial.p[j] = pj;
      return secrecy_rate(s, c, trial);
    };
    const double step = s.p_max[j] / (kGrid - 1);
    int k_best = 0;
    double r_best = rate_at(0.0);
    for (int k = 1; k < kGrid; ++k) {
      const double r = rate_at(k * step);
      if (r > r_best) {
        r_best = r;
        k_best = k;
      }
    }
    const double lo = std::max(0.0, (k_best - 1) * step);
    const double hi = std::min(s.p_max[j], (k_best + 1) * step);
    const auto refined = numerics::golden_section_max(rate_at, lo, hi, 1e-10 * s.p_max[j]);
    double pj = k_best * step;
    if (refined.value > r_best) {
      pj = refined.x;
      r_best = refined.value;
    }
    if (r_best > best.rate) {
      best.rate = r_best;
      best.jammer = j;
      best.p = zero_allocation(s);
      best.p.p[j] = pj;
    }
  }
  return best;
}

}  // namespace coopjam
