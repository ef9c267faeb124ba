#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <vector>

#include "coopjam/feasibility.hpp"
#include "coopjam/model.hpp"
#include "coopjam/numerics/lp.hpp"

namespace testing {

inline double uniform(coopjam::Rng& r, double lo, double hi) { return lo + (hi - lo) * r.uniform_open0(); }

inline coopjam::Scenario default_scenario() {
  coopjam::Scenario s;
  s.n_jammers = 3;
  s.n_eavesdroppers = 2;
  s.p_source = 2.0;
  s.p_max = {1.0, 1.0, 3.0};
  s.sigma2_dest = 0.1;
  s.sigma2_eaves = {0.1, 0.1};
  return s;
}

inline coopjam::Scenario random_scenario(coopjam::Rng& r, std::size_t n, std::size_t m) {
  coopjam::Scenario s;
  s.n_jammers = n;
  s.n_eavesdroppers = m;
  s.p_source = uniform(r, 0.5, 5.0);
  for (std::size_t i = 0; i < n; ++i) s.p_max.push_back(uniform(r, 0.2, 3.0));
  s.sigma2_dest = uniform(r, 0.05, 1.0);
  for (std::size_t j = 0; j < m; ++j) s.sigma2_eaves.push_back(uniform(r, 0.05, 1.0));
  return s;
}

/// Channel draws k = 0, 1, ... from `seed`, keeping those with positive
/// secrecy achievable; no selection beyond that.
inline std::vector<coopjam::ChannelGains> feasible_draws(const coopjam::Scenario& s, int count, std::uint64_t seed) {
  std::vector<coopjam::ChannelGains> out;
  for (std::uint64_t k = 0; static_cast<int>(out.size()) < count; ++k) {
    auto c = coopjam::sample_channels(s, coopjam::Rng::substream(seed, k));
    if (coopjam::check_positive_secrecy(s, c).feasible) out.push_back(std::move(c));
  }
  return out;
}

/// Maximum secrecy rate over a regular grid with `cells` cells per axis.
inline double grid_max_rate(const coopjam::Scenario& s, const coopjam::ChannelGains& c, int cells,
                            coopjam::PowerAllocation* argmax = nullptr) {
  const std::size_t n = s.n_jammers;
  std::vector<int> idx(n, 0);
  coopjam::PowerAllocation p{std::vector<double>(n, 0.0)};
  double best = -1.0;
  while (true) {
    for (std::size_t i = 0; i < n; ++i) p.p[i] = s.p_max[i] * idx[i] / cells;
    const double r = coopjam::secrecy_rate(s, c, p);
    if (r > best) {
      best = r;
      if (argmax) *argmax = p;
    }
    std::size_t i = 0;
    while (i < n && ++idx[i] > cells) idx[i++] = 0;
    if (i == n) break;
  }
  return best;
}

/// Brute-force LP oracle for problems with finite boxes: every choice of n
/// active constraints (rows as equalities, or bounds) is solved and the best
/// feasible vertex kept. nullopt means no feasible vertex, i.e. infeasible.
inline std::optional<double> vertex_enumeration(const coopjam::numerics::LinearProgram& lp, double feas_tol = 1e-9) {
  using coopjam::numerics::Relation;
  const std::size_t n = lp.n_vars();
  struct Hyper {
    Eigen::VectorXd a;
    double b;
  };
  std::vector<Hyper> planes;
  for (const auto& row : lp.constraints) planes.push_back({Eigen::Map<const Eigen::VectorXd>(row.a.data(), n), row.b});
  for (std::size_t i = 0; i < n; ++i) {
    Eigen::VectorXd e = Eigen::VectorXd::Zero(n);
    e[i] = 1.0;
    planes.push_back({e, lp.lower_bounds[i]});
    planes.push_back({e, lp.upper_bounds[i]});
  }
  auto feasible = [&](const Eigen::VectorXd& x) {
    for (const auto& row : lp.constraints) {
      double v = 0.0;
      for (std::size_t j = 0; j < n; ++j) v += row.a[j] * x[j];
      const double tol = feas_tol * (1.0 + std::abs(row.b));
      if (row.relation == Relation::kLessEqual && v > row.b + tol) return false;
      if (row.relation == Relation::kGreaterEqual && v < row.b - tol) return false;
      if (row.relation == Relation::kEqual && std::abs(v - row.b) > tol) return false;
    }
    for (std::size_t j = 0; j < n; ++j)
      if (x[j] < lp.lower_bounds[j] - feas_tol || x[j] > lp.upper_bounds[j] + feas_tol) return false;
    return true;
  };
  std::optional<double> best;
  std::vector<std::size_t> pick(n);
  std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t pos, std::size_t start) {
    if (pos == n) {
      Eigen::MatrixXd a(n, n);
      Eigen::VectorXd b(n);
      for (std::size_t r = 0; r < n; ++r) {
        a.row(static_cast<Eigen::Index>(r)) = planes[pick[r]].a.transpose();
        b[static_cast<Eigen::Index>(r)] = planes[pick[r]].b;
      }
      Eigen::FullPivLU<Eigen::MatrixXd> lu(a);
      if (!lu.isInvertible()) return;
      const Eigen::VectorXd x = lu.solve(b);
      if (!feasible(x)) return;
      double v = 0.0;
      for (std::size_t j = 0; j < n; ++j) v += lp.objective[j] * x[j];
      if (!best || v < *best) best = v;
      return;
    }
    for (std::size_t k = start; k + (n - pos) <= planes.size(); ++k) {
      pick[pos] = k;
      rec(pos + 1, k + 1);
    }
  };
  rec(0, 0);
  return best;
}

inline coopjam::numerics::LinearProgram random_box_lp(coopjam::Rng& r, std::size_t n, std::size_t rows) {
  using namespace coopjam::numerics;
  LinearProgram lp;
  for (std::size_t j = 0; j < n; ++j) {
    lp.objective.push_back(uniform(r, -1.0, 1.0));
    const double lo = uniform(r, -2.0, 1.0);
    lp.lower_bounds.push_back(lo);
    lp.upper_bounds.push_back(lo + uniform(r, 0.5, 3.0));
  }
  for (std::size_t i = 0; i < rows; ++i) {
    LinearConstraint c;
    for (std::size_t j = 0; j < n; ++j) c.a.push_back(uniform(r, -1.0, 1.0));
    const double u = r.uniform_open0();
    c.relation = u < 0.45 ? Relation::kLessEqual : (u < 0.9 ? Relation::kGreaterEqual : Relation::kEqual);
    c.b = uniform(r, -1.0, 1.0);
    lp.constraints.push_back(std::move(c));
  }
  return lp;
}

}  // namespace testing
