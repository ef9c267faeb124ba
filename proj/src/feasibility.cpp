#include "coopjam/feasibility.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace coopjam {

double default_strict_margin(const Scenario& s, const ChannelGains& c) {
  double scale = 0.0;
  for (std::size_t m = 0; m < s.n_eavesdroppers; ++m)
    scale = std::max({scale, c.h_e[m] * s.sigma2_dest, c.h_d * s.sigma2_eaves[m]});
  return 1e-9 * (scale > 0.0 ? scale : 1.0);
}

numerics::LinearProgram build_feasibility_lp(const Scenario& s, const ChannelGains& c, double strict_margin) {
  if (!(strict_margin > 0.0)) throw InvalidInput("build_feasibility_lp: strict_margin must be > 0");
  s.validate();
  c.validate(s);
  numerics::LinearProgram lp;
  lp.objective.assign(s.n_jammers, 1.0);
  lp.lower_bounds.assign(s.n_jammers, 0.0);
  lp.upper_bounds = s.p_max;
  for (std::size_t m = 0; m < s.n_eavesdroppers; ++m) {
    numerics::LinearConstraint row;
    row.a.resize(s.n_jammers);
    for (std::size_t i = 0; i < s.n_jammers; ++i) row.a[i] = c.h_d * c.ge(m, i) - c.h_e[m] * c.g_d[i];
    row.relation = numerics::Relation::kGreaterEqual;
    row.b = c.h_e[m] * s.sigma2_dest - c.h_d * s.sigma2_eaves[m] + strict_margin;
    lp.constraints.push_back(std::move(row));
  }
  return lp;
}

FeasibilityVerdict check_positive_secrecy(const Scenario& s, const ChannelGains& c, double strict_margin) {
  const auto lp = build_feasibility_lp(s, c, strict_margin);
  const auto result = numerics::lp_solve(lp);
  FeasibilityVerdict v;
  v.strict_margin = strict_margin;
  if (!result.optimal()) {
    v.margin = std::numeric_limits<double>::quiet_NaN();
    return v;
  }
  v.feasible = true;
  v.witness = PowerAllocation{result.x};
  double slack = std::numeric_limits<double>::infinity();
  for (const auto& row : lp.constraints) {
    double ax = 0.0;
    for (std::size_t i = 0; i < s.n_jammers; ++i) ax += row.a[i] * result.x[i];
    slack = std::min(slack, ax - (row.b - strict_margin));
  }
  v.margin = slack;
  return v;
}

FeasibilityVerdict check_positive_secrecy(const Scenario& s, const ChannelGains& c) {
  return check_positive_secrecy(s, c, default_strict_margin(s, c));
}

}  // namespace coopjam
