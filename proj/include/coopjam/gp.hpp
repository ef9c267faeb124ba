#pragma once

#include <span>
#include <vector>

#include "coopjam/model.hpp"

namespace coopjam::gp {

/// coeff * prod_j x_j^exponents[j], coeff > 0.
struct Monomial {
  double coeff = 1.0;
  std::vector<double> exponents;

  std::size_t n_vars() const { return exponents.size(); }
};

/// Sum of monomials over a common variable vector.
struct Posynomial {
  std::vector<Monomial> terms;

  std::size_t n_vars() const { return terms.empty() ? 0 : terms.front().n_vars(); }
  /// Throws InvalidInput on empty term lists, nonpositive coefficients or
  /// ragged exponent vectors.
  void validate() const;
};

/// AM-GM weights, one per posynomial term; positive and summing to one.
struct CondensationWeights {
  std::vector<double> alpha;
};

struct Condensation {
  Monomial monomial;
  CondensationWeights weights;
};

/// Weights below this floor are clamped up and renormalised.
inline constexpr double kMinCondensationWeight = 1e-14;

/// x_j == 0 is accepted only where the exponent is zero; otherwise
/// DomainError.
double eval(const Monomial& m, std::span<const double> x);
double eval(const Posynomial& p, std::span<const double> x);

/// Best local monomial under-estimator of g at x_hat:
///   g_hat(x) = prod_k (w_k(x) / a_k)^{a_k},  a_k = w_k(x_hat) / g(x_hat).
/// g_hat(x_hat) = g(x_hat) and g_hat <= g on the positive orthant.
Condensation condense(const Posynomial& g, std::span<const double> x_hat);

/// Product of two posynomials, keeping every pairwise term (no merging).
Posynomial multiply(const Posynomial& a, const Posynomial& b);

/// Orders terms lexicographically by exponent vector (stable).
void sort_terms(Posynomial& p);

/// Phi_m(p) = (sum_i p_i g_Em,i + sigma2_Em + P_s h_Em)(sum_i p_i g_D,i + sigma2_D)
Posynomial build_phi(const Scenario& s, const ChannelGains& c, std::size_t m);
/// Psi_m(p) = (sum_i p_i g_D,i + P_s h_D + sigma2_D)(sum_i p_i g_Em,i + sigma2_Em)
Posynomial build_psi(const Scenario& s, const ChannelGains& c, std::size_t m);

/// minimize objective(x) s.t. each constraint(x) <= 1, all x > 0.
struct GeometricProgram {
  Monomial objective;
  std::vector<Posynomial> constraints;

  std::size_t n_vars() const { return objective.n_vars(); }
};

/// P3 at expansion point p_tilde. Variables are (p_1..p_N, tau); tau is last.
struct P3Problem {
  std::size_t n_jammers = 0;
  double p_floor = 0.0;
  std::vector<double> expansion;  // p_tilde, raised to p_floor where smaller
  std::vector<double> p_max;
  std::vector<Posynomial> phi;
  std::vector<Posynomial> psi;
  std::vector<Condensation> psi_hat;
  GeometricProgram program;

  /// Phi_m / Psi_hat_m at p.
  double gamma_hat(std::size_t m, std::span<const double> p) const;
  /// Phi_m / Psi_m at p, equal to (1 + SINR_Em) / (1 + SINR_D).
  double gamma(std::size_t m, std::span<const double> p) const;
  /// A point (p, tau) strictly inside every constraint.
  std::vector<double> strictly_feasible_start() const;
};

/// Lower power bound used for every GP variable: 1e-8 * min(p_max).
double p_floor_for(const Scenario& s);

/// Builds P3 for channels `c`, condensing Psi_m at `p_tilde`. Throws
/// InvalidInput if p_tilde lies outside [0, p_max].
P3Problem build_p3(const Scenario& s, const ChannelGains& c, const PowerAllocation& p_tilde);

struct GpSolution {
  std::vector<double> x;
  double objective = 0.0;
  double duality_gap = 0.0;  // bound on log(objective) - log(optimum)
  int newton_steps = 0;
};

/// Log-domain barrier method: y = ln x turns each posynomial constraint into
/// a convex log-sum-exp, minimized by damped Newton steps along the central
/// path until the log-objective gap is below `tol`. `start` must be strictly
/// feasible. Throws AccuracyNotReached carrying the best objective when the
/// Newton step budget runs out.
GpSolution gp_solve(const GeometricProgram& program, std::span<const double> start, double tol = 1e-9);

/// Convenience: solves P3 from its strictly feasible start and returns
/// (p*, tau*).
struct P3Solution {
  std::vector<double> p;
  double tau = 0.0;
  GpSolution raw;
};
P3Solution solve_p3(const P3Problem& problem, double tol = 1e-9);

}  // namespace coopjam::gp
