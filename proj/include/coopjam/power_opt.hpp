#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "coopjam/error.hpp"
#include "coopjam/model.hpp"

namespace coopjam {

struct IterationRecord {
  PowerAllocation p;
  double secrecy_rate = 0.0;
  double tau = 0.0;  // optimum of the condensed problem solved at this step
};

enum class StopReason { kTolerance, kMaxIter };

/// Successive-GP iterates. Entry 0 is the initial point; secrecy rates are
/// nondecreasing along the list.
struct IterationTrace {
  std::vector<IterationRecord> iterations;
  bool converged = false;
  StopReason stop_reason = StopReason::kMaxIter;
};

struct OptimizationResult {
  PowerAllocation p;
  double rate = 0.0;
  IterationTrace trace;
};

/// A GP solve failed partway; the iterations completed so far are attached.
class OptimizationFailed : public NumericalError {
 public:
  OptimizationFailed(const std::string& what, IterationTrace trace)
      : NumericalError(what), trace_(std::move(trace)) {}
  const IterationTrace& trace() const noexcept { return trace_; }

 private:
  IterationTrace trace_;
};

struct AlgorithmAOptions {
  double tol = 1e-6;   // stop once the rate changes by less than this (bits)
  int max_iter = 100;
  double gp_tol = 1e-9;
};

/// Default starting point: half of every jammer's budget.
PowerAllocation default_initial_allocation(const Scenario& s);

/// Successive geometric programming: condense every Psi_m at the current
/// allocation, solve the resulting GP, repeat. Coordinates that end within
/// 10 * p_floor of zero are snapped to exactly zero; the returned rate is the
/// exact secrecy rate of the returned allocation.
OptimizationResult algorithm_a(const Scenario& s, const ChannelGains& c, const PowerAllocation& p0,
                               const AlgorithmAOptions& opts = {});
OptimizationResult algorithm_a(const Scenario& s, const ChannelGains& c);

struct KktReport {
  /// Smallest Gamma_hat_m(p) - Gamma_m(p) over the probes and eavesdroppers.
  double min_bound_gap = 0.0;
  /// max_m |Gamma_m(p) - Gamma_hat_m(p)| at the expansion point.
  double equality_residual = 0.0;
  /// max |dGamma_m/dy_i - dGamma_hat_m/dy_i|, y_i = ln p_i, over interior
  /// coordinates.
  double gradient_residual = 0.0;
  std::size_t interior_coordinates = 0;
  /// Boundary coordinates where the one-sided slopes of Gamma and
  /// Gamma_hat disagree in sign.
  std::size_t boundary_sign_mismatches = 0;
};

/// Numerically checks the three conditions that make a fixed point of the
/// successive approximation a KKT point of the exact problem: the bound
/// Gamma <= Gamma_hat (on n_probes random feasible points), equality at the
/// expansion point, and matching gradients there (central differences in
/// ln p_i with step 1e-5; a step proportional to p_i drowns in rounding once
/// p_i is near the floor).
KktReport kkt_check(const Scenario& s, const ChannelGains& c, const PowerAllocation& p_star, int n_probes,
                    std::uint64_t seed = 0);

/// Result of the fixed-interference subproblem.
struct P5Result {
  double t = 0.0;  // best ratio (1 + SINR_D) / (1 + SINR_Em) common to every m
  PowerAllocation p;
};

/// Fixed total interference at the destination: maximize t subject to
/// sum_i p_i g_D,i = t0, ratio_m >= t for every m, 0 <= p <= p_max.
/// Bisection over t with one LP feasibility check per candidate; nullopt
/// when the interference level cannot be met within the budgets.
std::optional<P5Result> solve_p5(const Scenario& s, const ChannelGains& c, double t0, double rel_tol = 1e-8);

struct AlgorithmBResult {
  PowerAllocation p;
  double rate = 0.0;
  double t0 = 0.0;
  int p5_solves = 0;
};

/// One-dimensional search over the total destination interference t0 in
/// [0, sum_i p_max_i g_D,i]. A scan over a 64-cell grid, the full-power
/// jammer subsets and the probe (t_min + 3 t_max) / 4 picks a bracket; the
/// subproblem value is then maximized inside it to width `eps`.
AlgorithmBResult algorithm_b(const Scenario& s, const ChannelGains& c, double eps);
AlgorithmBResult algorithm_b(const Scenario& s, const ChannelGains& c);

struct SingleJammerResult {
  PowerAllocation p;
  double rate = 0.0;
  std::size_t jammer = 0;
};

/// Best single active jammer: for each j, a 200-point grid over [0, p_max_j]
/// refined by golden section; returns the best of the N candidates.
SingleJammerResult best_jammer_selection(const Scenario& s, const ChannelGains& c);

}  // namespace coopjam
