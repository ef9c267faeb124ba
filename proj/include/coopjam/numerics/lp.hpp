#pragma once

#include <limits>
#include <vector>

#include "coopjam/error.hpp"

namespace coopjam::numerics {

enum class Relation { kLessEqual, kGreaterEqual, kEqual };

struct LinearConstraint {
  std::vector<double> a;
  Relation relation = Relation::kLessEqual;
  double b = 0.0;
};

/// minimize objective^T x subject to the rows and lower <= x <= upper.
/// Empty bound vectors mean 0 below and +inf above.
struct LinearProgram {
  std::vector<double> objective;
  std::vector<LinearConstraint> constraints;
  std::vector<double> lower_bounds;
  std::vector<double> upper_bounds;

  std::size_t n_vars() const { return objective.size(); }
  /// Throws InvalidInput on ragged rows, NaNs, or inverted bounds.
  void validate() const;
};

enum class LpStatus { kOptimal, kInfeasible, kUnbounded };

struct LpResult {
  LpStatus status = LpStatus::kInfeasible;
  std::vector<double> x;  // empty unless optimal
  double value = std::numeric_limits<double>::quiet_NaN();

  bool optimal() const { return status == LpStatus::kOptimal; }
};

/// Dense two-phase simplex with Bland's anti-cycling rule. Infeasible and
/// unbounded problems are reported through `status`, not exceptions.
LpResult lp_solve(const LinearProgram& lp);

/// Largest violation of any row or bound at `x`, scaled by 1 + |b|.
double max_violation(const LinearProgram& lp, const std::vector<double>& x);

}  // namespace coopjam::numerics
