#pragma once

#include <optional>

#include "coopjam/model.hpp"
#include "coopjam/numerics/lp.hpp"

namespace coopjam {

struct FeasibilityVerdict {
  bool feasible = false;
  std::optional<PowerAllocation> witness;
  /// Smallest slack of the positive-secrecy rows at the witness (before the
  /// strictness margin is subtracted). NaN when infeasible.
  double margin = 0.0;
  /// Margin that was added to every row right-hand side.
  double strict_margin = 0.0;
};

/// Default strictness margin: 1e-9 times the largest |rhs| term magnitude.
double default_strict_margin(const Scenario& s, const ChannelGains& c);

/// min 1^T p subject to, for every eavesdropper m,
///   p^T (h_d g_Em - h_Em g_D) >= h_Em sigma2_D - h_d sigma2_Em + strict_margin,
/// and 0 <= p <= p_max.
numerics::LinearProgram build_feasibility_lp(const Scenario& s, const ChannelGains& c, double strict_margin);

/// Decides whether some allocation within the budgets makes every
/// eavesdropper's SINR strictly smaller than the destination's.
FeasibilityVerdict check_positive_secrecy(const Scenario& s, const ChannelGains& c);
FeasibilityVerdict check_positive_secrecy(const Scenario& s, const ChannelGains& c, double strict_margin);

}  // namespace coopjam
