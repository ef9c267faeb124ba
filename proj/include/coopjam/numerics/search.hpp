#pragma once

#include <functional>

namespace coopjam::numerics {

struct ScalarMax {
  double x = 0.0;
  double value = 0.0;
  int evaluations = 0;
};

/// Maximizes a quasi-concave `f` on [lo, hi] by interval elimination: each
/// step compares f at mid -/+ delta, delta = max(eps / 4, width / 6), and
/// drops the side holding the smaller value (ties keep the left part). Stops once the
/// bracket is shorter than `eps` and returns the best point evaluated.
///
/// f may return -inf for points outside its effective domain; NaN or +inf
/// raise NumericalError.
ScalarMax bisect_max(const std::function<double(double)>& f, double lo, double hi, double eps);

/// Golden-section refinement of a maximum bracketed by [lo, hi].
ScalarMax golden_section_max(const std::function<double(double)>& f, double lo, double hi, double tol);

}  // namespace coopjam::numerics
