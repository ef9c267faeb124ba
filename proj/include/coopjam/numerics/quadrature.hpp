#pragma once

#include <functional>

namespace coopjam::numerics {

struct QuadratureResult {
  double value = 0.0;
  double abs_error_estimate = 0.0;
  int evaluations = 0;
};

struct QuadratureOptions {
  double rel_tol = 1e-10;
  double abs_tol = 1e-12;
  int max_subdivisions = 4000;
};

/// Globally adaptive 15-point Gauss-Kronrod on [a, b].
QuadratureResult integrate(const std::function<double(double)>& f, double a, double b,
                           const QuadratureOptions& opts = {});

/// Integral of f over [a, inf) via x = a + t / (1 - t), t in [0, 1).
/// Throws AccuracyNotReached (with the best estimate) when the error target
/// max(rel_tol * |value|, abs_tol) is not met within max_subdivisions, and
/// NumericalError when f returns a non-finite sample.
QuadratureResult integrate_semi_infinite(const std::function<double(double)>& f, double a,
                                         double rel_tol);
QuadratureResult integrate_semi_infinite(const std::function<double(double)>& f, double a,
                                         const QuadratureOptions& opts);

}  // namespace coopjam::numerics
