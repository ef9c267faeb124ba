#include "coopjam/numerics/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <queue>
#include <vector>

#include "coopjam/error.hpp"

namespace coopjam::numerics {

namespace {

// Kronrod 15-point abscissae (positive half) and weights; every second
// node belongs to the embedded 7-point Gauss rule.
constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
  double a, b, value, error;
  bool operator<(const Panel& o) const { return error < o.error; }
};

Panel gauss_kronrod(const std::function<double(double)>& f, double a, double b, int& evals) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  auto sample = [&](double x) {
    const double v = f(x);
    ++evals;
    if (!std::isfinite(v)) throw NumericalError("quadrature: integrand returned a non-finite value");
    return v;
  };
  const double fc = sample(center);
  double kronrod = fc * kWgk[7];
  double gauss = fc * kWg[3];
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kXgk[static_cast<std::size_t>(j)];
    const double fsum = sample(center - dx) + sample(center + dx);
    kronrod += kWgk[static_cast<std::size_t>(j)] * fsum;
    if (j % 2 == 1) gauss += kWg[static_cast<std::size_t>(j / 2)] * fsum;
  }
  kronrod *= half;
  gauss *= half;
  return {a, b, kronrod, std::abs(kronrod - gauss)};
}

}  // namespace

QuadratureResult integrate(const std::function<double(double)>& f, double a, double b,
                           const QuadratureOptions& opts) {
  if (!(opts.rel_tol > 0.0) || !(opts.abs_tol >= 0.0)) throw InvalidInput("quadrature: bad tolerances");
  if (!std::isfinite(a) || !std::isfinite(b)) throw InvalidInput("quadrature: finite limits required");
  QuadratureResult out;
  if (a == b) return out;

  std::priority_queue<Panel> panels;
  Panel first = gauss_kronrod(f, a, b, out.evaluations);
  double value = first.value, error = first.error;
  panels.push(first);
  int subdivisions = 0;
  while (error > std::max(opts.rel_tol * std::abs(value), opts.abs_tol)) {
    if (subdivisions >= opts.max_subdivisions)
      throw AccuracyNotReached("quadrature: subdivision limit reached", value, error);
    Panel worst = panels.top();
    panels.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b))
      throw AccuracyNotReached("quadrature: interval too small to bisect", value, error);
    Panel left = gauss_kronrod(f, worst.a, mid, out.evaluations);
    Panel right = gauss_kronrod(f, mid, worst.b, out.evaluations);
    value += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
    panels.push(left);
    panels.push(right);
    ++subdivisions;
    // Re-sum periodically so the running totals do not drift.
    if (subdivisions % 64 == 0) {
      auto copy = panels;
      value = error = 0.0;
      while (!copy.empty()) {
        value += copy.top().value;
        error += copy.top().error;
        copy.pop();
      }
    }
  }
  out.value = value;
  out.abs_error_estimate = error;
  return out;
}

QuadratureResult integrate_semi_infinite(const std::function<double(double)>& f, double a,
                                         const QuadratureOptions& opts) {
  auto transformed = [&](double t) {
    const double one_minus = 1.0 - t;
    const double x = a + t / one_minus;
    const double jac = 1.0 / (one_minus * one_minus);
    const double v = f(x);
    // Integrable tails decay faster than the jacobian grows.
    if (v == 0.0) return 0.0;
    return v * jac;
  };
  return integrate(transformed, 0.0, 1.0, opts);
}

QuadratureResult integrate_semi_infinite(const std::function<double(double)>& f, double a,
                                         double rel_tol) {
  QuadratureOptions opts;
  opts.rel_tol = rel_tol;
  return integrate_semi_infinite(f, a, opts);
}

}  // namespace coopjam::numerics
