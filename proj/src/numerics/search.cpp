#include "coopjam/numerics/search.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "coopjam/error.hpp"

namespace coopjam::numerics {

namespace {

double checked(const std::function<double(double)>& f, double x) {
  const double v = f(x);
  if (std::isnan(v) || v == std::numeric_limits<double>::infinity())
    throw NumericalError("bisect_max: objective returned a non-finite value");
  return v;
}

}  // namespace

ScalarMax bisect_max(const std::function<double(double)>& f, double lo, double hi, double eps) {
  if (!(lo < hi)) throw InvalidInput("bisect_max: require lo < hi");
  if (!(eps > 0.0)) throw InvalidInput("bisect_max: require eps > 0");

  ScalarMax best{lo, -std::numeric_limits<double>::infinity(), 0};
  auto probe = [&](double x) {
    const double v = checked(f, x);
    ++best.evaluations;
    if (v > best.value) {
      best.x = x;
      best.value = v;
    }
    return v;
  };

  // Probes sit a sixth of the bracket from the middle (ternary search) so
  // that noisy objectives are compared at well separated points; the
  // spacing never drops below eps / 4, which keeps the final bracket < eps.
  while (hi - lo >= eps) {
    const double mid = 0.5 * (lo + hi);
    const double delta = std::max(0.25 * eps, (hi - lo) / 6.0);
    const double left = probe(mid - delta);
    const double right = probe(mid + delta);
    if (left < right)
      lo = mid - delta;
    else
      hi = mid + delta;
  }
  probe(0.5 * (lo + hi));
  return best;
}

ScalarMax golden_section_max(const std::function<double(double)>& f, double lo, double hi, double tol) {
  if (!(lo <= hi)) throw InvalidInput("golden_section_max: require lo <= hi");
  const double inv_phi = 0.5 * (std::sqrt(5.0) - 1.0);
  ScalarMax out{lo, checked(f, lo), 1};
  auto consider = [&](double x, double v) {
    if (v > out.value) {
      out.x = x;
      out.value = v;
    }
  };
  const double fhi = checked(f, hi);
  ++out.evaluations;
  consider(hi, fhi);
  double a = lo, b = hi;
  double c = b - inv_phi * (b - a), d = a + inv_phi * (b - a);
  double fc = checked(f, c), fd = checked(f, d);
  out.evaluations += 2;
  while (b - a > tol) {
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = checked(f, c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = checked(f, d);
    }
    ++out.evaluations;
    consider(c, fc);
    consider(d, fd);
  }
  return out;
}

}  // namespace coopjam::numerics
