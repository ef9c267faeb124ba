#include "coopjam/numerics/expint.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "coopjam/error.hpp"

namespace coopjam::numerics {

namespace {

constexpr long double kEulerGamma = 0.577215664901532860606512090082402431L;
constexpr int kMaxTerms = 100000;

}  // namespace

namespace detail {

double ei_series(double x) {
  if (!(x < 0.0)) throw DomainError("ei_series: argument must be negative");
  const long double xl = x;
  long double term = 1.0L;  // x^k / k!
  long double sum = 0.0L;
  for (int k = 1; k < kMaxTerms; ++k) {
    term *= xl / k;
    const long double contrib = term / k;
    sum += contrib;
    if (k > -x && std::fabs(contrib) <= std::numeric_limits<long double>::epsilon() * std::fabs(sum)) break;
  }
  return static_cast<double>(kEulerGamma + std::log(-xl) + sum);
}

double scaled_en_continued_fraction(int n, double z) {
  if (n < 1 || !(z > 0.0)) throw DomainError("scaled_en_continued_fraction: need n >= 1, z > 0");
  // Modified Lentz evaluation of e^z E_n(z) = 1/(z+n-) 1*n/(z+n+2-) ...
  constexpr double tiny = 1e-300;
  double b = z + n;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < kMaxTerms; ++i) {
    const double an = -static_cast<double>(i) * (n - 1 + i);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double del = c * d;
    h *= del;
    if (std::abs(del - 1.0) <= 1e-16) return h;
  }
  throw AccuracyNotReached("E_n continued fraction did not converge", h, std::numeric_limits<double>::quiet_NaN());
}

double ei_continued_fraction(double x) {
  if (!(x < 0.0)) throw DomainError("ei_continued_fraction: argument must be negative");
  return -std::exp(x) * scaled_en_continued_fraction(1, -x);
}

double exp_over_power_finite_sum(int i, double a, double c) {
  if (i < 1 || !(a > 0.0) || !(c > 0.0)) throw DomainError("exp_over_power_finite_sum: need i >= 1, a, c > 0");
  // (1/(i-1)!) sum_{r=1}^{i-1} (r-1)! (-a)^{i-r-1} c^{-r}
  //   - (-a)^{i-1}/(i-1)! e^{ac} Ei(-ac)
  double fact_im1 = 1.0;
  for (int k = 2; k < i; ++k) fact_im1 *= k;
  double sum = 0.0;
  double fact_rm1 = 1.0;
  for (int r = 1; r <= i - 1; ++r) {
    if (r > 1) fact_rm1 *= (r - 1);
    sum += fact_rm1 * std::pow(-a, i - r - 1) * std::pow(c, -r);
  }
  return sum / fact_im1 - std::pow(-a, i - 1) / fact_im1 * scaled_ei_neg(a * c);
}

}  // namespace detail

double exp_integral_ei(double x) {
  if (std::isnan(x) || x >= 0.0)
    throw DomainError("exp_integral_ei: defined here for x < 0 only, got " + std::to_string(x));
  if (-x <= kEiCutover) return detail::ei_series(x);
  return detail::ei_continued_fraction(x);
}

double scaled_ei_neg(double z) {
  if (!(z > 0.0)) throw DomainError("scaled_ei_neg: argument must be positive");
  if (z <= kEiCutover) return std::exp(z) * detail::ei_series(-z);
  return -detail::scaled_en_continued_fraction(1, z);
}

double scaled_expint_en(int n, double z) {
  if (n < 1 || !(z > 0.0)) throw DomainError("scaled_expint_en: need n >= 1, z > 0");
  if (n == 1) return -scaled_ei_neg(z);
  if (z > 1.0) return detail::scaled_en_continued_fraction(n, z);
  // Upward recurrence S_{k+1} = (1 - z S_k) / k is stable for z <= 1.
  double s = -scaled_ei_neg(z);
  for (int k = 1; k < n; ++k) s = (1.0 - z * s) / k;
  return s;
}

double exp_over_power_integral(int i, double a, double c) {
  if (i < 1 || !(a > 0.0) || !(c > 0.0)) throw DomainError("exp_over_power_integral: need i >= 1, a, c > 0");
  const double z = a * c;
  // The finite-sum form cancels badly once a*c exceeds ~1.
  if (z <= 1.0) return detail::exp_over_power_finite_sum(i, a, c);
  return std::pow(c, 1 - i) * detail::scaled_en_continued_fraction(i, z);
}

}  // namespace coopjam::numerics
