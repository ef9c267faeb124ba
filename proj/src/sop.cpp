#include "coopjam/sop.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include <boost/math/special_functions/expint.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>

#include "coopjam/error.hpp"
#include "coopjam/numerics/expint.hpp"
#include "coopjam/numerics/quadrature.hpp"

namespace coopjam::sop {

namespace {

double min_relative_gap(std::span<const double> p) {
  double gap = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < p.size(); ++i)
    for (std::size_t j = i + 1; j < p.size(); ++j)
      gap = std::min(gap, std::abs(p[i] - p[j]) / std::min(p[i], p[j]));
  return gap;
}


double clamp01(double v) { return std::clamp(v, 0.0, 1.0); }

}  // namespace

void SopScenario::validate() const {
  scenario.validate();
  if (!(rate > 0.0) || !std::isfinite(rate)) throw InvalidInput("SOP rate must be finite and > 0");
  // Slack so that the 1 + n * 1e-6 perturbation is accepted.
  if (min_relative_gap(scenario.p_max) < kMinPowerGap * (1.0 - 1e-3))
    throw DegenerateError("jammer powers must be pairwise distinct (relative gap >= 1e-6); "
                          "use perturb_equal_powers or the Monte Carlo estimator");
}

SopScenario perturb_equal_powers(const SopScenario& sc, std::string* warning) {
  SopScenario out = sc;
  if (min_relative_gap(sc.scenario.p_max) >= kMinPowerGap) return out;
  for (std::size_t n = 0; n < out.scenario.p_max.size(); ++n)
    out.scenario.p_max[n] *= 1.0 + static_cast<double>(n) * 1e-6;
  if (warning) *warning = "jammer powers perturbed by factors 1 + n*1e-6 to make them distinct";
  return out;
}

std::vector<double> coeff_a(std::span<const double> powers) {
  if (powers.empty()) throw InvalidInput("coeff_a: need at least one power");
  for (double p : powers)
    if (!(p > 0.0) || !std::isfinite(p)) throw InvalidInput("coeff_a: powers must be positive");
  if (min_relative_gap(powers) <= 1e-9) throw DegenerateError("coeff_a: powers must be pairwise distinct");
  std::vector<double> a(powers.size());
  for (std::size_t n = 0; n < powers.size(); ++n) {
    double denom = powers[n];
    for (std::size_t j = 0; j < powers.size(); ++j)
      if (j != n) denom *= 1.0 - powers[j] / powers[n];
    a[n] = 1.0 / denom;
  }
  return a;
}

SopConstants make_constants(const SopScenario& sc) {
  sc.validate();
  const Scenario& s = sc.scenario;
  SopConstants k;
  k.mu = std::exp2(sc.rate);
  k.nu = std::exp2(-sc.rate) - 1.0;
  k.xi = s.sigma2_dest * k.mu / s.p_source;
  k.a_coeff = coeff_a(s.p_max);
  for (double p : s.p_max) {
    k.lambda.push_back(s.p_source / p);
    k.kappa.push_back(s.p_source / (k.mu * p) - k.nu);
  }
  return k;
}

double cdf_gamma(double x, double sigma2, const SopConstants& k, const Scenario& s) {
  if (x <= 0.0) return 0.0;
  double sum = 0.0;
  for (std::size_t n = 0; n < k.a_coeff.size(); ++n) {
    const double pn = s.p_max[n];
    sum += k.a_coeff[n] * pn / (pn * x + s.p_source);
  }
  return clamp01(1.0 - s.p_source * std::exp(-sigma2 * x / s.p_source) * sum);
}

double cdf_gamma_d(double x, const SopConstants& k, const Scenario& s) { return cdf_gamma(x, s.sigma2_dest, k, s); }

double pdf_gamma_d(double x, const SopConstants& k, const Scenario& s) {
  if (x < 0.0) return 0.0;
  const double ps = s.p_source, sd = s.sigma2_dest;
  double sum = 0.0;
  for (std::size_t n = 0; n < k.a_coeff.size(); ++n) {
    const double pn = s.p_max[n];
    const double den = pn * x + ps;
    sum += k.a_coeff[n] * pn * (sd / den + ps * pn / (den * den));
  }
  return std::exp(-sd * x / ps) * sum;
}

double cdf_gamma_emax(double x, const SopConstants& k, const Scenario& s) {
  double prod = 1.0;
  for (double sigma2 : s.sigma2_eaves) prod *= cdf_gamma(x, sigma2, k, s);
  return prod;
}

const char* method_name(Method m) {
  switch (m) {
    case Method::kClosedForm: return "closed";
    case Method::kClosedFormN2M1: return "closed_n2m1";
    case Method::kIntegral: return "integral";
    case Method::kMonteCarlo: return "mc";
  }
  return "?";
}

SopResult sop_integral(const SopScenario& sc, double rel_tol) {
  if (!(rel_tol > 0.0)) throw InvalidInput("sop_integral: rel_tol must be positive");
  const auto k = make_constants(sc);
  const Scenario& s = sc.scenario;
  auto integrand = [&](double x) { return cdf_gamma_emax(x, k, s) * pdf_gamma_d(k.mu * (x - k.nu), k, s); };
  numerics::QuadratureOptions opts;
  opts.rel_tol = rel_tol;
  opts.abs_tol = 1e-14;
  const auto q = numerics::integrate_semi_infinite(integrand, 0.0, opts);
  return {clamp01(1.0 - k.mu * q.value), Method::kIntegral, k.mu * q.abs_error_estimate};
}

namespace {

using Real50 = boost::multiprecision::cpp_bin_float_50;
using Real100 = boost::multiprecision::cpp_bin_float_100;

using std::abs;
using std::exp;
using std::pow;

// e^z E_n(z) and e^z Ei(-z) per scalar type.
inline double elementary(int i, double a, double c) { return numerics::exp_over_power_integral(i, a, c); }
inline double scaled_ei(double z) { return numerics::scaled_ei_neg(z); }

template <class R>
R elementary(int i, const R& a, const R& c) {
  const R z = a * c;
  return pow(c, 1 - i) * exp(z) * boost::math::expint(i, z);
}
template <class R>
R scaled_ei(const R& z) {
  return -exp(z) * boost::math::expint(1, z);
}

template <class R>
std::vector<R> taylor_impl(const R& x0, const std::vector<R>& b, std::span<const int> e, int order) {
  std::vector<R> u;
  std::vector<int> ex;
  R f0 = 1;
  for (std::size_t q = 0; q < b.size(); ++q) {
    if (e[q] == 0) continue;
    const R uq = x0 + b[q];
    const R scale = std::max<R>(std::max<R>(abs(x0), abs(b[q])), R(1e-300));
    if (abs(uq) <= R(1e-9) * scale) throw DegenerateError("partial fractions: coinciding poles");
    u.push_back(uq);
    ex.push_back(e[q]);
    f0 *= pow(uq, -e[q]);
  }
  // d/dh log f(x0 + h) = sum_r L_r h^r with L_r = sum_q -e_q (-1)^r u_q^{-r-1}.
  std::vector<R> logd(static_cast<std::size_t>(order) + 1, R(0));
  for (std::size_t q = 0; q < u.size(); ++q) {
    R inv_pow = 1 / u[q];
    int sign = 1;
    for (int r = 0; r <= order; ++r) {
      logd[static_cast<std::size_t>(r)] -= ex[q] * sign * inv_pow;
      inv_pow /= u[q];
      sign = -sign;
    }
  }
  std::vector<R> c(static_cast<std::size_t>(order) + 1, R(0));
  c[0] = f0;
  for (int r = 0; r < order; ++r) {
    R acc = 0;
    for (int j = 0; j <= r; ++j) acc += c[static_cast<std::size_t>(j)] * logd[static_cast<std::size_t>(r - j)];
    c[static_cast<std::size_t>(r) + 1] = acc / (r + 1);
  }
  return c;
}

// Returns the integral; `abs_sum` accumulates the magnitudes of the
// partial-fraction terms, a bound on the cancellation involved.
template <class R>
R basic_integral_impl(int ell, std::span<const int> k, const R& a1, const R& a2, const std::vector<R>& a3,
                      R* abs_sum) {
  R total = 0;
  const auto z = taylor_impl<R>(-a2, a3, k, ell - 1);
  for (int r = 0; r < ell; ++r) {
    const R term = z[static_cast<std::size_t>(r)] * elementary(ell - r, a1, a2);
    total += term;
    if (abs_sum) *abs_sum += abs(term);
  }
  std::vector<R> b = a3;
  b.push_back(a2);
  std::vector<int> e(k.begin(), k.end());
  e.push_back(ell);
  for (std::size_t j = 0; j < k.size(); ++j) {
    if (k[j] == 0) continue;
    const int kj = k[j];
    e[j] = 0;
    const auto theta = taylor_impl<R>(-a3[j], b, e, kj - 1);
    e[j] = kj;
    for (int r = 0; r < kj; ++r) {
      const R term = theta[static_cast<std::size_t>(r)] * elementary(kj - r, a1, a3[j]);
      total += term;
      if (abs_sum) *abs_sum += abs(term);
    }
  }
  return total;
}

void check_basic_integral_args(int ell, std::span<const int> k, double a1, double a2, std::span<const double> a3) {
  if (ell < 1) throw InvalidInput("basic_integral: ell must be >= 1");
  if (k.size() != a3.size()) throw InvalidInput("basic_integral: k and a3 sizes differ");
  if (!(a1 > 0.0) || !(a2 > 0.0)) throw DomainError("basic_integral: a1 and a2 must be positive");
  for (std::size_t n = 0; n < k.size(); ++n) {
    if (k[n] < 0) throw InvalidInput("basic_integral: negative multiplicity");
    if (k[n] > 0 && !(a3[n] > 0.0)) throw DomainError("basic_integral: a3 entries must be positive");
  }
  for (std::size_t i = 0; i < a3.size(); ++i)
    for (std::size_t j = i + 1; j < a3.size(); ++j)
      if (k[i] > 0 && k[j] > 0 && std::abs(a3[i] - a3[j]) <= 1e-9 * std::max(a3[i], a3[j]))
        throw DegenerateError("basic_integral: coinciding a3 poles");
}

}  // namespace

std::vector<double> reciprocal_product_taylor(double x0, std::span<const double> b, std::span<const int> e,
                                              int order) {
  if (b.size() != e.size()) throw InvalidInput("reciprocal_product_taylor: size mismatch");
  return taylor_impl<double>(x0, std::vector<double>(b.begin(), b.end()), e, order);
}

double basic_integral(int ell, std::span<const int> k, double a1, double a2, std::span<const double> a3) {
  check_basic_integral_args(ell, k, a1, a2, a3);
  return basic_integral_impl<double>(ell, k, a1, a2, std::vector<double>(a3.begin(), a3.end()), nullptr);
}

double closed_form_term_count(std::size_t n_jammers, std::size_t n_eavesdroppers) {
  // sum_i C(M, i) * C(i + N - 1, N - 1)
  auto binom = [](double n, double r) {
    double v = 1.0;
    for (double i = 1; i <= r; ++i) v = v * (n - r + i) / i;
    return v;
  };
  double count = 0.0;
  for (std::size_t i = 1; i <= n_eavesdroppers; ++i)
    count += binom(static_cast<double>(n_eavesdroppers), static_cast<double>(i)) *
             binom(static_cast<double>(i + n_jammers - 1), static_cast<double>(n_jammers - 1));
  return count;
}

namespace {

// All k in N^n with sum == total, lexicographic.
void for_each_composition(std::size_t n, int total, const std::function<void(const std::vector<int>&)>& fn) {
  std::vector<int> k(n, 0);
  std::function<void(std::size_t, int)> rec = [&](std::size_t pos, int left) {
    if (pos + 1 == n) {
      k[pos] = left;
      fn(k);
      return;
    }
    for (int v = 0; v <= left; ++v) {
      k[pos] = v;
      rec(pos + 1, left - v);
    }
  };
  rec(0, total);
}

// All size-r subsets of {0..m-1}, lexicographic.
void for_each_subset(std::size_t m, std::size_t r, const std::function<void(const std::vector<std::size_t>&)>& fn) {
  std::vector<std::size_t> idx(r);
  for (std::size_t i = 0; i < r; ++i) idx[i] = i;
  while (true) {
    fn(idx);
    std::size_t i = r;
    while (i > 0 && idx[i - 1] == m - r + i - 1) --i;
    if (i == 0) return;
    ++idx[i - 1];
    for (std::size_t j = i; j < r; ++j) idx[j] = idx[j - 1] + 1;
  }
}

// The constants recomputed in R from the double inputs.
template <class R>
struct ConstantsR {
  R ps, sd, mu, nu, xi;
  std::vector<R> kappa, lambda, a;
};

template <class R>
ConstantsR<R> constants_in(const SopScenario& sc) {
  const Scenario& s = sc.scenario;
  ConstantsR<R> k;
  k.ps = s.p_source;
  k.sd = s.sigma2_dest;
  k.mu = pow(R(2), R(sc.rate));
  k.nu = 1 / k.mu - 1;
  k.xi = k.sd * k.mu / k.ps;
  const std::size_t n = s.n_jammers;
  for (std::size_t i = 0; i < n; ++i) {
    const R pi = s.p_max[i];
    R denom = pi;
    for (std::size_t j = 0; j < n; ++j)
      if (j != i) denom *= 1 - R(s.p_max[j]) / pi;
    k.a.push_back(1 / denom);
    k.lambda.push_back(k.ps / pi);
    k.kappa.push_back(k.ps / (k.mu * pi) - k.nu);
  }
  return k;
}

struct Evaluation {
  double p_out;
  double error_estimate;
};

template <class R>
Evaluation closed_form_impl(const SopScenario& sc) {
  const Scenario& s = sc.scenario;
  const auto k = constants_in<R>(sc);
  const std::size_t n_j = s.n_jammers;
  const std::vector<int> no_k(n_j, 0);

  R y = 0, y_abs = 0;
  auto add_terms = [&](const R& weight, const std::vector<int>& comp, const R& a1) {
    for (std::size_t n = 0; n < n_j; ++n) {
      R abs1 = 0, abs2 = 0;
      const R i1 = basic_integral_impl<R>(1, comp, a1, k.kappa[n], k.lambda, &abs1);
      const R i2 = basic_integral_impl<R>(2, comp, a1, k.kappa[n], k.lambda, &abs2);
      const R f = weight * k.a[n] / k.mu;
      y += f * (k.sd * i1 + k.ps / k.mu * i2);
      y_abs += abs(f) * (k.sd * abs1 + k.ps / k.mu * abs2);
    }
  };

  // Leading term: the "1" of the product expansion.
  add_terms(R(1), no_k, k.xi);

  for (std::size_t size = 1; size <= s.n_eavesdroppers; ++size) {
    const R sign = (size % 2 == 1) ? -1 : 1;
    const R ps_pow = pow(k.ps, static_cast<int>(size));
    R fact = 1;
    for (std::size_t i = 2; i <= size; ++i) fact *= static_cast<int>(i);
    for_each_subset(s.n_eavesdroppers, size, [&](const std::vector<std::size_t>& subset) {
      R sigma_sum = 0;
      for (std::size_t m : subset) sigma_sum += R(s.sigma2_eaves[m]);
      const R psi = k.xi + sigma_sum / k.ps;
      for_each_composition(n_j, static_cast<int>(size), [&](const std::vector<int>& comp) {
        R weight = fact;
        for (std::size_t t = 0; t < n_j; ++t) {
          for (int f = 2; f <= comp[t]; ++f) weight /= f;
          weight *= pow(k.a[t], comp[t]);
        }
        add_terms(sign * ps_pow * weight, comp, psi);
      });
    });
  }
  const R scale = k.mu * exp(k.xi * k.nu);
  const R p = 1 - scale * y;
  const double err = static_cast<double>(scale * y_abs * std::numeric_limits<R>::epsilon()) * 100.0;
  return {static_cast<double>(p), err};
}

template <class R>
Evaluation n2m1_impl(const SopScenario& sc) {
  const auto k = constants_in<R>(sc);
  const R psi = k.xi + R(sc.scenario.sigma2_eaves[0]) / k.ps;
  const auto& a = k.a;
  const auto& kap = k.kappa;
  const auto& lam = k.lambda;
  const R ps = k.ps, sd = k.sd, mu = k.mu;

  auto i10 = [](const R& a1, const R& a2) { return R(-scaled_ei(R(a1 * a2))); };
  auto i20 = [](const R& a1, const R& a2) { return R(1 / a2 + a1 * scaled_ei(R(a1 * a2))); };
  auto i11 = [&](const R& a1, const R& kk, const R& ll) { return R((i10(a1, kk) - i10(a1, ll)) / (ll - kk)); };
  auto i21 = [&](const R& a1, const R& kk, const R& ll) {
    return R((i10(a1, ll) - i10(a1, kk)) / ((kk - ll) * (kk - ll)) - i20(a1, kk) / (kk - ll));
  };

  R y = 0, y_abs = 0;
  auto add = [&](const R& v) {
    y += v;
    y_abs += abs(v);
  };
  for (int n = 0; n < 2; ++n) add(a[n] / mu * (sd * i10(k.xi, kap[n]) + ps / mu * i20(k.xi, kap[n])));
  for (int n = 0; n < 2; ++n)
    add(-ps * a[n] * a[n] / mu * (sd * i11(psi, kap[n], lam[n]) + ps / mu * i21(psi, kap[n], lam[n])));
  add(-ps * a[0] * a[1] * sd / mu * (i11(psi, kap[0], lam[1]) + i11(psi, kap[1], lam[0])));
  add(-ps * ps * a[0] * a[1] / (mu * mu) * (i21(psi, kap[0], lam[1]) + i21(psi, kap[1], lam[0])));
  const R scale = mu * exp(k.xi * k.nu);
  const R p = 1 - scale * y;
  return {static_cast<double>(p), static_cast<double>(scale * y_abs * std::numeric_limits<R>::epsilon()) * 100.0};
}

// Runs `eval` at 50 digits and again at 100 when cancellation ate too much.
template <class F50, class F100>
SopResult with_precision_escalation(F50 eval50, F100 eval100, Method method) {
  constexpr double kTarget = 1e-12;
  Evaluation e = eval50();
  if (e.error_estimate > kTarget) e = eval100();
  if (!std::isfinite(e.p_out)) throw NumericalError("closed-form SOP evaluation produced a non-finite value");
  return {clamp01(e.p_out), method, e.error_estimate};
}

}  // namespace

SopResult sop_closed_form(const SopScenario& sc, double max_terms) {
  sc.validate();
  const Scenario& s = sc.scenario;
  const double terms = closed_form_term_count(s.n_jammers, s.n_eavesdroppers);
  if (terms > max_terms)
    throw ResourceError("sop_closed_form: " + std::to_string(static_cast<long long>(terms)) +
                        " subset/composition terms exceed the cap; use sop_integral");
  return with_precision_escalation([&] { return closed_form_impl<Real50>(sc); },
                                   [&] { return closed_form_impl<Real100>(sc); }, Method::kClosedForm);
}

SopResult sop_closed_form_n2m1(const SopScenario& sc) {
  const Scenario& s = sc.scenario;
  if (s.n_jammers != 2 || s.n_eavesdroppers != 1)
    throw InvalidInput("sop_closed_form_n2m1 requires N = 2 and M = 1");
  sc.validate();
  return with_precision_escalation([&] { return n2m1_impl<Real50>(sc); }, [&] { return n2m1_impl<Real100>(sc); },
                                   Method::kClosedFormN2M1);
}

}  // namespace coopjam::sop
