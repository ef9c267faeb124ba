#pragma once

#include <span>
#include <string>
#include <vector>

#include "coopjam/model.hpp"

namespace coopjam::sop {

/// Outage setting over unit-mean Rayleigh fading. The jammers transmit at
/// fixed powers `scenario.p_max`; `rate` is the target secrecy rate in
/// bits/s/Hz.
struct SopScenario {
  Scenario scenario;
  double rate = 1.0;

  /// Throws InvalidInput for rate <= 0 and DegenerateError when two jammer
  /// powers are within a relative gap of kMinPowerGap.
  void validate() const;
};

inline constexpr double kMinPowerGap = 1e-6;

/// Returns a copy whose powers are scaled by 1 + n * 1e-6 (n = 0, 1, ...)
/// so coinciding powers become distinct. `warning` receives a message when
/// anything changed.
SopScenario perturb_equal_powers(const SopScenario& sc, std::string* warning = nullptr);

struct SopConstants {
  double mu = 0.0;   // 2^R
  double nu = 0.0;   // 2^-R - 1
  double xi = 0.0;   // sigma2_D mu / P_s
  std::vector<double> kappa;   // P_s / (mu P_n) - nu
  std::vector<double> lambda;  // P_s / P_n
  std::vector<double> a_coeff;
};

SopConstants make_constants(const SopScenario& sc);

/// Partial-fraction weights of the hypoexponential density
/// sum_n A_n exp(-y / P_n) of sum_n P_n X_n, X_n ~ Exp(1):
///   A_n = [P_n prod_{j != n} (1 - P_j / P_n)]^{-1}.
/// Throws DegenerateError when two powers are within relative 1e-9.
std::vector<double> coeff_a(std::span<const double> powers);

/// CDF of P_s X / (Y + sigma2) with X ~ Exp(1) and Y the jamming sum.
double cdf_gamma(double x, double sigma2, const SopConstants& k, const Scenario& s);
double cdf_gamma_d(double x, const SopConstants& k, const Scenario& s);
double pdf_gamma_d(double x, const SopConstants& k, const Scenario& s);
/// Product of the per-eavesdropper CDFs.
double cdf_gamma_emax(double x, const SopConstants& k, const Scenario& s);

enum class Method { kClosedForm, kClosedFormN2M1, kIntegral, kMonteCarlo };
const char* method_name(Method m);

struct SopResult {
  double p_out = 0.0;
  Method method = Method::kIntegral;
  double error_estimate = 0.0;
};

/// 1 - mu * int_0^inf F_Emax(x) f_D(mu x - mu nu) dx by adaptive quadrature.
SopResult sop_integral(const SopScenario& sc, double rel_tol = 1e-11);

/// int_0^inf exp(-a1 x) / [(x + a2)^ell prod_n (x + a3_n)^{k_n}] dx
/// via partial fractions and the finite-sum-plus-Ei elementary integrals.
/// Throws DegenerateError when a2 coincides with some a3_n (k_n > 0) or two
/// active a3 poles coincide.
double basic_integral(int ell, std::span<const int> k, double a1, double a2, std::span<const double> a3);

/// Taylor coefficients c_0..c_{order} of prod_q (x + b_q)^{-e_q} about x0,
/// from the logarithmic-derivative recursion.
std::vector<double> reciprocal_product_taylor(double x0, std::span<const double> b, std::span<const int> e,
                                              int order);

/// Count of (subset, composition) pairs enumerated by sop_closed_form.
double closed_form_term_count(std::size_t n_jammers, std::size_t n_eavesdroppers);

/// Closed form for arbitrary N, M: subsets of eavesdroppers by increasing
/// size, compositions of each size over the N jammers, one basic_integral
/// per term. Throws ResourceError when more than `max_terms` pairs arise.
SopResult sop_closed_form(const SopScenario& sc, double max_terms = 1e6);

/// Special case N = 2, M = 1 evaluated term by term with Ei.
SopResult sop_closed_form_n2m1(const SopScenario& sc);

}  // namespace coopjam::sop
