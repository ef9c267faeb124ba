#pragma once

namespace coopjam::numerics {

/// |x| at which Ei switches from the power series to the continued fraction.
inline constexpr double kEiCutover = 6.0;

/// Ei(x) for x < 0; throws DomainError otherwise.
double exp_integral_ei(double x);

/// exp(z) * Ei(-z) for z > 0, evaluated without overflow for large z.
double scaled_ei_neg(double z);

/// exp(z) * E_n(z) for n >= 1, z > 0 (generalized exponential integral).
double scaled_expint_en(int n, double z);

/// Integral over [0, inf) of exp(-a x) / (x + c)^i for a, c > 0, i >= 1.
double exp_over_power_integral(int i, double a, double c);

namespace detail {
/// Convergent power series for Ei(x), x < 0, summed in extended precision.
double ei_series(double x);
/// Lentz continued fraction for E1, returned as Ei(x) = -E1(-x), x < 0.
double ei_continued_fraction(double x);
/// exp(z) E_n(z) by continued fraction; accurate for z >~ 1.
double scaled_en_continued_fraction(int n, double z);
/// Closed form of exp_over_power_integral: finite sum plus one Ei term.
double exp_over_power_finite_sum(int i, double a, double c);
}  // namespace detail

}  // namespace coopjam::numerics
