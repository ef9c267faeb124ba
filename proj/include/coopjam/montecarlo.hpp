#pragma once

#include <cstdint>

#include "coopjam/sop.hpp"

namespace coopjam::sop {

struct OutageEstimate {
  double p_out = 0.0;
  double std_error = 0.0;  // binomial, sqrt(p (1 - p) / n)
  std::int64_t n_samples = 0;
  std::uint64_t seed = 0;
};

/// Outage when gamma_Emax >= gamma_D / mu + nu.
bool outage_single_event(double gamma_d, double gamma_emax, double rate);
/// Outage when gamma_D <= gamma_Emax, or else log2((1 + gamma_D) / (1 + gamma_Emax)) < rate.
bool outage_conditional(double gamma_d, double gamma_emax, double rate);

/// Plain Monte Carlo over unit-mean Rayleigh gains with the jammers at
/// `scenario.p_max`. Sample i uses the stream Rng::substream(seed, i), so the
/// estimate does not depend on `threads` (0 picks hardware concurrency).
/// Equal jammer powers are allowed. Throws InvalidInput for n_samples < 1000.
OutageEstimate estimate_sop(const SopScenario& sc, std::int64_t n_samples, std::uint64_t seed,
                            unsigned threads = 0);

}  // namespace coopjam::sop
