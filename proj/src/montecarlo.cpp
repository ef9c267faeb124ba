#include "coopjam/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <thread>
#include <vector>

#include "coopjam/error.hpp"

namespace coopjam::sop {

bool outage_single_event(double gamma_d, double gamma_emax, double rate) {
  const double mu = std::exp2(rate);
  const double nu = std::exp2(-rate) - 1.0;
  return !(gamma_emax < gamma_d / mu + nu);
}

bool outage_conditional(double gamma_d, double gamma_emax, double rate) {
  if (gamma_d <= gamma_emax) return true;
  return std::log2((1.0 + gamma_d) / (1.0 + gamma_emax)) < rate;
}

OutageEstimate estimate_sop(const SopScenario& sc, std::int64_t n_samples, std::uint64_t seed, unsigned threads) {
  const Scenario& s = sc.scenario;
  s.validate();
  if (!(sc.rate > 0.0) || !std::isfinite(sc.rate)) throw InvalidInput("estimate_sop: rate must be finite and > 0");
  if (n_samples < 1000) throw InvalidInput("estimate_sop: need at least 1000 samples");

  const double mu = std::exp2(sc.rate);
  const double nu = std::exp2(-sc.rate) - 1.0;
  const PowerAllocation p{s.p_max};

  auto count_range = [&](std::int64_t begin, std::int64_t end) {
    std::int64_t hits = 0;
    ChannelGains c;
    for (std::int64_t i = begin; i < end; ++i) {
      Rng rng(Rng::substream(seed, static_cast<std::uint64_t>(i)));
      sample_channels_into(s, rng, c);
      double jam_d = s.sigma2_dest;
      for (std::size_t n = 0; n < s.n_jammers; ++n) jam_d += p.p[n] * c.g_d[n];
      const double gd = s.p_source * c.h_d / jam_d;
      double ge = 0.0;
      for (std::size_t m = 0; m < s.n_eavesdroppers; ++m) {
        double jam = s.sigma2_eaves[m];
        for (std::size_t n = 0; n < s.n_jammers; ++n) jam += p.p[n] * c.ge(m, n);
        ge = std::max(ge, s.p_source * c.h_e[m] / jam);
      }
      if (!(ge < gd / mu + nu)) ++hits;
    }
    return hits;
  };

  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  const auto chunks = static_cast<std::int64_t>(std::min<std::int64_t>(threads, n_samples));
  std::vector<std::int64_t> hits(static_cast<std::size_t>(chunks), 0);
  if (chunks == 1) {
    hits[0] = count_range(0, n_samples);
  } else {
    std::vector<std::thread> pool;
    for (std::int64_t t = 0; t < chunks; ++t) {
      const std::int64_t b = n_samples * t / chunks, e = n_samples * (t + 1) / chunks;
      pool.emplace_back([&, t, b, e] { hits[static_cast<std::size_t>(t)] = count_range(b, e); });
    }
    for (auto& th : pool) th.join();
  }
  std::int64_t total = 0;
  for (auto h : hits) total += h;

  OutageEstimate out;
  out.n_samples = n_samples;
  out.seed = seed;
  out.p_out = static_cast<double>(total) / static_cast<double>(n_samples);
  out.std_error = std::sqrt(out.p_out * (1.0 - out.p_out) / static_cast<double>(n_samples));
  return out;
}

}  // namespace coopjam::sop
