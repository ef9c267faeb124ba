#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "coopjam/power_opt.hpp"
#include "test_support.hpp"

using namespace coopjam;

namespace {

double ratio_m(const Scenario& s, const ChannelGains& c, const PowerAllocation& p, std::size_t m) {
  return (1 + sinr_destination(s, c, p)) / (1 + sinr_eavesdropper(s, c, p, m));
}

}  // namespace

TEST_CASE("default start is half the budget") {
  const auto s = testing::default_scenario();
  CHECK(default_initial_allocation(s).p == std::vector<double>{0.5, 0.5, 1.5});
}

TEST_CASE("algorithm A traces are nondecreasing") {
  const auto s = testing::default_scenario();
  const auto draws = testing::feasible_draws(s, 15, 11);
  for (const auto& c : draws) {
    const auto p0 = default_initial_allocation(s);
    const auto res = algorithm_a(s, c, p0);
    const auto& it = res.trace.iterations;
    REQUIRE(!it.empty());
    CHECK(it.front().p.p == p0.p);
    for (std::size_t k = 0; k < it.size(); ++k) {
      CHECK(it[k].secrecy_rate == doctest::Approx(secrecy_rate(s, c, it[k].p)).epsilon(1e-12));
      if (k > 0) CHECK(it[k].secrecy_rate >= it[k - 1].secrecy_rate - 1e-12);
    }
    CHECK(res.rate == doctest::Approx(secrecy_rate(s, c, res.p)).epsilon(1e-12));
    CHECK(res.rate >= it.front().secrecy_rate - 1e-12);
    res.p.validate(s, 1e-9);
    if (res.trace.converged) CHECK(res.trace.stop_reason == StopReason::kTolerance);
  }
}

TEST_CASE("single jammer matches a fine grid") {
  Rng r(12);
  int checked = 0;
  for (int t = 0; t < 40 && checked < 15; ++t) {
    const auto s = testing::random_scenario(r, 1, 1 + t % 3);
    const auto c = sample_channels(s, r);
    if (!check_positive_secrecy(s, c).feasible) continue;
    ++checked;
    const double grid = testing::grid_max_rate(s, c, 20000);
    const auto b = algorithm_b(s, c);
    CHECK(b.rate >= grid - 1e-6);
    CHECK(b.rate <= grid + 1e-4);
    const auto one = best_jammer_selection(s, c);
    CHECK(one.rate >= grid - 1e-6);
    const auto a = algorithm_a(s, c);
    CHECK(a.rate <= grid + 1e-4);
  }
  CHECK(checked >= 10);
}

TEST_CASE("jamming is useless when eavesdroppers cannot hear the jammers") {
  Rng r(13);
  for (int t = 0; t < 10; ++t) {
    const auto s = testing::random_scenario(r, 1 + t % 3, 1);
    auto c = sample_channels(s, r);
    std::fill(c.g_e.begin(), c.g_e.end(), 0.0);
    c.h_d = std::max(c.h_d, 2.0 * c.h_e[0] * s.sigma2_dest / s.sigma2_eaves[0]);
    const double r0 = secrecy_rate(s, c, zero_allocation(s));
    const auto a = algorithm_a(s, c);
    const auto b = algorithm_b(s, c);
    // A stops on its rate tolerance while the powers are still decaying
    for (std::size_t i = 0; i < s.n_jammers; ++i) CHECK(a.p.p[i] <= 1e-5 * s.p_max[i]);
    for (double v : b.p.p) CHECK(v <= 1e-6);
    CHECK(a.rate >= r0 - 1e-5);
    CHECK(b.rate == doctest::Approx(r0).epsilon(1e-6));
  }
}

TEST_CASE("cooperative jamming dominates a single jammer") {
  const auto s = testing::default_scenario();
  for (const auto& c : testing::feasible_draws(s, 20, 14)) {
    const auto one = best_jammer_selection(s, c);
    const auto b = algorithm_b(s, c);
    CHECK(one.rate >= secrecy_rate(s, c, zero_allocation(s)) - 1e-12);
    CHECK(one.jammer < s.n_jammers);
    for (std::size_t i = 0; i < s.n_jammers; ++i)
      if (i != one.jammer) CHECK(one.p.p[i] == 0.0);
    CHECK(b.rate >= one.rate - 1e-5);
  }
}

TEST_CASE("condensed bound is tight at arbitrary points") {
  Rng r(15);
  for (int t = 0; t < 30; ++t) {
    const auto s = testing::random_scenario(r, 1 + t % 4, 1 + t % 3);
    const auto c = sample_channels(s, r);
    PowerAllocation p;
    for (double pm : s.p_max) p.p.push_back(pm * testing::uniform(r, 0.05, 0.95));
    const auto k = kkt_check(s, c, p, 200, t);
    CHECK(k.equality_residual < 1e-8);
    CHECK(k.gradient_residual < 1e-5);
    CHECK(k.min_bound_gap >= -1e-10);
    CHECK(k.interior_coordinates == s.n_jammers);
  }
}

TEST_CASE("P5 witnesses satisfy their constraints") {
  const auto s = testing::default_scenario();
  for (const auto& c : testing::feasible_draws(s, 10, 16)) {
    double tmax = 0.0;
    for (std::size_t i = 0; i < s.n_jammers; ++i) tmax += s.p_max[i] * c.g_d[i];
    for (double frac : {0.0, 0.3, 0.7, 1.0}) {
      const auto res = solve_p5(s, c, frac * tmax);
      REQUIRE(res.has_value());
      double interference = 0.0;
      for (std::size_t i = 0; i < s.n_jammers; ++i) interference += res->p.p[i] * c.g_d[i];
      CHECK(std::abs(interference - frac * tmax) <= 1e-7 * tmax);
      for (std::size_t m = 0; m < s.n_eavesdroppers; ++m) CHECK(ratio_m(s, c, res->p, m) >= res->t * (1 - 1e-7));
    }
    CHECK(!solve_p5(s, c, 1.01 * tmax).has_value());
  }
}

TEST_CASE("algorithm B is at least as good as any scanned allocation") {
  const auto s = testing::default_scenario();
  for (const auto& c : testing::feasible_draws(s, 10, 17)) {
    const auto b = algorithm_b(s, c);
    b.p.validate(s, 1e-9);
    CHECK(b.rate == doctest::Approx(secrecy_rate(s, c, b.p)).epsilon(1e-12));
    CHECK(b.p5_solves > 0);
    const double grid = testing::grid_max_rate(s, c, 20);
    CHECK(b.rate >= grid - 1e-6);
  }
}
