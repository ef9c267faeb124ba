#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "coopjam/gp.hpp"
#include "test_support.hpp"

using namespace coopjam;
using namespace coopjam::gp;

namespace {

Posynomial random_posynomial(Rng& r, std::size_t vars, std::size_t terms) {
  Posynomial p;
  for (std::size_t k = 0; k < terms; ++k) {
    Monomial m;
    m.coeff = std::exp(testing::uniform(r, -2.0, 2.0));
    for (std::size_t j = 0; j < vars; ++j) m.exponents.push_back(std::round(testing::uniform(r, -3.0, 3.0) * 2) / 2);
    p.terms.push_back(m);
  }
  return p;
}

std::vector<double> random_point(Rng& r, std::size_t vars) {
  std::vector<double> x;
  for (std::size_t j = 0; j < vars; ++j) x.push_back(std::exp(testing::uniform(r, -2.0, 2.0)));
  return x;
}

double naive_eval(const Posynomial& p, const std::vector<double>& x) {
  double total = 0.0;
  for (const auto& t : p.terms) {
    double v = t.coeff;
    for (std::size_t j = 0; j < x.size(); ++j) v *= std::pow(x[j], t.exponents[j]);
    total += v;
  }
  return total;
}

// (x + 1/x) as a posynomial in (x, tau), divided by tau.
GeometricProgram am_gm_program() {
  GeometricProgram gp;
  gp.objective = {1.0, {0.0, 1.0}};
  gp.constraints.push_back({{{1.0, {1.0, -1.0}}, {1.0, {-1.0, -1.0}}}});
  gp.constraints.push_back({{{0.1, {1.0, 0.0}}}});
  gp.constraints.push_back({{{0.1, {-1.0, 0.0}}}});
  return gp;
}

double max_gamma_hat(const P3Problem& prob, std::span<const double> p, std::size_t m_count) {
  double worst = 0.0;
  for (std::size_t m = 0; m < m_count; ++m) worst = std::max(worst, prob.gamma_hat(m, p));
  return worst;
}

}  // namespace

TEST_CASE("evaluation") {
  const Monomial m{3.0, {2.0, 1.0}};
  const std::vector<double> x{2.0, 5.0};
  CHECK(eval(m, x) == doctest::Approx(60.0));
  const Posynomial p{{{1.0, {1.0}}, {1.0, {-1.0}}}};
  const std::vector<double> one{1.0};
  CHECK(eval(p, one) == doctest::Approx(2.0));
  const std::vector<double> zero{0.0, 1.0};
  CHECK(eval(Monomial{2.0, {0.0, 1.0}}, zero) == doctest::Approx(2.0));
  CHECK_THROWS_AS(eval(m, zero), DomainError);

  Rng r(1);
  for (int t = 0; t < 100; ++t) {
    const auto g = random_posynomial(r, 4, 5);
    const auto x = random_point(r, 4);
    CHECK(eval(g, x) == doctest::Approx(naive_eval(g, x)).epsilon(1e-13));
  }
}

TEST_CASE("validation") {
  CHECK_THROWS_AS(Posynomial{}.validate(), InvalidInput);
  CHECK_THROWS_AS((Posynomial{{{-1.0, {1.0}}}}.validate()), InvalidInput);
  CHECK_THROWS_AS((Posynomial{{{1.0, {1.0}}, {1.0, {1.0, 2.0}}}}.validate()), InvalidInput);
}

TEST_CASE("condensation of x + 1/x") {
  const Posynomial g{{{1.0, {1.0}}, {1.0, {-1.0}}}};
  const std::vector<double> one{1.0};
  const auto c = condense(g, one);
  CHECK(c.monomial.coeff == doctest::Approx(2.0));
  CHECK(std::abs(c.monomial.exponents[0]) < 1e-14);
  const std::vector<double> two{2.0};
  CHECK(eval(c.monomial, two) == doctest::Approx(2.0));
  CHECK(eval(g, two) == doctest::Approx(2.5));
}

TEST_CASE("condensation bound, equality and weights") {
  Rng r(2);
  for (int t = 0; t < 1000; ++t) {
    const std::size_t vars = 1 + t % 5, terms = 1 + t % 6;
    const auto g = random_posynomial(r, vars, terms);
    const auto xh = random_point(r, vars);
    const auto c = condense(g, xh);
    double sum = 0.0;
    for (double a : c.weights.alpha) {
      CHECK(a > 0.0);
      sum += a;
    }
    CHECK(std::abs(sum - 1.0) < 1e-12);
    CHECK(std::abs(eval(c.monomial, xh) - eval(g, xh)) <= 1e-10 * eval(g, xh));
    for (int k = 0; k < 5; ++k) {
      const auto x = random_point(r, vars);
      CHECK(eval(c.monomial, x) <= eval(g, x) * (1.0 + 1e-10));
    }
  }
}

TEST_CASE("tiny terms get clamped weights") {
  const Posynomial g{{{1.0, {1.0}}, {1.0, {0.0}}}};
  const std::vector<double> x{1e-20};
  const auto c = condense(g, x);
  CHECK(c.weights.alpha[0] >= kMinCondensationWeight * 0.99);
  CHECK(c.weights.alpha[0] + c.weights.alpha[1] == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("Psi and Phi structure") {
  Rng r(3);
  for (std::size_t n = 1; n <= 4; ++n) {
    const auto s = testing::random_scenario(r, n, 2);
    const auto c = sample_channels(s, r);
    for (std::size_t m = 0; m < 2; ++m) {
      const auto psi = build_psi(s, c, m);
      const auto phi = build_phi(s, c, m);
      CHECK(psi.terms.size() == (n + 2) * (n + 1));
      CHECK(phi.terms.size() == (n + 2) * (n + 1));
      CHECK(std::is_sorted(psi.terms.begin(), psi.terms.end(),
                           [](const Monomial& a, const Monomial& b) { return a.exponents < b.exponents; }));
      PowerAllocation p;
      for (double pm : s.p_max) p.p.push_back(pm * r.uniform_open0());
      const double ratio = (1 + sinr_eavesdropper(s, c, p, m)) / (1 + sinr_destination(s, c, p));
      CHECK(eval(phi, p.p) / eval(psi, p.p) == doctest::Approx(ratio).epsilon(1e-12));
    }
  }
}

TEST_CASE("P3 at its expansion point") {
  Rng r(4);
  for (int t = 0; t < 50; ++t) {
    const auto s = testing::random_scenario(r, 1 + t % 4, 1 + t % 3);
    const auto c = sample_channels(s, r);
    PowerAllocation p;
    for (double pm : s.p_max) p.p.push_back(pm * testing::uniform(r, 0.01, 1.0));
    const auto prob = build_p3(s, c, p);
    for (std::size_t m = 0; m < s.n_eavesdroppers; ++m) {
      CHECK(std::abs(prob.gamma_hat(m, p.p) - prob.gamma(m, p.p)) <= 1e-10 * prob.gamma(m, p.p));
      const double direct = (1 + sinr_eavesdropper(s, c, p, m)) / (1 + sinr_destination(s, c, p));
      CHECK(prob.gamma(m, p.p) == doctest::Approx(direct).epsilon(1e-12));
    }
    // (p, tau) variables, one GP row per eavesdropper plus two per jammer
    CHECK(prob.program.n_vars() == s.n_jammers + 1);
    CHECK(prob.program.constraints.size() == s.n_eavesdroppers + 2 * s.n_jammers);
  }
  const auto s = testing::default_scenario();
  CHECK_THROWS_AS(build_p3(s, sample_channels(s, 1), {{2.0, 0.5, 0.5}}), InvalidInput);
}

TEST_CASE("AM-GM program") {
  const auto gp = am_gm_program();
  const std::vector<double> start{3.0, 10.0};
  const auto sol = gp_solve(gp, start);
  CHECK(sol.objective == doctest::Approx(2.0).epsilon(1e-8));
  CHECK(sol.x[0] == doctest::Approx(1.0).epsilon(1e-4));
  CHECK(sol.duality_gap <= 1e-9);
}

TEST_CASE("infeasible start is rejected") {
  const auto gp = am_gm_program();
  const std::vector<double> start{3.0, 1.0};
  CHECK_THROWS(gp_solve(gp, start));
}

TEST_CASE("P3 optimum matches grid search") {
  Rng r(5);
  for (int t = 0; t < 10; ++t) {
    const std::size_t n = 1 + t % 2;
    const auto s = testing::random_scenario(r, n, 1 + t % 3);
    const auto c = sample_channels(s, r);
    PowerAllocation p0;
    for (double pm : s.p_max) p0.p.push_back(pm * testing::uniform(r, 0.1, 0.9));
    const auto prob = build_p3(s, c, p0);
    const auto sol = solve_p3(prob);

    const int cells = n == 1 ? 10000 : 500;
    std::vector<double> p(n);
    double grid = INFINITY;
    std::vector<int> idx(n, 0);
    while (true) {
      for (std::size_t i = 0; i < n; ++i)
        p[i] = prob.p_floor + (s.p_max[i] - prob.p_floor) * idx[i] / cells;
      grid = std::min(grid, max_gamma_hat(prob, p, s.n_eavesdroppers));
      std::size_t i = 0;
      while (i < n && ++idx[i] > cells) idx[i++] = 0;
      if (i == n) break;
    }
    const double at_sol = max_gamma_hat(prob, sol.p, s.n_eavesdroppers);
    CHECK(sol.tau >= at_sol * (1 - 1e-7));
    CHECK(at_sol <= grid * (1 + 1e-7));
    CHECK(at_sol >= grid * (1 - 1e-3));
    // never worse than the expansion point
    CHECK(at_sol <= max_gamma_hat(prob, p0.p, s.n_eavesdroppers) * (1 + 1e-9));
  }
}

TEST_CASE("log-sum-exp constraints are midpoint convex") {
  Rng r(6);
  const auto s = testing::default_scenario();
  const auto c = sample_channels(s, 9);
  const auto prob = build_p3(s, c, {{0.3, 0.4, 1.0}});
  for (const auto& g : prob.program.constraints) {
    for (int k = 0; k < 50; ++k) {
      std::vector<double> y0, y1, ym, x0, x1, xm;
      for (std::size_t j = 0; j < prob.program.n_vars(); ++j) {
        y0.push_back(testing::uniform(r, -5.0, 2.0));
        y1.push_back(testing::uniform(r, -5.0, 2.0));
        ym.push_back(0.5 * (y0[j] + y1[j]));
      }
      for (std::size_t j = 0; j < y0.size(); ++j) {
        x0.push_back(std::exp(y0[j]));
        x1.push_back(std::exp(y1[j]));
        xm.push_back(std::exp(ym[j]));
      }
      const double f0 = std::log(eval(g, x0)), f1 = std::log(eval(g, x1)), fm = std::log(eval(g, xm));
      CHECK(fm <= 0.5 * (f0 + f1) + 1e-9);
    }
  }
}
