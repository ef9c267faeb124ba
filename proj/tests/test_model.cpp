#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "coopjam/json_io.hpp"
#include "coopjam/model.hpp"
#include "test_support.hpp"

using namespace coopjam;

namespace {

Scenario one_by_one(double p_max = 1.0) {
  Scenario s;
  s.n_jammers = 1;
  s.n_eavesdroppers = 1;
  s.p_source = 2.0;
  s.p_max = {p_max};
  s.sigma2_dest = 1.0;
  s.sigma2_eaves = {1.0};
  return s;
}

ChannelGains gains(double h_d, double h_e, double g_d, double g_e) { return {h_d, {h_e}, {g_d}, {g_e}}; }

}  // namespace

TEST_CASE("destination SINR") {
  const auto s = one_by_one();
  CHECK(sinr_destination(s, gains(1, 0, 1, 0), {{0.0}}) == doctest::Approx(2.0));
  CHECK(sinr_destination(s, gains(1, 0, 1, 0), {{1.0}}) == doctest::Approx(1.0));
}

TEST_CASE("eavesdropper SINR") {
  const auto s = one_by_one();
  CHECK(sinr_eavesdropper(s, gains(1, 0, 1, 1), {{0.5}}, 0) == 0.0);
  CHECK(sinr_eavesdropper(s, gains(1, 1, 1, 0), {{1.0}}, 0) == doctest::Approx(2.0));
  CHECK_THROWS_AS(sinr_eavesdropper(s, gains(1, 1, 1, 0), {{1.0}}, 1), InvalidInput);
}

TEST_CASE("secrecy rate examples") {
  const auto s = one_by_one();
  CHECK(secrecy_rate(s, gains(1, 0, 1, 1), {{0.0}}) == doctest::Approx(std::log2(3.0)));
  CHECK(secrecy_rate(s, gains(1, 1, 1, 0), {{1.0}}) == 0.0);
  // identical links
  CHECK(secrecy_rate(s, gains(0.7, 0.7, 0.3, 0.3), {{0.4}}) == 0.0);
}

TEST_CASE("SINRs agree with direct formulas on random instances") {
  Rng r(11);
  for (int t = 0; t < 200; ++t) {
    const auto s = testing::random_scenario(r, 1 + t % 4, 1 + t % 3);
    const auto c = sample_channels(s, r);
    PowerAllocation p;
    for (double pm : s.p_max) p.p.push_back(pm * r.uniform_open0());
    double id = s.sigma2_dest;
    for (std::size_t i = 0; i < s.n_jammers; ++i) id += p.p[i] * c.g_d[i];
    const double gd = s.p_source * c.h_d / id;
    CHECK(sinr_destination(s, c, p) == doctest::Approx(gd).epsilon(1e-14));
    double ge_max = 0.0;
    for (std::size_t m = 0; m < s.n_eavesdroppers; ++m) {
      double ie = s.sigma2_eaves[m];
      for (std::size_t i = 0; i < s.n_jammers; ++i) ie += p.p[i] * c.g_e[m * s.n_jammers + i];
      const double ge = s.p_source * c.h_e[m] / ie;
      ge_max = std::max(ge_max, ge);
      CHECK(sinr_eavesdropper(s, c, p, m) == doctest::Approx(ge).epsilon(1e-14));
    }
    const double rate = std::max(0.0, std::log2(1 + gd) - std::log2(1 + ge_max));
    CHECK(secrecy_rate(s, c, p) == doctest::Approx(rate).epsilon(1e-12));
  }
}

TEST_CASE("secrecy rate properties") {
  Rng r(12);
  for (int t = 0; t < 200; ++t) {
    auto s = testing::random_scenario(r, 2, 3);
    auto c = sample_channels(s, r);
    PowerAllocation p{{s.p_max[0] * r.uniform_open0(), s.p_max[1] * r.uniform_open0()}};
    const double rate = secrecy_rate(s, c, p);
    CHECK(rate >= 0.0);

    // permuting eavesdroppers 0 and 2
    auto s2 = s;
    auto c2 = c;
    std::swap(s2.sigma2_eaves[0], s2.sigma2_eaves[2]);
    std::swap(c2.h_e[0], c2.h_e[2]);
    for (std::size_t i = 0; i < 2; ++i) std::swap(c2.g_e[i], c2.g_e[2 * 2 + i]);
    CHECK(secrecy_rate(s2, c2, p) == doctest::Approx(rate).epsilon(1e-14));

    // dropping an eavesdropper never lowers the rate
    auto s3 = s;
    auto c3 = c;
    s3.n_eavesdroppers = 2;
    s3.sigma2_eaves.pop_back();
    c3.h_e.pop_back();
    c3.g_e.resize(4);
    CHECK(secrecy_rate(s3, c3, p) >= rate);

    // more jamming never helps D or (with g_e > 0) the eavesdropper
    auto q = p;
    q.p[0] = std::min(s.p_max[0], q.p[0] + 0.1);
    CHECK(sinr_destination(s, c, q) <= sinr_destination(s, c, p));
    for (std::size_t m = 0; m < 3; ++m) CHECK(sinr_eavesdropper(s, c, q, m) <= sinr_eavesdropper(s, c, p, m));
  }
}

TEST_CASE("validation rejects malformed inputs") {
  auto s = one_by_one();
  CHECK_NOTHROW(s.validate());
  auto bad = s;
  bad.p_max = {};
  CHECK_THROWS_AS(bad.validate(), InvalidInput);
  bad = s;
  bad.sigma2_dest = 0.0;
  CHECK_THROWS_AS(bad.validate(), InvalidInput);
  bad = s;
  bad.p_source = std::nan("");
  CHECK_THROWS_AS(bad.validate(), InvalidInput);
  CHECK_THROWS_AS(gains(-1, 0, 0, 0).validate(s), InvalidInput);
  CHECK_THROWS_AS(gains(1, INFINITY, 0, 0).validate(s), InvalidInput);
  CHECK_NOTHROW(gains(0, 0, 0, 0).validate(s));
  CHECK_THROWS_AS(PowerAllocation{{1.5}}.validate(s), InvalidInput);
  CHECK_THROWS_AS(PowerAllocation{{-0.1}}.validate(s), InvalidInput);
  CHECK_THROWS_AS(sinr_destination(s, gains(1, 1, 1, 1), {{0.1, 0.2}}), InvalidInput);
}

TEST_CASE("channel sampling") {
  const auto s = testing::default_scenario();
  const auto a = sample_channels(s, 42);
  const auto b = sample_channels(s, 42);
  CHECK(a.h_d == b.h_d);
  CHECK(a.g_e == b.g_e);
  CHECK(sample_channels(s, 43).h_d != a.h_d);

  // unit-mean exponential: mean and Kolmogorov-Smirnov distance
  constexpr int kN = 1'000'000;
  Scenario one = s;
  std::vector<double> x(kN);
  Rng r(7);
  double sum = 0.0;
  for (int i = 0; i < kN; ++i) {
    x[i] = sample_channels(one, Rng::substream(99, static_cast<std::uint64_t>(i))).h_d;
    sum += x[i];
  }
  CHECK(std::abs(sum / kN - 1.0) < 0.01);
  std::sort(x.begin(), x.end());
  double ks = 0.0;
  for (int i = 0; i < kN; ++i) {
    const double f = 1.0 - std::exp(-x[i]);
    ks = std::max({ks, std::abs(f - static_cast<double>(i) / kN), std::abs(f - static_cast<double>(i + 1) / kN)});
  }
  CHECK(ks < 0.01);
}

TEST_CASE("uniform draws stay in (0, 1]") {
  Rng r(0);
  for (int i = 0; i < 100000; ++i) {
    const double u = r.uniform_open0();
    REQUIRE(u > 0.0);
    REQUIRE(u <= 1.0);
  }
}

TEST_CASE("JSON round trip") {
  const auto s = testing::default_scenario();
  const auto c = sample_channels(s, 5);
  const auto j = to_json(s, c);
  const auto s2 = scenario_from_json(j);
  CHECK(s2.p_max == s.p_max);
  CHECK(s2.sigma2_eaves == s.sigma2_eaves);
  const auto c2 = channels_from_json(j, s2);
  REQUIRE(c2);
  CHECK(c2->g_e == c.g_e);
  CHECK(c2->h_e == c.h_e);
  CHECK_FALSE(channels_from_json(to_json(s), s));

  auto flat = j;
  flat["g_e"] = c.g_e;
  CHECK(channels_from_json(flat, s2)->g_e == c.g_e);

  auto broken = to_json(s);
  broken["p_max"] = {1.0};
  CHECK_THROWS_AS(scenario_from_json(broken), InvalidInput);
}
