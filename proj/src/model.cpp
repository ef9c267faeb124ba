#include "coopjam/model.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace coopjam {

namespace {

bool positive_finite(double x) { return std::isfinite(x) && x > 0.0; }
bool nonneg_finite(double x) { return std::isfinite(x) && x >= 0.0; }

}  // namespace

void Scenario::validate() const {
  if (n_jammers == 0) throw InvalidInput("scenario: n_jammers must be positive");
  if (n_eavesdroppers == 0) throw InvalidInput("scenario: n_eavesdroppers must be positive");
  if (p_max.size() != n_jammers)
    throw InvalidInput("scenario: p_max has " + std::to_string(p_max.size()) + " entries, expected " +
                       std::to_string(n_jammers));
  if (sigma2_eaves.size() != n_eavesdroppers)
    throw InvalidInput("scenario: sigma2_eaves has " + std::to_string(sigma2_eaves.size()) +
                       " entries, expected " + std::to_string(n_eavesdroppers));
  if (!positive_finite(p_source)) throw InvalidInput("scenario: p_source must be > 0");
  if (!positive_finite(sigma2_dest)) throw InvalidInput("scenario: sigma2_dest must be > 0");
  for (double v : p_max)
    if (!positive_finite(v)) throw InvalidInput("scenario: p_max entries must be > 0");
  for (double v : sigma2_eaves)
    if (!positive_finite(v)) throw InvalidInput("scenario: sigma2_eaves entries must be > 0");
}

void ChannelGains::validate(const Scenario& s) const {
  if (h_e.size() != s.n_eavesdroppers) throw InvalidInput("channels: h_e size does not match M");
  if (g_d.size() != s.n_jammers) throw InvalidInput("channels: g_d size does not match N");
  if (g_e.size() != s.n_eavesdroppers * s.n_jammers)
    throw InvalidInput("channels: g_e size does not match M*N");
  if (!nonneg_finite(h_d)) throw InvalidInput("channels: h_d must be finite and >= 0");
  auto ok = [](const std::vector<double>& v) { return std::all_of(v.begin(), v.end(), nonneg_finite); };
  if (!ok(h_e) || !ok(g_d) || !ok(g_e)) throw InvalidInput("channels: gains must be finite and >= 0");
}

void PowerAllocation::validate(const Scenario& s, double rel_slack) const {
  if (p.size() != s.n_jammers) throw InvalidInput("allocation: size does not match N");
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (!std::isfinite(p[i]) || p[i] < 0.0)
      throw InvalidInput("allocation: p[" + std::to_string(i) + "] must be finite and >= 0");
    if (p[i] > s.p_max[i] * (1.0 + rel_slack))
      throw InvalidInput("allocation: p[" + std::to_string(i) + "] exceeds p_max");
  }
}

PowerAllocation zero_allocation(const Scenario& s) { return {std::vector<double>(s.n_jammers, 0.0)}; }

namespace {

void check_dims(const Scenario& s, const ChannelGains& c, const PowerAllocation& p) {
  if (p.p.size() != s.n_jammers || c.g_d.size() != s.n_jammers || c.h_e.size() != s.n_eavesdroppers ||
      c.g_e.size() != s.n_jammers * s.n_eavesdroppers || s.sigma2_eaves.size() != s.n_eavesdroppers)
    throw InvalidInput("dimension mismatch between scenario, channels and allocation");
}

}  // namespace

double sinr_destination(const Scenario& s, const ChannelGains& c, const PowerAllocation& p) {
  check_dims(s, c, p);
  double interference = s.sigma2_dest;
  for (std::size_t i = 0; i < s.n_jammers; ++i) interference += p.p[i] * c.g_d[i];
  return s.p_source * c.h_d / interference;
}

double sinr_eavesdropper(const Scenario& s, const ChannelGains& c, const PowerAllocation& p,
                         std::size_t m) {
  check_dims(s, c, p);
  if (m >= s.n_eavesdroppers)
    throw InvalidInput("eavesdropper index " + std::to_string(m) + " out of range");
  double interference = s.sigma2_eaves[m];
  for (std::size_t i = 0; i < s.n_jammers; ++i) interference += p.p[i] * c.ge(m, i);
  return s.p_source * c.h_e[m] / interference;
}

double sinr_eavesdropper_max(const Scenario& s, const ChannelGains& c, const PowerAllocation& p) {
  double worst = 0.0;
  for (std::size_t m = 0; m < s.n_eavesdroppers; ++m) worst = std::max(worst, sinr_eavesdropper(s, c, p, m));
  return worst;
}

double secrecy_rate(const Scenario& s, const ChannelGains& c, const PowerAllocation& p) {
  const double gd = sinr_destination(s, c, p);
  const double ge = sinr_eavesdropper_max(s, c, p);
  // log1p keeps resolution when both SINRs are small.
  const double r = (std::log1p(gd) - std::log1p(ge)) / std::log(2.0);
  return r > 0.0 ? r : 0.0;
}

std::uint64_t Rng::next_u64() {
  std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

double Rng::uniform_open0() {
  // 53 random bits mapped onto (0, 1].
  return (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;
}

double Rng::unit_exponential() {
  // For z = x + iy with x, y ~ N(0, 1/2), Box-Muller gives |z|^2 = -ln(u1)
  // exactly; the phase draw u2 never reaches a power gain.
  return -std::log(uniform_open0());
}

std::uint64_t Rng::substream(std::uint64_t seed, std::uint64_t index) {
  Rng mix(seed ^ (index * 0xd1b54a32d192ed03ULL));
  mix.next_u64();
  return mix.next_u64() ^ index;
}

void sample_channels_into(const Scenario& s, Rng& rng, ChannelGains& c) {
  c.h_d = rng.unit_exponential();
  c.h_e.resize(s.n_eavesdroppers);
  for (auto& v : c.h_e) v = rng.unit_exponential();
  c.g_d.resize(s.n_jammers);
  for (auto& v : c.g_d) v = rng.unit_exponential();
  c.g_e.resize(s.n_eavesdroppers * s.n_jammers);
  for (auto& v : c.g_e) v = rng.unit_exponential();
}

ChannelGains sample_channels(const Scenario& s, Rng& rng) {
  ChannelGains c;
  sample_channels_into(s, rng, c);
  return c;
}

ChannelGains sample_channels(const Scenario& s, std::uint64_t seed) {
  Rng rng(seed);
  return sample_channels(s, rng);
}

}  // namespace coopjam
