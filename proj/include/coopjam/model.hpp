#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "coopjam/error.hpp"

namespace coopjam {

/// Static problem instance: one source, N jammers, M eavesdroppers.
/// Powers and noise variances are linear watts.
struct Scenario {
  std::size_t n_jammers = 0;
  std::size_t n_eavesdroppers = 0;
  double p_source = 0.0;
  std::vector<double> p_max;         // per-jammer power budget, size N
  double sigma2_dest = 0.0;
  std::vector<double> sigma2_eaves;  // size M

  /// Throws InvalidInput unless all powers/variances are finite and
  /// strictly positive and the vector lengths match N and M.
  void validate() const;
};

/// Power gains |h|^2 for one channel realization. `g_e` is row-major M x N.
struct ChannelGains {
  double h_d = 0.0;
  std::vector<double> h_e;
  std::vector<double> g_d;
  std::vector<double> g_e;

  double ge(std::size_t m, std::size_t i) const { return g_e[m * g_d.size() + i]; }

  /// Throws InvalidInput on negative/non-finite entries or dimensions that
  /// do not match `s`.
  void validate(const Scenario& s) const;
};

struct PowerAllocation {
  std::vector<double> p;

  /// Throws InvalidInput unless 0 <= p_i <= p_max_i (with a relative slack
  /// of `rel_slack` on the upper bound).
  void validate(const Scenario& s, double rel_slack = 1e-12) const;
};

PowerAllocation zero_allocation(const Scenario& s);

double sinr_destination(const Scenario& s, const ChannelGains& c, const PowerAllocation& p);
double sinr_eavesdropper(const Scenario& s, const ChannelGains& c, const PowerAllocation& p,
                         std::size_t m);
/// max over eavesdroppers of the SINR.
double sinr_eavesdropper_max(const Scenario& s, const ChannelGains& c, const PowerAllocation& p);

/// [log2(1 + sinr_D) - log2(1 + max_m sinr_Em)]^+ in bits/s/Hz.
double secrecy_rate(const Scenario& s, const ChannelGains& c, const PowerAllocation& p);

/// Counter-based SplitMix64 stream. Cheap to construct, so a fresh stream
/// can be derived per Monte Carlo sample.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64();
  /// Uniform on (0, 1].
  double uniform_open0();
  /// Unit-mean exponential, i.e. |z|^2 for z ~ CN(0, 1).
  double unit_exponential();

  /// Key for substream `index` of `seed`; independent of evaluation order.
  static std::uint64_t substream(std::uint64_t seed, std::uint64_t index);

 private:
  std::uint64_t state_;
};

/// Draws every gain as |z|^2 with z ~ CN(0,1) (unit-mean Rayleigh fading).
ChannelGains sample_channels(const Scenario& s, std::uint64_t seed);
ChannelGains sample_channels(const Scenario& s, Rng& rng);
/// Same draws as sample_channels, written into `out` without reallocating.
void sample_channels_into(const Scenario& s, Rng& rng, ChannelGains& out);

}  // namespace coopjam
