#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "coopjam/model.hpp"

namespace coopjam::experiments {

double db_to_linear(double db);
double linear_to_db(double linear);

using Cell = std::variant<std::int64_t, double, std::string>;

/// Result table. `notes` collects skipped channel sets and fallbacks.
struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<Cell>> rows;
  std::vector<std::string> notes;
};

/// Header line then one line per row; doubles with 12 significant digits.
void write_csv(const Table& t, std::ostream& os);
nlohmann::json to_json(const Table& t);

enum class Kind { kConvergence, kComparison, kSopVsRate, kSopVsPs, kTableAb };
Kind kind_from_string(const std::string& name);
const char* kind_name(Kind k);

struct ExperimentConfig {
  Kind kind = Kind::kConvergence;
  Scenario scenario;
  /// Channel sets for convergence / table_ab / comparison.
  int n_sets = 4;
  /// comparison: power budgets (W). sop_vs_rate: rates. sop_vs_ps: P_s in dB.
  std::vector<double> sweep;
  /// Target rate for sop_vs_ps.
  double rate = 1.0;
  std::int64_t mc_samples = 1'000'000;
  std::uint64_t seed = 1;
  double tol = 1e-6;
  unsigned threads = 0;

  void validate() const;
};

/// Three jammers, two eavesdroppers, all noise 0.1, P_s = 2, budgets (1, 1, 3).
Scenario default_scenario();
/// Defaults per experiment; the comparison uses one eavesdropper and budgets
/// {0.5, 1, 2, 4, 8} W, sop_vs_rate uses P_s = 15 dB and jammers at 0 and 2 dB,
/// sop_vs_ps uses R = 1 and jammers at -4, -3 dB.
ExperimentConfig default_config(Kind k);

/// Channel set k is drawn from Rng::substream(seed, k); infeasible sets are
/// skipped and recorded in notes until `count` feasible ones are found.
std::vector<ChannelGains> feasible_channel_sets(const Scenario& s, int count, std::uint64_t seed,
                                                std::vector<std::string>* notes = nullptr);

/// (channel_set, iteration, secrecy_rate)
Table run_convergence(const ExperimentConfig& cfg);
/// (channel_set, method, p_1..p_N, rate) with method A or B.
Table run_table_ab(const ExperimentConfig& cfg);
/// (channel_set, power_budget, method, rate); source and every jammer get
/// the same budget.
Table run_comparison(const ExperimentConfig& cfg);
/// (sweep_value, method, p_out, err, flag) with methods closed, integral, mc.
Table run_sop_sweeps(const ExperimentConfig& cfg);

Table run(const ExperimentConfig& cfg);

}  // namespace coopjam::experiments
