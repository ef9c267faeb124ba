#include "coopjam/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <ostream>
#include <thread>

#include "coopjam/error.hpp"
#include "coopjam/feasibility.hpp"
#include "coopjam/montecarlo.hpp"
#include "coopjam/power_opt.hpp"
#include "coopjam/sop.hpp"

namespace coopjam::experiments {

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
double linear_to_db(double linear) {
  if (!(linear > 0.0)) throw DomainError("linear_to_db: value must be positive");
  return 10.0 * std::log10(linear);
}

namespace {

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

// Runs fn(i) for i in [0, n) on a few threads; results go to caller-owned slots.
void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& fn) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, n));
  if (threads <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(threads);
  for (unsigned t = 0; t < threads; ++t)
    pool.emplace_back([&, t] {
      try {
        for (std::size_t i = t; i < n; i += threads) fn(i);
      } catch (...) {
        errors[t] = std::current_exception();
      }
    });
  for (auto& th : pool) th.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

Scenario with_uniform_budget(Scenario s, double budget) {
  s.p_source = budget;
  std::fill(s.p_max.begin(), s.p_max.end(), budget);
  return s;
}

}  // namespace

void write_csv(const Table& t, std::ostream& os) {
  for (std::size_t i = 0; i < t.header.size(); ++i) os << (i ? "," : "") << csv_escape(t.header[i]);
  os << '\n';
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) os << ',';
      std::visit(
          [&](const auto& v) {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, double>)
              os << format_double(v);
            else if constexpr (std::is_same_v<T, std::string>)
              os << csv_escape(v);
            else
              os << v;
          },
          row[i]);
    }
    os << '\n';
  }
}

nlohmann::json to_json(const Table& t) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& row : t.rows) {
    nlohmann::json obj = nlohmann::json::object();
    for (std::size_t i = 0; i < row.size() && i < t.header.size(); ++i)
      std::visit([&](const auto& v) { obj[t.header[i]] = v; }, row[i]);
    rows.push_back(std::move(obj));
  }
  return {{"columns", t.header}, {"rows", rows}, {"notes", t.notes}};
}

Kind kind_from_string(const std::string& name) {
  if (name == "convergence") return Kind::kConvergence;
  if (name == "comparison") return Kind::kComparison;
  if (name == "sop_vs_rate") return Kind::kSopVsRate;
  if (name == "sop_vs_ps") return Kind::kSopVsPs;
  if (name == "table_ab") return Kind::kTableAb;
  throw InvalidInput("unknown experiment '" + name + "'");
}

const char* kind_name(Kind k) {
  switch (k) {
    case Kind::kConvergence: return "convergence";
    case Kind::kComparison: return "comparison";
    case Kind::kSopVsRate: return "sop_vs_rate";
    case Kind::kSopVsPs: return "sop_vs_ps";
    case Kind::kTableAb: return "table_ab";
  }
  return "?";
}

void ExperimentConfig::validate() const {
  scenario.validate();
  if (n_sets < 1) throw InvalidInput("experiment: n_sets must be >= 1");
  const bool needs_sweep = kind == Kind::kComparison || kind == Kind::kSopVsRate || kind == Kind::kSopVsPs;
  if (needs_sweep && sweep.empty()) throw InvalidInput("experiment: sweep must be nonempty");
  if (mc_samples < 1000) throw InvalidInput("experiment: mc_samples must be >= 1000");
  if (!(tol > 0.0)) throw InvalidInput("experiment: tol must be positive");
}

Scenario default_scenario() {
  Scenario s;
  s.n_jammers = 3;
  s.n_eavesdroppers = 2;
  s.p_source = 2.0;
  s.p_max = {1.0, 1.0, 3.0};
  s.sigma2_dest = 0.1;
  s.sigma2_eaves = {0.1, 0.1};
  return s;
}

ExperimentConfig default_config(Kind k) {
  ExperimentConfig cfg;
  cfg.kind = k;
  cfg.scenario = default_scenario();
  switch (k) {
    case Kind::kConvergence: cfg.n_sets = 4; break;
    case Kind::kTableAb: cfg.n_sets = 5; break;
    case Kind::kComparison:
      cfg.n_sets = 20;
      cfg.scenario.n_eavesdroppers = 1;
      cfg.scenario.sigma2_eaves = {0.1};
      cfg.sweep = {0.5, 1.0, 2.0, 4.0, 8.0};
      break;
    case Kind::kSopVsRate:
      cfg.scenario.n_jammers = 2;
      cfg.scenario.n_eavesdroppers = 1;
      cfg.scenario.p_source = db_to_linear(15.0);
      cfg.scenario.p_max = {db_to_linear(0.0), db_to_linear(2.0)};
      cfg.scenario.sigma2_eaves = {0.1};
      cfg.sweep = {0.01, 0.25, 0.5, 1.0, 1.5, 2.0, 3.0, 4.0};
      break;
    case Kind::kSopVsPs:
      cfg.scenario.n_jammers = 2;
      cfg.scenario.n_eavesdroppers = 1;
      cfg.scenario.p_max = {db_to_linear(-4.0), db_to_linear(-3.0)};
      cfg.scenario.sigma2_eaves = {0.1};
      cfg.rate = 1.0;
      cfg.sweep = {0.0, 5.0, 10.0, 15.0, 20.0, 25.0, 30.0};
      break;
  }
  return cfg;
}

std::vector<ChannelGains> feasible_channel_sets(const Scenario& s, int count, std::uint64_t seed,
                                                std::vector<std::string>* notes) {
  std::vector<ChannelGains> out;
  const std::uint64_t max_draws = 1000ULL * static_cast<std::uint64_t>(std::max(count, 1));
  for (std::uint64_t k = 0; static_cast<int>(out.size()) < count; ++k) {
    if (k >= max_draws) throw NumericalError("could not find enough channel sets with positive secrecy");
    auto c = sample_channels(s, Rng::substream(seed, k));
    if (!check_positive_secrecy(s, c).feasible) {
      if (notes) notes->push_back("draw " + std::to_string(k) + " skipped: no allocation gives positive secrecy");
      continue;
    }
    out.push_back(std::move(c));
  }
  return out;
}

Table run_convergence(const ExperimentConfig& cfg) {
  cfg.validate();
  Table t;
  t.header = {"channel_set", "iteration", "secrecy_rate"};
  const auto sets = feasible_channel_sets(cfg.scenario, cfg.n_sets, cfg.seed, &t.notes);
  std::vector<IterationTrace> traces(sets.size());
  AlgorithmAOptions opts;
  opts.tol = cfg.tol;
  parallel_for(sets.size(), cfg.threads, [&](std::size_t i) {
    traces[i] = algorithm_a(cfg.scenario, sets[i], default_initial_allocation(cfg.scenario), opts).trace;
  });
  for (std::size_t i = 0; i < sets.size(); ++i)
    for (std::size_t k = 0; k < traces[i].iterations.size(); ++k)
      t.rows.push_back({static_cast<std::int64_t>(i), static_cast<std::int64_t>(k),
                        traces[i].iterations[k].secrecy_rate});
  return t;
}

Table run_table_ab(const ExperimentConfig& cfg) {
  cfg.validate();
  const std::size_t n = cfg.scenario.n_jammers;
  Table t;
  t.header = {"channel_set", "method"};
  for (std::size_t i = 0; i < n; ++i) t.header.push_back("p" + std::to_string(i + 1));
  t.header.push_back("rate");
  const auto sets = feasible_channel_sets(cfg.scenario, cfg.n_sets, cfg.seed, &t.notes);
  std::vector<OptimizationResult> ra(sets.size());
  std::vector<AlgorithmBResult> rb(sets.size());
  AlgorithmAOptions opts;
  opts.tol = cfg.tol;
  parallel_for(sets.size(), cfg.threads, [&](std::size_t i) {
    ra[i] = algorithm_a(cfg.scenario, sets[i], default_initial_allocation(cfg.scenario), opts);
    rb[i] = algorithm_b(cfg.scenario, sets[i]);
  });
  for (std::size_t i = 0; i < sets.size(); ++i) {
    auto row = [&](const char* method, const PowerAllocation& p, double rate) {
      std::vector<Cell> r{static_cast<std::int64_t>(i), std::string(method)};
      for (double v : p.p) r.emplace_back(v);
      r.emplace_back(rate);
      t.rows.push_back(std::move(r));
    };
    row("A", ra[i].p, ra[i].rate);
    row("B", rb[i].p, rb[i].rate);
  }
  return t;
}

Table run_comparison(const ExperimentConfig& cfg) {
  cfg.validate();
  Table t;
  t.header = {"channel_set", "power_budget", "method", "rate"};
  std::vector<ChannelGains> sets;
  for (int k = 0; k < cfg.n_sets; ++k)
    sets.push_back(sample_channels(cfg.scenario, Rng::substream(cfg.seed, static_cast<std::uint64_t>(k))));
  const std::size_t points = sets.size() * cfg.sweep.size();
  std::vector<double> rate_a(points), rate_j(points);
  AlgorithmAOptions opts;
  opts.tol = cfg.tol;
  parallel_for(points, cfg.threads, [&](std::size_t idx) {
    const std::size_t i = idx / cfg.sweep.size(), b = idx % cfg.sweep.size();
    const Scenario s = with_uniform_budget(cfg.scenario, cfg.sweep[b]);
    rate_a[idx] = algorithm_a(s, sets[i], default_initial_allocation(s), opts).rate;
    rate_j[idx] = best_jammer_selection(s, sets[i]).rate;
  });
  for (std::size_t idx = 0; idx < points; ++idx) {
    const auto i = static_cast<std::int64_t>(idx / cfg.sweep.size());
    const double budget = cfg.sweep[idx % cfg.sweep.size()];
    t.rows.push_back({i, budget, std::string("A"), rate_a[idx]});
    t.rows.push_back({i, budget, std::string("best_jammer"), rate_j[idx]});
  }
  return t;
}

Table run_sop_sweeps(const ExperimentConfig& cfg) {
  cfg.validate();
  if (cfg.kind != Kind::kSopVsRate && cfg.kind != Kind::kSopVsPs)
    throw InvalidInput("run_sop_sweeps: experiment must be sop_vs_rate or sop_vs_ps");
  Table t;
  t.header = {"sweep_value", "method", "p_out", "err", "flag"};
  const std::size_t n = cfg.sweep.size();
  std::vector<std::vector<std::vector<Cell>>> per_point(n);
  parallel_for(n, cfg.threads, [&](std::size_t i) {
    sop::SopScenario sc{cfg.scenario, cfg.rate};
    if (cfg.kind == Kind::kSopVsRate)
      sc.rate = cfg.sweep[i];
    else
      sc.scenario.p_source = db_to_linear(cfg.sweep[i]);
    auto& rows = per_point[i];
    const double x = cfg.sweep[i];

    std::string flag;
    sop::SopScenario analytic = sc;
    try {
      analytic.validate();
    } catch (const DegenerateError&) {
      analytic = sop::perturb_equal_powers(sc, &flag);
    }
    try {
      const auto r = sop::sop_closed_form(analytic);
      rows.push_back({x, std::string("closed"), r.p_out, r.error_estimate, flag});
    } catch (const Error& e) {
      rows.push_back({x, std::string("closed"), std::nan(""), std::nan(""),
                      std::string("unavailable: ") + e.what()});
    }
    try {
      const auto r = sop::sop_integral(analytic);
      rows.push_back({x, std::string("integral"), r.p_out, r.error_estimate, flag});
    } catch (const Error& e) {
      rows.push_back({x, std::string("integral"), std::nan(""), std::nan(""),
                      std::string("unavailable: ") + e.what()});
    }
    const auto mc = sop::estimate_sop(sc, cfg.mc_samples, Rng::substream(cfg.seed, i), 1);
    rows.push_back({x, std::string("mc"), mc.p_out, mc.std_error, std::string()});
  });
  for (auto& rows : per_point)
    for (auto& r : rows) t.rows.push_back(std::move(r));
  return t;
}

Table run(const ExperimentConfig& cfg) {
  switch (cfg.kind) {
    case Kind::kConvergence: return run_convergence(cfg);
    case Kind::kComparison: return run_comparison(cfg);
    case Kind::kSopVsRate:
    case Kind::kSopVsPs: return run_sop_sweeps(cfg);
    case Kind::kTableAb: return run_table_ab(cfg);
  }
  throw InvalidInput("unknown experiment");
}

}  // namespace coopjam::experiments
