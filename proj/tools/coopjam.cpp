// coopjam command-line front end.
#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "coopjam/error.hpp"
#include "coopjam/experiments.hpp"
#include "coopjam/feasibility.hpp"
#include "coopjam/json_io.hpp"
#include "coopjam/montecarlo.hpp"
#include "coopjam/power_opt.hpp"
#include "coopjam/sop.hpp"

namespace {

using namespace coopjam;
using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitInfeasible = 2;
constexpr int kExitNumerical = 3;

struct Common {
  std::string scenario_file;
  std::uint64_t seed = 1;
  std::string out_file;
  std::string method;
  double tol = 1e-6;
  std::int64_t samples = 1'000'000;
  bool as_json = false;
};

void emit(const Common& c, const std::string& text) {
  if (c.out_file.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(c.out_file);
  if (!f) throw InvalidInput("cannot write " + c.out_file);
  f << text;
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(12);
  os << v;
  return os.str();
}

std::string join(const std::vector<double>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? " " : "") + fmt(v[i]);
  return s;
}

// Scenario plus channels; missing channels are drawn from the seed.
std::pair<Scenario, ChannelGains> load_instance(const Common& c) {
  if (c.scenario_file.empty()) throw InvalidInput("--scenario is required");
  const json doc = read_json_file(c.scenario_file);
  Scenario s = scenario_from_json(doc);
  auto ch = channels_from_json(doc, s);
  return {s, ch ? *ch : sample_channels(s, c.seed)};
}

int cmd_feasibility(const Common& c) {
  auto [s, ch] = load_instance(c);
  const auto v = check_positive_secrecy(s, ch);
  if (c.as_json) {
    json j{{"feasible", v.feasible}, {"strict_margin", v.strict_margin}};
    j["margin"] = v.feasible ? json(v.margin) : json(nullptr);
    j["witness"] = v.witness ? json(v.witness->p) : json(nullptr);
    emit(c, j.dump(2) + "\n");
  } else {
    std::string text = std::string("feasible: ") + (v.feasible ? "yes" : "no") + "\n";
    if (v.witness) text += "witness: " + join(v.witness->p) + "\nmargin: " + fmt(v.margin) + "\n";
    emit(c, text);
  }
  return v.feasible ? kExitOk : kExitInfeasible;
}

int cmd_optimize(const Common& c) {
  auto [s, ch] = load_instance(c);
  const std::string method = c.method.empty() ? "a" : c.method;
  const bool feasible = check_positive_secrecy(s, ch).feasible;
  PowerAllocation p;
  double rate = 0.0;
  json extra = json::object();
  if (method == "a") {
    AlgorithmAOptions opts;
    opts.tol = c.tol;
    const auto r = algorithm_a(s, ch, default_initial_allocation(s), opts);
    p = r.p;
    rate = r.rate;
    extra["iterations"] = r.trace.iterations.size() - 1;
    extra["converged"] = r.trace.converged;
  } else if (method == "b") {
    const auto r = algorithm_b(s, ch);
    p = r.p;
    rate = r.rate;
    extra["t0"] = r.t0;
    extra["subproblem_solves"] = r.p5_solves;
  } else if (method == "best-jammer") {
    const auto r = best_jammer_selection(s, ch);
    p = r.p;
    rate = r.rate;
    extra["jammer"] = r.jammer;
  } else {
    throw InvalidInput("--method must be a, b or best-jammer");
  }
  if (c.as_json) {
    json j{{"method", method}, {"feasible", feasible}, {"p", p.p}, {"rate", rate}};
    j.update(extra);
    emit(c, j.dump(2) + "\n");
  } else {
    emit(c, "method: " + method + "\np: " + join(p.p) + "\nrate: " + fmt(rate) + "\n");
  }
  return feasible ? kExitOk : kExitInfeasible;
}

int cmd_sop(const Common& c, double rate) {
  if (c.scenario_file.empty()) throw InvalidInput("--scenario is required");
  sop::SopScenario sc{scenario_from_json(read_json_file(c.scenario_file)), rate};
  const std::string method = c.method.empty() ? "closed" : c.method;
  json j{{"method", method}, {"rate", rate}};
  if (method == "mc") {
    const auto r = sop::estimate_sop(sc, c.samples, c.seed);
    j["p_out"] = r.p_out;
    j["std_error"] = r.std_error;
    j["samples"] = r.n_samples;
    j["seed"] = r.seed;
  } else {
    sop::SopResult r;
    if (method == "closed")
      r = sop::sop_closed_form(sc);
    else if (method == "integral")
      r = sop::sop_integral(sc);
    else
      throw InvalidInput("--method must be closed, integral or mc");
    j["p_out"] = r.p_out;
    j["error_estimate"] = r.error_estimate;
  }
  if (c.as_json)
    emit(c, j.dump(2) + "\n");
  else
    emit(c, "p_out: " + fmt(j["p_out"].get<double>()) + "\n");
  return kExitOk;
}

int cmd_experiment(const Common& c, const std::string& name, int sets) {
  auto cfg = experiments::default_config(experiments::kind_from_string(name));
  if (!c.scenario_file.empty()) cfg.scenario = scenario_from_json(read_json_file(c.scenario_file));
  cfg.seed = c.seed;
  cfg.tol = c.tol;
  cfg.mc_samples = c.samples;
  if (sets > 0) cfg.n_sets = sets;
  const auto table = experiments::run(cfg);
  for (const auto& note : table.notes) std::cerr << "note: " << note << '\n';
  std::ostringstream os;
  if (c.as_json)
    os << experiments::to_json(table).dump(2) << '\n';
  else
    experiments::write_csv(table, os);
  emit(c, os.str());
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cooperative jamming power allocation and secrecy outage analysis"};
  app.require_subcommand(1);
  Common common;
  double rate = 1.0;
  std::string experiment_name;
  int sets = 0;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--scenario", common.scenario_file, "Scenario JSON file");
    sub->add_option("--seed", common.seed, "Random seed");
    sub->add_option("--out", common.out_file, "Write output to this file");
    sub->add_option("--method", common.method, "Method");
    sub->add_option("--tol", common.tol, "Convergence tolerance");
    sub->add_option("--samples", common.samples, "Monte Carlo samples");
    sub->add_flag("--json", common.as_json, "JSON output");
  };
  auto* feas = app.add_subcommand("feasibility", "Check whether positive secrecy is achievable");
  auto* opt = app.add_subcommand("optimize", "Optimize jammer powers (method a, b, best-jammer)");
  auto* sop_cmd = app.add_subcommand("sop", "Secrecy outage probability (method closed, integral, mc)");
  auto* exp = app.add_subcommand("experiment", "Run a reproduction experiment");
  for (auto* sub : {feas, opt, sop_cmd, exp}) add_common(sub);
  sop_cmd->add_option("--rate", rate, "Target secrecy rate (bits/s/Hz)");
  exp->add_option("--experiment", experiment_name,
                  "convergence, comparison, sop_vs_rate, sop_vs_ps or table_ab")
      ->required();
  exp->add_option("--sets", sets, "Number of channel sets");

  CLI11_PARSE(app, argc, argv);

  try {
    if (feas->parsed()) return cmd_feasibility(common);
    if (opt->parsed()) return cmd_optimize(common);
    if (sop_cmd->parsed()) return cmd_sop(common, rate);
    if (exp->parsed()) return cmd_experiment(common, experiment_name, sets);
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const AccuracyNotReached& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}
