#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "coopjam/experiments.hpp"
#include "coopjam/feasibility.hpp"
#include "coopjam/montecarlo.hpp"
#include "coopjam/power_opt.hpp"
#include "coopjam/sop.hpp"

namespace py = pybind11;
using namespace coopjam;

namespace {

py::dict optimization_dict(const OptimizationResult& r) {
  py::dict d;
  d["p"] = r.p.p;
  d["rate"] = r.rate;
  d["converged"] = r.trace.converged;
  std::vector<double> rates;
  for (const auto& it : r.trace.iterations) rates.push_back(it.secrecy_rate);
  d["trace"] = rates;
  return d;
}

sop::SopScenario sop_scenario(const Scenario& s, double rate) { return {s, rate}; }

}  // namespace

PYBIND11_MODULE(_coopjam, m) {
  m.doc() = "Cooperative jamming power allocation and secrecy outage analysis";

  auto base = py::register_exception<Error>(m, "CoopjamError", PyExc_RuntimeError);
  py::register_exception<InvalidInput>(m, "InvalidInput", PyExc_ValueError);
  py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<DegenerateError>(m, "DegenerateError", base.ptr());
  py::register_exception<ResourceError>(m, "ResourceError", base.ptr());
  py::register_exception<NumericalError>(m, "NumericalError", PyExc_ArithmeticError);
  py::register_exception<AccuracyNotReached>(m, "AccuracyNotReached", PyExc_ArithmeticError);

  py::class_<Scenario>(m, "Scenario")
      .def(py::init([](std::vector<double> p_max, double p_source, double sigma2_dest,
                       std::vector<double> sigma2_eaves) {
             Scenario s;
             s.n_jammers = p_max.size();
             s.n_eavesdroppers = sigma2_eaves.size();
             s.p_source = p_source;
             s.p_max = std::move(p_max);
             s.sigma2_dest = sigma2_dest;
             s.sigma2_eaves = std::move(sigma2_eaves);
             s.validate();
             return s;
           }),
           py::arg("p_max"), py::arg("p_source"), py::arg("sigma2_dest"), py::arg("sigma2_eaves"))
      .def_readonly("n_jammers", &Scenario::n_jammers)
      .def_readonly("n_eavesdroppers", &Scenario::n_eavesdroppers)
      .def_readonly("p_source", &Scenario::p_source)
      .def_readonly("p_max", &Scenario::p_max)
      .def_readonly("sigma2_dest", &Scenario::sigma2_dest)
      .def_readonly("sigma2_eaves", &Scenario::sigma2_eaves);

  py::class_<ChannelGains>(m, "ChannelGains")
      .def(py::init([](double h_d, std::vector<double> h_e, std::vector<double> g_d, std::vector<double> g_e) {
             return ChannelGains{h_d, std::move(h_e), std::move(g_d), std::move(g_e)};
           }),
           py::arg("h_d"), py::arg("h_e"), py::arg("g_d"), py::arg("g_e"),
           "g_e is flattened row-major, one row of N jammer gains per eavesdropper.")
      .def_readonly("h_d", &ChannelGains::h_d)
      .def_readonly("h_e", &ChannelGains::h_e)
      .def_readonly("g_d", &ChannelGains::g_d)
      .def_readonly("g_e", &ChannelGains::g_e);

  m.def("default_scenario", &experiments::default_scenario);
  m.def(
      "sample_channels", [](const Scenario& s, std::uint64_t seed) { return sample_channels(s, seed); },
      py::arg("scenario"), py::arg("seed"));
  m.def(
      "secrecy_rate",
      [](const Scenario& s, const ChannelGains& c, std::vector<double> p) {
        c.validate(s);
        PowerAllocation a{std::move(p)};
        a.validate(s);
        return secrecy_rate(s, c, a);
      },
      py::arg("scenario"), py::arg("channels"), py::arg("p"));

  m.def(
      "check_positive_secrecy",
      [](const Scenario& s, const ChannelGains& c) {
        const auto v = check_positive_secrecy(s, c);
        py::dict d;
        d["feasible"] = v.feasible;
        d["witness"] = v.witness ? py::cast(v.witness->p) : py::none();
        d["margin"] = v.margin;
        return d;
      },
      py::arg("scenario"), py::arg("channels"));

  m.def(
      "algorithm_a",
      [](const Scenario& s, const ChannelGains& c, std::optional<std::vector<double>> p0, double tol, int max_iter) {
        AlgorithmAOptions o;
        o.tol = tol;
        o.max_iter = max_iter;
        const PowerAllocation start = p0 ? PowerAllocation{*p0} : default_initial_allocation(s);
        py::gil_scoped_release release;
        const auto r = algorithm_a(s, c, start, o);
        py::gil_scoped_acquire acquire;
        return optimization_dict(r);
      },
      py::arg("scenario"), py::arg("channels"), py::arg("p0") = py::none(), py::arg("tol") = 1e-6,
      py::arg("max_iter") = 100);

  m.def(
      "algorithm_b",
      [](const Scenario& s, const ChannelGains& c) {
        const auto r = algorithm_b(s, c);
        py::dict d;
        d["p"] = r.p.p;
        d["rate"] = r.rate;
        d["t0"] = r.t0;
        return d;
      },
      py::arg("scenario"), py::arg("channels"));

  m.def(
      "best_jammer_selection",
      [](const Scenario& s, const ChannelGains& c) {
        const auto r = best_jammer_selection(s, c);
        py::dict d;
        d["p"] = r.p.p;
        d["rate"] = r.rate;
        d["jammer"] = r.jammer;
        return d;
      },
      py::arg("scenario"), py::arg("channels"));

  m.def(
      "sop",
      [](const Scenario& s, double rate, const std::string& method) {
        const auto sc = sop_scenario(s, rate);
        if (method == "closed") return sop::sop_closed_form(sc).p_out;
        if (method == "integral") return sop::sop_integral(sc).p_out;
        throw InvalidInput("method must be 'closed' or 'integral'");
      },
      py::arg("scenario"), py::arg("rate"), py::arg("method") = "closed",
      "Secrecy outage probability with every jammer at its full budget.");

  m.def(
      "estimate_sop",
      [](const Scenario& s, double rate, std::int64_t samples, std::uint64_t seed, unsigned threads) {
        sop::OutageEstimate e;
        {
          py::gil_scoped_release release;
          e = sop::estimate_sop(sop_scenario(s, rate), samples, seed, threads);
        }
        return py::make_tuple(e.p_out, e.std_error);
      },
      py::arg("scenario"), py::arg("rate"), py::arg("samples") = 1'000'000, py::arg("seed") = 1,
      py::arg("threads") = 0, "Monte Carlo estimate; returns (p_out, std_error).");

  m.def(
      "run_experiment",
      [](const std::string& kind, std::uint64_t seed, int n_sets, std::int64_t mc_samples) {
        auto cfg = experiments::default_config(experiments::kind_from_string(kind));
        cfg.seed = seed;
        cfg.n_sets = n_sets;
        cfg.mc_samples = mc_samples;
        std::ostringstream os;
        {
          py::gil_scoped_release release;
          experiments::write_csv(experiments::run(cfg), os);
        }
        return os.str();
      },
      py::arg("kind"), py::arg("seed") = 1, py::arg("n_sets") = 4, py::arg("mc_samples") = 1'000'000,
      "Runs one experiment with its default settings and returns CSV text.");
}
