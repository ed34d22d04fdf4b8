#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cmath>
#include <limits>
#include <optional>

#include "dsattack/economics.hpp"
#include "dsattack/errors.hpp"
#include "dsattack/montecarlo.hpp"
#include "dsattack/reporting.hpp"
#include "dsattack/special_functions.hpp"
#include "dsattack/stochastics.hpp"
#include "dsattack/timing.hpp"

namespace py = pybind11;
using namespace dsattack;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

CutTime to_cut(double seconds) {
  return std::isinf(seconds) ? CutTime::infinite() : CutTime::after(seconds);
}

double cut_seconds(const CutTime& cut) { return cut.is_infinite() ? kInf : cut.seconds(); }

double required_float(const RequiredValue& c) { return c.is_infinite() ? kInf : c.value(); }

SeriesOptions series(double tol, std::size_t max_terms) { return {tol, max_terms}; }

py::dict row_dict(const ResourceRow& r) {
  py::dict d;
  d["n_bc"] = r.n_bc;
  d["p_a"] = r.p_a;
  d["p_as"] = r.p_as;
  d["e_tas_scaled"] = r.e_tas_scaled;
  d["e_x_scaled"] = r.e_x_scaled;
  d["c_req_mu_coeff"] = r.c_req_mu_coeff;
  d["c_req_const"] = r.c_req_const;
  return d;
}

py::dict summary_dict(const SimulationSummary& s) {
  py::dict d;
  d["trials"] = s.trials;
  d["successes"] = s.successes;
  d["truncated"] = s.truncated;
  d["p_as_hat"] = s.p_as_hat;
  d["se_p_as"] = s.se_p_as;
  d["mean_tas"] = s.mean_tas;
  d["var_tas"] = s.var_tas;
  d["se_tas"] = s.se_tas;
  d["mean_profit"] = s.mean_profit;
  d["se_profit"] = s.se_profit;
  d["seed"] = s.seed;
  return d;
}

}  // namespace

PYBIND11_MODULE(dsattack, m) {
  m.doc() = "Double-spending attack probability, timing and profitability";

  auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<ConvergenceError>(m, "ConvergenceError", base.ptr());
  py::register_exception<SingularityError>(m, "SingularityError", PyExc_ValueError);
  py::register_exception<UndefinedError>(m, "UndefinedError", base.ptr());
  py::register_exception<UnsupportedAnalyticError>(m, "UnsupportedAnalyticError", base.ptr());
  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);

  py::class_<AttackSpec>(m, "AttackSpec")
      .def(py::init([](double p_a, unsigned n_bc, double cut, double lambda_h) {
             return AttackSpec(p_a, n_bc, to_cut(cut), lambda_h);
           }),
           py::arg("p_a"), py::arg("n_bc"), py::arg("cut") = kInf,
           py::arg("lambda_h") = AttackSpec::kDefaultLambdaH)
      .def_static(
          "with_multiplier",
          [](double p_a, unsigned n_bc, double c, double lambda_h) {
            return AttackSpec(p_a, n_bc, CutTime::confirmation_multiple(c, n_bc, lambda_h), lambda_h);
          },
          py::arg("p_a"), py::arg("n_bc"), py::arg("c"),
          py::arg("lambda_h") = AttackSpec::kDefaultLambdaH)
      .def_property_readonly("p_a", &AttackSpec::p_a)
      .def_property_readonly("p_h", &AttackSpec::p_h)
      .def_property_readonly("n_bc", &AttackSpec::n_bc)
      .def_property_readonly("cut", [](const AttackSpec& s) { return cut_seconds(s.cut()); })
      .def_property_readonly("lambda_h", &AttackSpec::lambda_h)
      .def_property_readonly("lambda_a", &AttackSpec::lambda_a)
      .def_property_readonly("lambda_t", &AttackSpec::lambda_t)
      .def("__repr__", [](const AttackSpec& s) {
        return "AttackSpec(p_a=" + format_full(s.p_a()) + ", n_bc=" + std::to_string(s.n_bc()) +
               ", cut=" + (s.cut().is_infinite() ? std::string("inf") : format_full(s.cut().seconds())) +
               ", lambda_h=" + format_full(s.lambda_h()) + ")";
      });

  py::class_<EconomicModel>(m, "EconomicModel")
      .def(py::init<double, double, double>(), py::arg("gamma"), py::arg("beta"), py::arg("value") = 0.0)
      .def_property_readonly("gamma", &EconomicModel::gamma)
      .def_property_readonly("beta", &EconomicModel::beta)
      .def_property_readonly("mu", &EconomicModel::mu)
      .def_property_readonly("value", &EconomicModel::value)
      .def("with_value", &EconomicModel::with_value, py::arg("value"));

  m.def("ballot_number", [](long long n, long long k) { return py::int_(py::str(to_string(ballot_number(n, k)))); },
        py::arg("n"), py::arg("m"));
  m.def("p_dsa_at_state", &p_dsa_at_state, py::arg("spec"), py::arg("i"));
  m.def("p_dsa", &p_dsa, py::arg("spec"));
  m.def("rosenfeld_p_dsa", &rosenfeld_p_dsa, py::arg("spec"), py::arg("tol") = 1e-12,
        py::arg("max_terms") = kDefaultSeriesCap);
  m.def("premine_success_prob", py::overload_cast<const AttackSpec&>(&premine_success_prob), py::arg("spec"));

  m.def("hypergeom_pFq",
        [](std::vector<double> a, std::vector<double> b, double x, double tol) {
          return hypergeom_pFq({std::move(a), std::move(b)}, x, tol);
        },
        py::arg("a"), py::arg("b"), py::arg("x"), py::arg("tol") = kDefaultSeriesTol);
  m.def("erlang_pdf", &erlang_pdf, py::arg("i"), py::arg("rate"), py::arg("t"));
  m.def("erlang_cdf", &erlang_cdf, py::arg("i"), py::arg("rate"), py::arg("t"));

  m.def("dsa_time_density", &dsa_time_density, py::arg("spec"), py::arg("t"),
        py::arg("tol") = kDefaultSeriesTol);
  m.def("attack_success_prob",
        [](const AttackSpec& s, double tol, std::size_t cap) { return attack_success_prob(s, series(tol, cap)); },
        py::arg("spec"), py::arg("tol") = 1e-12, py::arg("max_terms") = kDefaultSeriesCap);
  m.def("expected_success_time",
        [](const AttackSpec& s, double tol, std::size_t cap) { return expected_success_time(s, series(tol, cap)); },
        py::arg("spec"), py::arg("tol") = 1e-12, py::arg("max_terms") = kDefaultSeriesCap);

  m.def("expected_opex", [](const EconomicModel& e, const AttackSpec& s) { return expected_opex(e, s); },
        py::arg("model"), py::arg("spec"));
  m.def("expected_profit", [](const EconomicModel& e, const AttackSpec& s) { return expected_profit(e, s); },
        py::arg("model"), py::arg("spec"));
  m.def("required_value",
        [](const EconomicModel& e, const AttackSpec& s) { return required_float(required_value(e, s)); },
        py::arg("model"), py::arg("spec"), "C_Req; inf when no finite value makes the attack pay");

  m.def("resource_table",
        [](std::vector<unsigned> n_bc, std::vector<double> p_a, double c) {
          py::list rows;
          for (const auto& r : build_resource_table(n_bc, p_a, c).rows) rows.append(row_dict(r));
          return rows;
        },
        py::arg("n_bc") = std::vector<unsigned>{1, 3, 5, 7, 9},
        py::arg("p_a") = std::vector<double>{0.35, 0.4}, py::arg("c") = 4.0);
  m.def("case_study",
        [](const std::string& config_json, double p_a, unsigned n_bc, double c) {
          const NetworkConfig cfg = parse_network_config(config_json);
          const auto r = case_study(cfg, p_a, n_bc, CutTime::confirmation_multiple(c, n_bc, cfg.lambda_h()));
          py::dict d;
          d["p_as"] = r.p_as;
          d["e_tas_seconds"] = r.e_tas_seconds;
          d["e_x"] = r.e_x;
          d["c_req"] = required_float(r.c_req);
          d["runtime_per_attempt"] = r.runtime_per_attempt;
          return d;
        },
        py::arg("config_json"), py::arg("p_a"), py::arg("n_bc"), py::arg("c") = 4.0);
  m.def("premine_comparison",
        [](double p_a, unsigned n_bc) {
          const auto c = premine_comparison(p_a, n_bc);
          return py::make_tuple(c.p_dsa, c.p_premine, c.ratio);
        },
        py::arg("p_a"), py::arg("n_bc"));

  m.def("estimate",
        [](const AttackSpec& s, std::uint64_t trials, std::uint64_t seed, unsigned threads,
           std::optional<std::uint64_t> event_cap) {
          SimulationOptions opts;
          opts.threads = threads;
          opts.event_cap = event_cap;
          SimulationSummary out;
          {
            py::gil_scoped_release release;
            out = estimate(s, trials, seed, opts);
          }
          return summary_dict(out);
        },
        py::arg("spec"), py::arg("trials"), py::arg("seed") = 0, py::arg("threads") = 1,
        py::arg("event_cap") = py::none());
  m.def("enumerate_exact", &enumerate_exact, py::arg("spec"), py::arg("i_max"));
}
