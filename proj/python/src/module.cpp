// Thin bindings. Schemes and reports cross the boundary as JSON text; the
// Python package wraps them in dicts.
#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "subdiv/engine.hpp"
#include "subdiv/error.hpp"
#include "subdiv/jsr.hpp"
#include "subdiv/regularity.hpp"
#include "subdiv/scheme_io.hpp"
#include "subdiv/spectral_limits.hpp"
#include "subdiv/sumrules.hpp"
#include "subdiv/transition.hpp"

namespace py = pybind11;
using namespace subdiv;
using cd = std::complex<double>;

namespace {

SchemeDocument load(const std::string& text) { return scheme_from_json(parse_json_text(text, "<scheme>")); }

std::optional<std::vector<ParamSymbol::Point>> interval_of(const std::optional<std::pair<std::string, std::string>>& iv) {
  if (!iv) return std::nullopt;
  return std::vector<ParamSymbol::Point>{{parse_rational(iv->first)}, {parse_rational(iv->second)}};
}

JsrOptions jsr_options(int depth, double tol, std::size_t max_nodes) {
  JsrOptions o;
  o.depth = depth;
  o.tol = tol;
  o.max_nodes = max_nodes;
  return o;
}

}  // namespace

PYBIND11_MODULE(_core, mod) {
  mod.doc() = "native core of the subdiv package";

  // translators are tried newest first, so the base class goes in first
  py::register_exception<Error>(mod, "SubdivError", PyExc_RuntimeError);
  py::register_exception<ParseError>(mod, "ParseError", PyExc_ValueError);
  py::register_exception<NotEnoughSumRulesError>(mod, "NotEnoughSumRulesError", PyExc_ValueError);

  mod.def(
      "analyze",
      [](const std::string& scheme, std::optional<std::pair<std::string, std::string>> interval,
         std::optional<int> ell) {
        const SchemeDocument doc = load(scheme);
        RegularityOptions opt;
        opt.ell = ell;
        opt.subdomain = interval_of(interval);
        py::gil_scoped_release nogil;
        return report_to_json(analyze(doc.symbol, doc.m, opt)).dump();
      },
      py::arg("scheme"), py::arg("interval") = py::none(), py::arg("ell") = py::none());

  mod.def(
      "restrict",
      [](const std::string& scheme, std::optional<std::pair<std::string, std::string>> interval,
         std::optional<int> ell) {
        const SchemeDocument doc = load(scheme);
        ParamSymbol ps = doc.symbol;
        if (auto d = interval_of(interval)) ps = ps.with_domain(*d);
        const int l = ell ? *ell : family_sum_rule_order(ps, doc.m).order - 1;
        if (l < 0) throw ArgumentError("the family satisfies no sum rules");
        return family_to_json(restrict_family(ps, doc.m, l)).dump();
      },
      py::arg("scheme"), py::arg("interval") = py::none(), py::arg("ell") = py::none());

  mod.def(
      "jsr_bounds",
      [](const std::vector<Eigen::MatrixXd>& mats, int depth, double tol, std::size_t max_nodes) {
        if (mats.empty()) throw ArgumentError("empty matrix family");
        JsrBounds b;
        {
          py::gil_scoped_release nogil;
          b = jsr_bounds(mats, jsr_options(depth, tol, max_nodes));
        }
        return bounds_to_json(b).dump();
      },
      py::arg("matrices"), py::arg("depth") = 20, py::arg("tol") = 1e-6, py::arg("max_nodes") = 100000);

  mod.def("spectral_radius", &spectral_radius, py::arg("matrix"));

  mod.def(
      "sum_rule_order",
      [](const std::string& scheme) {
        const SchemeDocument doc = load(scheme);
        return family_sum_rule_order(doc.symbol, doc.m).order;
      },
      py::arg("scheme"));

  mod.def(
      "support_interval",
      [](const std::string& scheme) {
        const SchemeDocument doc = load(scheme);
        const ParameterSchedule sched = doc.schedule ? *doc.schedule : ParameterSchedule::fixed(doc.symbol.domain().front());
        const auto [prefix, tail] = schedule_supports(doc.symbol, sched, doc.start_level);
        const SupportRange s = support_interval(prefix, tail, doc.m);
        return std::make_pair(to_string(s.left), to_string(s.right));
      },
      py::arg("scheme"));

  mod.def(
      "gamma_set",
      [](const std::vector<cd>& coeffs, int r, int m) {
        const PeriodicZeroSet z = gamma_set(coeffs, r, m);
        return py::make_tuple(z.base_points, z.period);
      },
      py::arg("coeffs"), py::arg("r"), py::arg("m") = 2);

  mod.def(
      "generability",
      [](const std::vector<cd>& zeros, int m, double window) {
        const GenerabilityVerdict v = generability_necessary_test(zeros, m, window);
        const char* kind = v.kind == GenerabilityVerdict::Kind::violation     ? "violation"
                           : v.kind == GenerabilityVerdict::Kind::consistent ? "consistent"
                                                                             : "inconclusive";
        return py::make_tuple(kind, v.witnesses, v.message);
      },
      py::arg("zeros"), py::arg("m") = 2, py::arg("window") = 20.0);

  mod.def("bessel_j0_zeros", &bessel_j0_zeros, py::arg("count"));
}
