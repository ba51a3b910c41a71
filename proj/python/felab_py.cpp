#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "felab/errors.hpp"
#include "felab/functional.hpp"
#include "felab/io.hpp"
#include "felab/perturbation.hpp"
#include "felab/radial_kernels.hpp"
#include "felab/search.hpp"
#include "felab/set_model.hpp"
#include "felab/spectral.hpp"

namespace py = pybind11;
using namespace pybind11::literals;
using namespace felab;

namespace {

QuadratureConfig config(double tol) {
  QuadratureConfig c;
  if (tol > 0) {
    c.abs_tol = tol;
    c.rel_tol = tol;
  }
  return c;
}

KernelKind kind_from(const std::string& s) {
  if (s == "K") return KernelKind::K;
  if (s == "L") return KernelKind::L;
  throw DomainError("kernel kind must be 'K' or 'L'");
}

}  // namespace

PYBIND11_MODULE(_felab, m) {
  m.doc() = "Extremal sets for the Hausdorff-Young functional: kernels, spectra, expansions and search";

  auto base = py::register_exception<Error>(m, "FelabError");
  auto domain = py::register_exception<DomainError>(m, "DomainError", base.ptr());
  py::register_exception<ThresholdError>(m, "ThresholdError", domain.ptr());
  py::register_exception<InvalidSetError>(m, "InvalidSetError", domain.ptr());
  py::register_exception<ConvergenceError>(m, "ConvergenceError", base.ptr());

  py::class_<IntegralResult>(m, "IntegralResult")
      .def_readonly("value", &IntegralResult::value)
      .def_readonly("error_estimate", &IntegralResult::error_estimate)
      .def_readonly("converged", &IntegralResult::converged);

  py::class_<AffineMap>(m, "AffineMap")
      .def_static("identity", &AffineMap::identity, "d"_a)
      .def_static("translation", &AffineMap::translation, "d"_a, "tx"_a, "ty"_a = 0.0)
      .def_static("linear", &AffineMap::linear, "a11"_a, "a12"_a, "a21"_a, "a22"_a)
      .def("then", &AffineMap::then)
      .def("inverse", &AffineMap::inverse)
      .def("det", &AffineMap::det)
      .def_readwrite("A", &AffineMap::A)
      .def_readwrite("v", &AffineMap::v);

  py::class_<IntervalSet>(m, "IntervalSet")
      .def(py::init<std::vector<std::pair<double, double>>>(), "intervals"_a)
      .def_property_readonly("intervals", &IntervalSet::intervals)
      .def("measure", &IntervalSet::measure);

  py::class_<StarSet>(m, "StarSet")
      .def(py::init<std::array<double, 2>, double, std::vector<double>, std::vector<double>, AffineMap>(), "center"_a,
           "c0"_a, "a"_a, "b"_a, "affine"_a = AffineMap::identity(2))
      .def_static("disc", &StarSet::disc, "radius"_a = 1.0)
      .def_static("ellipse", &StarSet::ellipse, "T"_a)
      .def("measure", &StarSet::measure)
      .def("radius", &StarSet::radius, "theta"_a)
      .def("contains", &StarSet::contains)
      .def_property_readonly("a", &StarSet::a)
      .def_property_readonly("b", &StarSet::b);

  m.def("unit_ball", &unit_ball, "d"_a);
  m.def("measure", [](const SetModel& E) { return measure(E); });
  m.def("apply_affine", &apply_affine, "E"_a, "T"_a);
  m.def("set_to_json", [](const SetModel& E) { return set_to_json(E).dump(); });
  m.def("set_from_json", [](const std::string& s) { return set_from_json(json::parse(s)); });

  m.def("continuity_threshold", &continuity_threshold, "d"_a);
  m.def("babenko_constant", &babenko_constant, "q"_a, "d"_a);
  m.def(
      "kernel_value",
      [](const std::string& kind, int d, double q, double r, double tol) {
        return kernel_value(kind_from(kind), d, q, r, config(tol));
      },
      "kind"_a, "d"_a, "q"_a, "r"_a, "tol"_a = 0.0);
  m.def(
      "gamma", [](int d, double q, double tol) { return gamma_qd(d, q, config(tol)); }, "d"_a, "q"_a, "tol"_a = 0.0);
  m.def(
      "circle_coeff", [](double q, int n, double tol) { return circle_coeff(q, n, config(tol)); }, "q"_a, "n"_a,
      "tol"_a = 0.0);

  py::class_<PhiResult>(m, "PhiResult")
      .def_readonly("phi", &PhiResult::phi)
      .def_readonly("norm_q_pow_q", &PhiResult::norm_q_pow_q)
      .def_readonly("measure", &PhiResult::measure)
      .def_readonly("error_estimate", &PhiResult::error_estimate);
  m.def(
      "phi", [](const SetModel& E, double q, double tol) { return phi_q(E, q, config(tol)); }, "E"_a, "q"_a,
      "tol"_a = 0.0);
  m.def("dist_to_ellipsoids", [](const SetModel& E) { return dist_to_ellipsoids(E).distance; }, "E"_a);
  m.def(
      "balance",
      [](const SetModel& E) {
        const auto r = balance(E);
        return py::make_tuple(r.balanced, r.residual, r.iterations);
      },
      "E"_a);

  py::class_<ModeSpectrum>(m, "ModeSpectrum")
      .def_readonly("gamma", &ModeSpectrum::gamma)
      .def_readonly("stability_constant", &ModeSpectrum::stability_constant)
      .def_readonly("neutral_modes", &ModeSpectrum::neutral_modes)
      .def_readonly("worst_mode", &ModeSpectrum::worst_mode)
      .def_property_readonly("margins", [](const ModeSpectrum& s) {
        std::vector<std::pair<int, double>> out;
        for (const auto& r : s.modes) out.emplace_back(r.n, r.margin);
        return out;
      });
  m.def(
      "mode_margins", [](int d, double q, int n_max, double tol) { return mode_margins(d, q, n_max, config(tol)); },
      "d"_a, "q"_a, "n_max"_a = 20, "tol"_a = 0.0);

  py::class_<ExpansionReport>(m, "ExpansionReport")
      .def_readonly("direct", &ExpansionReport::direct)
      .def_readonly("base", &ExpansionReport::base)
      .def_readonly("term_K", &ExpansionReport::term_K)
      .def_readonly("term_LL", &ExpansionReport::term_LL)
      .def_readonly("term_Lrefl", &ExpansionReport::term_Lrefl)
      .def_readonly("residual", &ExpansionReport::residual)
      .def_readonly("symdiff", &ExpansionReport::symdiff)
      .def_property_readonly("remainder", [](const ExpansionReport& r) { return to_string(r.remainder); });
  m.def(
      "expansion_report", [](const SetModel& E, double q, double tol) { return expansion_report(E, q, config(tol)); },
      "E"_a, "q"_a, "tol"_a = 0.0);
  m.def(
      "family_member", [](const std::string& name, int d, double eps) { return named_family(name, d)(eps); }, "name"_a,
      "d"_a, "eps"_a);
  m.def(
      "remainder_slope",
      [](const std::string& name, int d, double q, const std::vector<double>& eps) {
        const auto s = remainder_slope(named_family(name, d), q, eps);
        return py::make_tuple(s.slope, s.noise_limited);
      },
      "name"_a, "d"_a, "q"_a, "eps"_a);

  py::class_<SearchResult>(m, "SearchResult")
      .def_readonly("best_set", &SearchResult::best_set)
      .def_readonly("best_phi", &SearchResult::best_phi)
      .def_readonly("phi_ball", &SearchResult::phi_ball)
      .def_readonly("gap", &SearchResult::gap)
      .def_readonly("evaluations", &SearchResult::evaluations)
      .def_readonly("trajectory", &SearchResult::trajectory);
  m.def(
      "random_probe",
      [](double q, const std::string& family, int restarts, long budget, std::uint64_t seed) {
        SearchConfig c;
        c.q = q;
        c.family = Family::parse(family);
        c.restarts = restarts;
        c.budget = budget;
        c.seed = seed;
        c.quad = search_quadrature(c.family.dimension());
        return random_probe(c);
      },
      "q"_a, "family"_a = "intervals:2", "restarts"_a = 20, "budget"_a = 200, "seed"_a = 1);
}
