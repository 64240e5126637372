#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "gefhole/conditional_sampler.hpp"
#include "gefhole/constants.hpp"
#include "gefhole/energy_optimizer.hpp"
#include "gefhole/errors.hpp"
#include "gefhole/io.hpp"
#include "gefhole/radial_measures.hpp"
#include "gefhole/rootfinder.hpp"
#include "gefhole/series.hpp"

namespace py = pybind11;
using namespace gefhole;

PYBIND11_MODULE(_core, m) {
  m.attr("__version__") = library_version();

  py::register_exception<ArgumentError>(m, "ArgumentError", PyExc_ValueError);
  py::register_exception<NumericalError>(m, "NumericalError", PyExc_ArithmeticError);

  py::class_<RandomStream>(m, "RandomStream")
      .def(py::init<std::uint64_t, std::uint64_t>(), py::arg("seed"), py::arg("stream") = 0)
      .def("split", &RandomStream::split)
      .def("uniform", &RandomStream::uniform)
      .def("normal", &RandomStream::normal)
      .def("complex_gaussian", &RandomStream::complex_gaussian);

  // constants
  py::enum_<Branch>(m, "Branch")
      .value("deficit", Branch::deficit)
      .value("overcrowd", Branch::overcrowd)
      .value("hole", Branch::hole)
      .value("saturated", Branch::saturated);
  py::class_<RateConstant>(m, "RateConstant")
      .def_readonly("q", &RateConstant::q)
      .def_readonly("Z", &RateConstant::Z)
      .def_readonly("branch", &RateConstant::branch);
  m.def("q_of_p", &q_of_p);
  m.def("z_const", &z_const);
  m.def("rate_constant", &rate_constant);
  m.def("ginibre_g", &ginibre_g);
  m.def("jlm_exponent", &jlm_exponent);
  m.def("moderate_rate", &moderate_rate);
  m.def("main_term_logratio", &main_term_logratio);

  // series and roots
  py::class_<CoeffVector>(m, "CoeffVector")
      .def(py::init<>())
      .def_readwrite("xi", &CoeffVector::xi)
      .def_readwrite("scale", &CoeffVector::scale);
  m.def("sample_coeffs", &sample_coeffs, py::arg("n"), py::arg("rng"), py::arg("scale") = 1.0);
  m.def("tail_envelope", &tail_envelope);

  py::class_<ZeroConfig>(m, "ZeroConfig")
      .def(py::init<>())
      .def_readwrite("zeros", &ZeroConfig::zeros)
      .def_readwrite("scale", &ZeroConfig::scale)
      .def_readonly("near_multiple", &ZeroConfig::near_multiple)
      .def_readonly("max_residual", &ZeroConfig::max_residual);
  m.def("roots", [](const CoeffVector& c) { return roots(c); });
  m.def("count_in_disk", &count_in_disk);
  m.def("winding_count", [](const CoeffVector& c, double rho) { return winding_count(c, rho).count; });

  // radial measures
  py::class_<CircleAtom>(m, "CircleAtom")
      .def(py::init<double, double>(), py::arg("radius"), py::arg("mass"))
      .def_readonly("radius", &CircleAtom::radius)
      .def_readonly("mass", &CircleAtom::mass);
  py::class_<Annulus>(m, "Annulus")
      .def(py::init([](double lo, double hi, double c) { return Annulus{lo, hi, c}; }), py::arg("lo"), py::arg("hi"),
           py::arg("c"))
      .def_readonly("lo", &Annulus::lo)
      .def_readonly("hi", &Annulus::hi)
      .def_readonly("c", &Annulus::c);
  py::class_<RadialMeasure>(m, "RadialMeasure")
      .def(py::init<std::vector<CircleAtom>, std::vector<Annulus>>(), py::arg("atoms"), py::arg("annuli"))
      .def_property_readonly("atoms", &RadialMeasure::atoms)
      .def_property_readonly("annuli", &RadialMeasure::annuli)
      .def_property_readonly("total_mass", &RadialMeasure::total_mass)
      .def("to_json", [](const RadialMeasure& nu) { return to_json(nu).dump(); });
  py::enum_<CatalogKind>(m, "CatalogKind")
      .value("gef_constrained", CatalogKind::gef_constrained)
      .value("gef_global_radon", CatalogKind::gef_global_radon)
      .value("ginibre", CatalogKind::ginibre);
  m.def("catalog", &catalog, py::arg("p"), py::arg("alpha"), py::arg("which") = CatalogKind::gef_constrained);
  m.def("equilibrium", &equilibrium);
  m.def("minimal_I", &minimal_I);
  m.def("log_potential", &log_potential);
  m.def("log_energy", &log_energy);
  m.def("functional_I", [](const RadialMeasure& nu, double alpha) { return functional_I(nu, alpha).I_alpha; });

  // optimizer
  py::class_<ShellGrid>(m, "ShellGrid")
      .def_readonly("radii", &ShellGrid::radii)
      .def_readonly("masses", &ShellGrid::masses)
      .def_readonly("alpha", &ShellGrid::alpha)
      .def_readonly("unit_index", &ShellGrid::unit_index);
  py::class_<MinimizeResult>(m, "MinimizeResult")
      .def_readonly("grid", &MinimizeResult::grid)
      .def_readonly("I", &MinimizeResult::I)
      .def_readonly("iterations", &MinimizeResult::iterations)
      .def_readonly("budget_exhausted", &MinimizeResult::budget_exhausted);
  m.def(
      "minimize",
      [](double alpha, std::optional<double> p, int shells) {
        GridSpec g;
        g.shells = shells;
        return minimize(alpha, p ? Constraint::for_p(*p) : Constraint::none(), g);
      },
      py::arg("alpha"), py::arg("p") = py::none(), py::arg("shells") = 800,
      py::call_guard<py::gil_scoped_release>());

  // conditional sampling
  py::class_<ChainResult>(m, "ChainResult")
      .def_readonly("samples", &ChainResult::samples)
      .def_readonly("acceptance_rate", &ChainResult::acceptance_rate)
      .def_readonly("proposal_scale", &ChainResult::proposal_scale);
  m.def(
      "hole_chain",
      [](int N, double L, double hole_radius, int sweeps, int burn_in, int thin, std::uint64_t seed) {
        ChainOptions o;
        o.hole_radius = hole_radius;
        o.sweeps = sweeps;
        o.burn_in_sweeps = burn_in;
        o.thin = thin;
        RandomStream rng(seed);
        return mh_hole_chain(JointDensityContext::make(N, L), o, rng);
      },
      py::arg("N"), py::arg("L"), py::arg("hole_radius"), py::arg("sweeps") = 1000, py::arg("burn_in") = 500,
      py::arg("thin") = 1, py::arg("seed") = 1, py::call_guard<py::gil_scoped_release>());
  m.def("log_joint_density", [](const std::vector<cplx>& z, int N, double L) {
    return log_joint_density(z, JointDensityContext::make(N, L));
  });
  py::class_<HoleEstimate>(m, "HoleEstimate")
      .def_readonly("estimate", &HoleEstimate::estimate)
      .def_readonly("stderr", &HoleEstimate::stderr_)
      .def_readonly("hits", &HoleEstimate::hits)
      .def_readonly("samples", &HoleEstimate::samples);
  m.def(
      "hole_probability_mc",
      [](double r, long samples, std::uint64_t seed) {
        RandomStream rng(seed);
        return hole_probability_mc(r, samples, rng);
      },
      py::arg("r"), py::arg("samples"), py::arg("seed") = 1, py::call_guard<py::gil_scoped_release>());
  m.def(
      "radial_density",
      [](const std::vector<ZeroConfig>& s, const std::vector<double>& edges, double scale) {
        return radial_histogram(s, edges, scale).density;
      },
      py::arg("samples"), py::arg("edges"), py::arg("scale") = 1.0);
}
