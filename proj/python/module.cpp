// Copyright 2026 The plasmon-cqed Authors
// SPDX-License-Identifier: Apache-2.0

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <sstream>

#include "app/tasks.hpp"
#include "pcqed/coupling.hpp"
#include "pcqed/errors.hpp"
#include "pcqed/heff.hpp"
#include "pcqed/mie.hpp"
#include "pcqed/parallel.hpp"
#include "pcqed/units.hpp"
#include "pcqed/weak.hpp"

namespace py = pybind11;
using namespace pcqed;

PYBIND11_MODULE(_core, m) {
  m.doc() = "Emitter coupled to the plasmon modes of a metal sphere";

  auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<InvalidArgument>(m, "InvalidArgument", base.ptr());
  py::register_exception<NumericalFailure>(m, "NumericalFailure", base.ptr());
  py::register_exception<SchemaError>(m, "SchemaError", base.ptr());

  py::class_<Material>(m, "Material")
      .def_static("drude", &Material::drude, py::arg("eps_inf"), py::arg("hw_p"), py::arg("hgamma_p"))
      .def_static("silver_drude", &Material::silver_drude, py::arg("hgamma_p") = 0.051)
      .def("permittivity", [](const Material& mat, double hw) { return permittivity(mat, hw); });

  py::class_<Geometry>(m, "Geometry")
      .def_static("from_gap", &Geometry::from_gap, py::arg("radius"), py::arg("eps_b"), py::arg("gap"))
      .def_readwrite("radius", &Geometry::radius)
      .def_readwrite("eps_b", &Geometry::eps_b)
      .def_readwrite("distance", &Geometry::distance)
      .def_property_readonly("gap", &Geometry::gap);

  py::class_<Emitter>(m, "Emitter")
      .def_static("from_lifetime", &Emitter::from_lifetime, py::arg("hw0"), py::arg("tau0_ns"),
                  py::arg("eta"), py::arg("geometry"))
      .def_static("from_dipole", &Emitter::from_dipole, py::arg("hw0"), py::arg("dipole_debye"),
                  py::arg("hgamma0_nr"), py::arg("geometry"))
      .def_readonly("hw0", &Emitter::hw0)
      .def_readonly("dipole", &Emitter::dipole)
      .def_readonly("quantum_yield", &Emitter::quantum_yield)
      .def_readonly("hgamma0", &Emitter::hgamma0);

  py::class_<ModeParams>(m, "ModeParams")
      .def_readonly("n", &ModeParams::n)
      .def_readonly("hw_n", &ModeParams::hw_n)
      .def_readonly("hgamma", &ModeParams::hgamma)
      .def_readonly("hg", &ModeParams::hg)
      .def_readonly("detuning", &ModeParams::detuning)
      .def_readonly("fit_residual", &ModeParams::fit_residual)
      .def("__repr__", [](const ModeParams& p) {
        std::ostringstream s;
        s << "ModeParams(n=" << p.n << ", hw_n=" << p.hw_n << ", hgamma=" << p.hgamma
          << ", hg=" << p.hg << ")";
        return s.str();
      });

  m.def("linspace", &linspace, py::arg("lo"), py::arg("hi"), py::arg("points"));
  m.def("wavelength_to_energy", &units::wavelength_to_energy);
  m.def("qs_resonance", &qs_resonance, py::arg("n"), py::arg("geometry"), py::arg("material"));

  m.def(
      "kappa_spectrum",
      [](int n, const std::vector<double>& grid, const Geometry& g, const Material& mat,
         const Emitter& e) { return kappa_spectrum(n, grid, g, mat, e).data.values; },
      py::arg("n"), py::arg("grid"), py::arg("geometry"), py::arg("material"), py::arg("emitter"));
  m.def(
      "extract_modes",
      [](int count, const std::vector<double>& grid, const Geometry& g, const Material& mat,
         const Emitter& e) { return extract_modes(count, grid, g, mat, e); },
      py::arg("count"), py::arg("grid"), py::arg("geometry"), py::arg("material"),
      py::arg("emitter"));

  m.def(
      "hamiltonian",
      [](const std::vector<ModeParams>& modes, const Emitter& e) {
        return build_standard(modes, e).matrix;
      },
      py::arg("modes"), py::arg("emitter"), "Standard effective Hamiltonian (eV).");
  m.def(
      "dressed_states",
      [](const std::vector<ModeParams>& modes, const Emitter& e) {
        const auto d = eigendecompose(build_standard(modes, e));
        return py::make_tuple(d.eigenvalues, d.right, d.left);
      },
      py::arg("modes"), py::arg("emitter"), "(eigenvalues, right, left) with left^H right = I.");
  m.def(
      "emitter_population",
      [](const std::vector<ModeParams>& modes, const Emitter& e, const std::vector<double>& t) {
        const auto h = build_standard(modes, e);
        std::vector<double> p;
        for (const auto& s : evolve(h, excited_emitter(h.dimension()), t)) {
          p.push_back(s.emitter_population());
        }
        return p;
      },
      py::arg("modes"), py::arg("emitter"), py::arg("times"),
      "|C_e(t)|^2 with times in hbar/eV.");
  m.def(
      "gamma_ratio_adiabatic",
      [](const std::vector<ModeParams>& modes, const Emitter& e) {
        return adiabatic_rates(modes, e).ratio();
      },
      py::arg("modes"), py::arg("emitter"));
  m.def(
      "gamma_ratio_fermi",
      [](const Geometry& g, const Material& mat, const Emitter& e, int n_max) {
        return fermi_rate(g, mat, e, n_max).ratio;
      },
      py::arg("geometry"), py::arg("material"), py::arg("emitter"), py::arg("n_max") = 60);

  m.def("set_thread_count", &set_thread_count, py::arg("threads"));
  m.def(
      "run",
      [](const std::filesystem::path& config, const std::filesystem::path& out, int threads,
         bool verify) {
        std::ostringstream log;
        const int code = app::run_scenario(config, {out, threads, verify}, log);
        return py::make_tuple(code, log.str());
      },
      py::arg("config"), py::arg("out") = std::filesystem::path{}, py::arg("threads") = -1,
      py::arg("verify") = false, "Runs a scenario file; returns (exit_code, log).");
}
