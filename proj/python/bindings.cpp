#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "pfd/config.hpp"
#include "pfd/damage_vi.hpp"
#include "pfd/energy.hpp"
#include "pfd/io.hpp"
#include "pfd/material.hpp"
#include "pfd/mesh.hpp"
#include "pfd/plasticity.hpp"
#include "pfd/point_drivers.hpp"
#include "pfd/scenarios.hpp"
#include "pfd/schemes.hpp"
#include "pfd/simulation.hpp"

namespace py = pybind11;
using namespace pfd;

namespace {

Eigen::MatrixXd nodes_array(const Mesh2D& m) {
  Eigen::MatrixXd a(m.num_nodes(), 2);
  for (int i = 0; i < m.num_nodes(); ++i) a.row(i) = m.nodes()[i].transpose();
  return a;
}

Eigen::MatrixXi triangles_array(const Mesh2D& m) {
  Eigen::MatrixXi a(m.num_triangles(), 3);
  for (int e = 0; e < m.num_triangles(); ++e)
    for (int k = 0; k < 3; ++k) a(e, k) = m.triangles()[e][k];
  return a;
}

}  // namespace

PYBIND11_MODULE(_core, mod) {
  mod.doc() = "Phase-field damage elastodynamics on P1 triangles";

  py::register_exception<SolverError>(mod, "SolverError", PyExc_RuntimeError);
  py::register_exception<ConfigError>(mod, "ConfigError", PyExc_ValueError);
  py::register_exception<IoError>(mod, "IoError", PyExc_IOError);

  py::enum_<BoundaryKind>(mod, "BoundaryKind")
      .value("Free", BoundaryKind::Free)
      .value("Traction", BoundaryKind::Traction)
      .value("NormalSliding", BoundaryKind::NormalSliding)
      .value("Fixed", BoundaryKind::Fixed);
  py::enum_<LawKind>(mod, "LawKind")
      .value("LinearDamage", LawKind::LinearDamage)
      .value("ModeSensitive", LawKind::ModeSensitive)
      .value("AT2", LawKind::AT2)
      .value("AT1", LawKind::AT1);
  py::enum_<Regime>(mod, "Regime").value("Unidirectional", Regime::Unidirectional).value("Healing", Regime::Healing);
  py::enum_<FractureMode>(mod, "FractureMode").value("I", FractureMode::I).value("II", FractureMode::II);
  py::enum_<SchemeKind>(mod, "SchemeKind")
      .value("Monolithic", SchemeKind::Monolithic)
      .value("Staggered", SchemeKind::Staggered)
      .value("Explicit", SchemeKind::Explicit);

  py::class_<Mesh2D>(mod, "Mesh")
      .def_property_readonly("nodes", &nodes_array)
      .def_property_readonly("triangles", &triangles_array)
      .def_property_readonly("num_nodes", &Mesh2D::num_nodes)
      .def_property_readonly("num_triangles", &Mesh2D::num_triangles)
      .def_property_readonly("tag_names",
                             [](const Mesh2D& m) {
                               std::vector<std::string> names;
                               for (const auto& t : m.tags()) names.push_back(t.name);
                               return names;
                             })
      .def("with_tag_kind", &Mesh2D::with_tag_kind, py::arg("name"), py::arg("kind"));
  mod.def("generate_rect_mesh", &generate_rect_mesh, py::arg("nx"), py::arg("ny"), py::arg("Lx"), py::arg("Ly"));

  py::class_<IsoTensor>(mod, "IsoTensor")
      .def(py::init([](double K, double G) { return IsoTensor{K, G}; }), py::arg("K"), py::arg("G"))
      .def_readwrite("K", &IsoTensor::K)
      .def_readwrite("G", &IsoTensor::G);

  py::class_<MaterialLaw>(mod, "MaterialLaw")
      .def(py::init<>())
      .def_readwrite("kind", &MaterialLaw::kind)
      .def_readwrite("rho", &MaterialLaw::rho)
      .def_property(
          "K_coeffs", [](const MaterialLaw& l) { return l.K_fun.coeffs(); },
          [](MaterialLaw& l, std::vector<double> c) { l.K_fun = Polynomial(std::move(c)); })
      .def_property(
          "G_coeffs", [](const MaterialLaw& l) { return l.G_fun.coeffs(); },
          [](MaterialLaw& l, std::vector<double> c) { l.G_fun = Polynomial(std::move(c)); })
      .def_property(
          "phi_coeffs", [](const MaterialLaw& l) { return l.phi_fun.coeffs(); },
          [](MaterialLaw& l, std::vector<double> c) { l.phi_fun = Polynomial(std::move(c)); })
      .def_readwrite("gc", &MaterialLaw::gc)
      .def_readwrite("eps_pf", &MaterialLaw::eps_pf)
      .def_readwrite("eps_reg", &MaterialLaw::eps_reg)
      .def_readwrite("kappa", &MaterialLaw::kappa)
      .def_readwrite("nu_visc", &MaterialLaw::nu_visc)
      .def_readwrite("chi", &MaterialLaw::chi)
      .def_readwrite("D0", &MaterialLaw::D0)
      .def_readwrite("regime", &MaterialLaw::regime)
      .def("validate", &MaterialLaw::validate);
  mod.def("make_phase_field_law", &make_phase_field_law, py::arg("kind"), py::arg("rho"), py::arg("C1"),
          py::arg("gc"), py::arg("eps"), py::arg("eps0") = 1.0);

  mod.def("stored_energy", &stored_energy, py::arg("strain"), py::arg("alpha"), py::arg("law"));
  mod.def("stress", &stress, py::arg("strain"), py::arg("alpha"), py::arg("law"));
  mod.def("driving_force", &driving_force, py::arg("strain"), py::arg("alpha"), py::arg("law"));
  mod.def("elastic_tensor", &elastic_tensor, py::arg("alpha"), py::arg("law"));
  mod.def("secant_C", &secant_C, py::arg("a"), py::arg("b"), py::arg("law"));
  mod.def("secant_phi", &secant_phi, py::arg("a"), py::arg("b"), py::arg("law"));
  mod.def("effective_fracture_stress", &effective_fracture_stress, py::arg("mode"), py::arg("alpha0"),
          py::arg("law"));

  py::class_<PlasticLaw>(mod, "PlasticLaw")
      .def(py::init<>())
      .def_readwrite("H", &PlasticLaw::H)
      .def_readwrite("G_nh", &PlasticLaw::G_nh)
      .def_property(
          "sigma_yld_coeffs", [](const PlasticLaw& p) { return p.sigma_yld_fun.coeffs(); },
          [](PlasticLaw& p, std::vector<double> c) { p.sigma_yld_fun = Polynomial(std::move(c)); })
      .def_readwrite("kappa1", &PlasticLaw::kappa1);
  py::class_<ReturnMapResult>(mod, "ReturnMapResult")
      .def_readonly("pi_new", &ReturnMapResult::pi_new)
      .def_readonly("active", &ReturnMapResult::active);
  mod.def("return_map", &return_map, py::arg("trial"), py::arg("pi_old"), py::arg("plastic"), py::arg("tau"),
          py::arg("alpha_old"), py::arg("coupling") = 0.0);
  mod.def("return_map_residual", &return_map_residual, py::arg("trial"), py::arg("pi_old"), py::arg("pi_new"),
          py::arg("plastic"), py::arg("tau"), py::arg("alpha_old"), py::arg("coupling") = 0.0);

  py::class_<DamageSubproblem>(mod, "DamageSubproblem")
      .def(py::init<>())
      .def_readwrite("Q", &DamageSubproblem::Q)
      .def_readwrite("b", &DamageSubproblem::b)
      .def_readwrite("lower", &DamageSubproblem::lower)
      .def_readwrite("upper", &DamageSubproblem::upper)
      .def_readwrite("l1_weight", &DamageSubproblem::l1_weight)
      .def_readwrite("l1_center", &DamageSubproblem::l1_center)
      .def_readwrite("tol", &DamageSubproblem::tol)
      .def_readwrite("max_iter", &DamageSubproblem::max_iter)
      .def("objective", &DamageSubproblem::objective);
  py::class_<DamageSolution>(mod, "DamageSolution")
      .def_readonly("alpha_new", &DamageSolution::alpha_new)
      .def_readonly("bound_multiplier", &DamageSolution::bound_multiplier)
      .def_readonly("iterations", &DamageSolution::iterations)
      .def_readonly("residual", &DamageSolution::residual);
  mod.def("solve_box_qp", &solve_box_qp, py::arg("problem"));

  py::class_<EnergyLedger>(mod, "EnergyLedger")
      .def_readonly("kinetic", &EnergyLedger::kinetic)
      .def_readonly("stored_elastic", &EnergyLedger::stored_elastic)
      .def_readonly("stored_damage", &EnergyLedger::stored_damage)
      .def_readonly("stored_plastic", &EnergyLedger::stored_plastic)
      .def_readonly("dissipated_viscous", &EnergyLedger::dissipated_viscous)
      .def_readonly("dissipated_damage", &EnergyLedger::dissipated_damage)
      .def_readonly("dissipated_plastic", &EnergyLedger::dissipated_plastic)
      .def_readonly("external_work", &EnergyLedger::external_work)
      .def("total_energy", &EnergyLedger::total_energy)
      .def("total_dissipation", &EnergyLedger::total_dissipation);
  mod.def("balance_residual", &balance_residual, py::arg("now"), py::arg("initial"));

  py::class_<SimState>(mod, "SimState")
      .def_readonly("t", &SimState::t)
      .def_readonly("step", &SimState::step)
      .def_readonly("u", &SimState::u)
      .def_readonly("v", &SimState::v)
      .def_readonly("alpha", &SimState::alpha)
      .def_readonly("ledger", &SimState::ledger);

  py::class_<SchemeConfig>(mod, "SchemeConfig")
      .def(py::init<>())
      .def_readwrite("scheme", &SchemeConfig::scheme)
      .def_readwrite("tau", &SchemeConfig::tau)
      .def_readwrite("newton_tol", &SchemeConfig::newton_tol)
      .def_readwrite("qp_tol", &SchemeConfig::qp_tol)
      .def_readwrite("max_inner_iters", &SchemeConfig::max_inner_iters)
      .def_readwrite("lumped", &SchemeConfig::lumped);

  py::class_<Discretization>(mod, "Discretization")
      .def(py::init([](const Mesh2D& m, const MaterialLaw& law) { return Discretization(m, law); }), py::arg("mesh"),
           py::arg("law"))
      .def_property_readonly("num_dofs", &Discretization::num_dofs);
  mod.def("make_initial_state", &make_initial_state, py::arg("disc"), py::arg("u0"), py::arg("v0"),
          py::arg("alpha0"), py::arg("with_protostress") = false, py::arg("lumped_mass") = false);
  mod.def(
      "step", [](const SimState& s, const Discretization& d, const SchemeConfig& c) { return step(s, d, c); },
      py::arg("state"), py::arg("disc"), py::arg("config"));
  mod.def("cfl_timestep", &cfl_timestep, py::arg("mesh"), py::arg("law"));

  py::class_<RunConfig>(mod, "RunConfig")
      .def_readwrite("steps", &RunConfig::steps)
      .def_property(
          "output_dir", [](const RunConfig& c) { return c.output.dir; },
          [](RunConfig& c, std::string d) { c.output.dir = std::move(d); })
      .def("serialize", &serialize_config);
  mod.def("parse_config", &parse_config, py::arg("path"));
  mod.def("parse_config_string", &parse_config_string, py::arg("text"));

  py::class_<RunSummary>(mod, "RunSummary")
      .def_readonly("steps", &RunSummary::steps)
      .def_readonly("final_residual", &RunSummary::final_residual)
      .def_readonly("max_residual", &RunSummary::max_residual)
      .def_readonly("vtk_files", &RunSummary::vtk_files)
      .def_readonly("csv_path", &RunSummary::csv_path)
      .def_readonly("final_state", &RunSummary::final_state);
  mod.def(
      "run_simulation", [](const RunConfig& c, const std::string& base) { return run_simulation(c, base); },
      py::arg("config"), py::arg("base_dir") = ".");

  py::class_<Fig1Report>(mod, "Fig1Report")
      .def_readonly("steps", &Fig1Report::steps)
      .def_readonly("rupture_step", &Fig1Report::rupture_step)
      .def_readonly("min_alpha", &Fig1Report::min_alpha)
      .def_readonly("band_height", &Fig1Report::band_height)
      .def_readonly("final_kinetic", &Fig1Report::final_kinetic)
      .def("passed", &Fig1Report::pass)
      .def("summary", &Fig1Report::summary);
  mod.def("fig1_config", &fig1_config);
  mod.def("run_fig1", &run_fig1, py::arg("config"), py::arg("out_dir") = "");
}
