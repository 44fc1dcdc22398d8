#include "pfd/simulation.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "pfd/energy.hpp"
#include "pfd/io.hpp"

namespace pfd {

namespace {

Eigen::VectorXd nodal_vector(const Mesh2D& mesh, const PolyExpr& fx, const PolyExpr& fy) {
  Eigen::VectorXd v(2 * mesh.num_nodes());
  for (int i = 0; i < mesh.num_nodes(); ++i) {
    const auto& p = mesh.nodes()[i];
    v[2 * i] = fx.eval({p.x(), p.y()});
    v[2 * i + 1] = fy.eval({p.x(), p.y()});
  }
  return v;
}

}  // namespace

Problem build_problem(const RunConfig& c, const std::string& base_dir) {
  Mesh2D mesh = build_mesh(c, base_dir);
  LoadProgram loads = build_loads(c, mesh);
  MaterialLaw law = build_material(c);
  law.validate();
  Discretization d(std::move(mesh), std::move(law), std::move(loads), c.material.alpha_eval, build_plastic(c));

  const Mesh2D& m = d.mesh();
  const InitialSpec& ic = c.initial;
  // Expressions with no terms (default) are stored without variables; fill them.
  auto expr_or = [](const PolyExpr& e, double v) {
    return e.vars().empty() ? PolyExpr::constant(v, {"x", "y"}) : e;
  };
  const Eigen::VectorXd u0 = nodal_vector(m, expr_or(ic.ux, 0.0), expr_or(ic.uy, 0.0));
  const Eigen::VectorXd v0 = nodal_vector(m, expr_or(ic.vx, 0.0), expr_or(ic.vy, 0.0));
  Eigen::VectorXd a0(m.num_nodes());
  const PolyExpr fa = expr_or(ic.alpha, 1.0);
  for (int i = 0; i < m.num_nodes(); ++i) {
    a0[i] = fa.eval({m.nodes()[i].x(), m.nodes()[i].y()});
    check_alpha(a0[i]);
  }
  const bool expl = c.scheme.scheme == SchemeKind::Explicit;
  SimState s0 = make_initial_state(d, u0, v0, a0, expl, c.scheme.lumped);
  return Problem{std::move(d), std::move(s0), c.scheme, c.steps};
}

RunSummary run_problem(const Problem& p, const OutputSpec& out, const StepObserver& observer) {
  RunSummary r;
  const bool files = !out.dir.empty();
  std::ofstream csv;
  if (files) {
    std::filesystem::create_directories(out.dir);
    r.csv_path = (std::filesystem::path(out.dir) / out.csv).string();
    csv.open(r.csv_path, std::ios::binary);
    if (!csv) throw IoError("cannot open '" + r.csv_path + "' for writing");
    csv << energy_csv_header() << "\n";
  }
  auto snapshot = [&](const SimState& s) {
    if (!files || !out.vtk) return;
    char name[64];
    std::snprintf(name, sizeof name, "_%06ld", s.step);
    const auto base = std::filesystem::path(out.dir) / (out.prefix + name);
    write_vtk(s, p.disc.mesh(), base.string() + ".vtk");
    write_snapshot(s, base.string() + ".snap");
    ++r.vtk_files;
  };

  SimState s = p.initial;
  const EnergyLedger initial = s.ledger;
  if (files) csv << energy_csv_row(s.t, s.ledger, 0.0) << "\n";
  snapshot(s);
  for (long k = 1; k <= p.steps; ++k) {
    StepReport rep;
    s = step(s, p.disc, p.scheme, &rep);
    const double res = balance_residual(s.ledger, initial);
    r.final_residual = res;
    r.max_residual = std::max(r.max_residual, res);
    if (files) csv << energy_csv_row(s.t, s.ledger, res) << "\n";
    if (k % out.cadence == 0 || k == p.steps) snapshot(s);
    if (observer) observer(s, rep);
  }
  r.steps = p.steps;
  r.final_state = std::move(s);
  return r;
}

RunSummary run_simulation(const RunConfig& c, const std::string& base_dir, const StepObserver& observer) {
  const Problem p = build_problem(c, base_dir);
  return run_problem(p, c.output, observer);
}

}  // namespace pfd
