#include "pfd/schemes.hpp"

#include <cmath>
#include <sstream>

#include "pfd/energy.hpp"
#include "pfd/plasticity.hpp"

namespace pfd {

namespace {

void check_state(const SimState& s, const Discretization& d) {
  const int n = d.mesh().num_nodes();
  if (s.u.size() != 2 * n || s.v.size() != 2 * n || s.alpha.size() != n)
    throw std::invalid_argument("state fields do not match the mesh");
  for (Eigen::Index i = 0; i < s.alpha.size(); ++i) check_alpha(s.alpha[i]);
}

bool lumped_for(const SchemeConfig& cfg) { return cfg.lumped || cfg.scheme == SchemeKind::Explicit; }

SimState finish(SimState ns, const Discretization& d, const SchemeConfig& cfg) {
  ns.t += cfg.tau;
  ns.step += 1;
  ns.ledger = energy_breakdown(ns, d, lumped_for(cfg));
  return ns;
}

}  // namespace

SimState make_initial_state(const Discretization& d, const Eigen::VectorXd& u0, const Eigen::VectorXd& v0,
                            const Eigen::VectorXd& alpha0, bool with_protostress, bool lumped_mass) {
  SimState s;
  s.u = u0;
  s.v = v0;
  s.alpha = alpha0;
  check_state(s, d);
  d.apply_constraints(s.u);
  d.apply_constraints(s.v);
  if (d.plastic()) s.pi.assign(d.mesh().num_triangles(), Sym2::Zero());
  if (with_protostress) {
    const IsoTensor C1 = scalar_degradation(d.law()).first;
    s.varsigma.resize(d.mesh().num_triangles());
    for (int e = 0; e < d.mesh().num_triangles(); ++e) s.varsigma[e] = C1.apply(d.strain(e, s.u));
  }
  s.ledger = energy_breakdown(s, d, with_protostress || lumped_mass);
  return s;
}

SimState step_staggered(const SimState& s, const Discretization& d, const SchemeConfig& cfg, StepReport* report) {
  cfg.validate();
  check_state(s, d);
  const double tau = cfg.tau;
  const SparseOperator& M = d.mass(cfg.lumped);
  const SparseOperator D = d.viscosity(s.alpha);
  const SparseOperator K = d.stiffness(s.alpha);
  const Eigen::VectorXd F = d.loads(s.t, s.t + tau);

  // (2M/tau^2 + D/tau + K/2) delta = F + 2 M v / tau - K u
  const SparseOperator A = (2.0 / (tau * tau)) * M + (1.0 / tau) * D + 0.5 * K;
  const Eigen::VectorXd rhs = F + (2.0 / tau) * (M * s.v) - K * s.u;
  const Eigen::VectorXd delta = solve_constrained(A, rhs, d, cfg);

  SimState ns = s;
  ns.u = s.u + delta;
  ns.v = (2.0 / tau) * delta - s.v;
  d.apply_constraints(ns.v);
  ns.ledger.dissipated_viscous += delta.dot(D * delta) / tau;
  ns.ledger.external_work += F.dot(delta);

  const DamageDrive drive = drive_from_displacement(d, ns.u, s.pi);
  const DamageStepResult dr = solve_damage_step(d, drive, s.alpha, DriveForm::Secant, tau, cfg.qp_tol);
  ns.alpha = dr.solution.alpha_new;
  ns.ledger.dissipated_damage += dr.dissipated;
  if (report) {
    report->inner_iterations = dr.outer_iterations;
    report->qp_iterations = dr.solution.iterations;
    report->kkt_residual = dr.solution.residual;
    report->reaction = dr.solution.multiplier;
  }
  return finish(std::move(ns), d, cfg);
}

double incremental_potential(const Eigen::VectorXd& u, const Eigen::VectorXd& alpha, const SimState& s,
                             const Discretization& d, const SchemeConfig& cfg) {
  const MaterialLaw& law = d.law();
  const double inf = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < alpha.size(); ++i) {
    if (alpha[i] < 0.0 || alpha[i] > 1.0) return inf;
    if (law.regime == Regime::Unidirectional && alpha[i] > s.alpha[i]) return inf;
  }
  const double tau = cfg.tau;
  const SparseOperator& M = d.mass(cfg.lumped);
  const Eigen::VectorXd w = u - s.u - tau * s.v;
  const Eigen::VectorXd du = u - s.u;
  const double inertia = w.dot(M * w) / (tau * tau);
  const double viscous = 0.5 * du.dot(d.viscosity(s.alpha) * du) / tau;
  const double stored = 0.5 * u.dot(d.stiffness(alpha) * u) + d.damage_potential_energy(alpha) +
                        damage_gradient_energy(d.mesh(), alpha, law.kappa, law.p_grad);
  double zeta = 0.0;
  const Eigen::VectorXd& m = d.nodal_area();
  for (Eigen::Index i = 0; i < alpha.size(); ++i) {
    const double da = alpha[i] - s.alpha[i];
    zeta += m[i] * (law.zeta_gc() * std::abs(da) + law.nu_visc * da * da / tau);
  }
  const Eigen::VectorXd F = d.loads(s.t, s.t + tau);
  return inertia + viscous + stored + zeta - F.dot(u);
}

SimState step_monolithic(const SimState& s, const Discretization& d, const SchemeConfig& cfg, StepReport* report) {
  cfg.validate();
  check_state(s, d);
  if (!s.pi.empty()) throw std::invalid_argument("the monolithic scheme does not support plasticity");
  const double tau = cfg.tau;
  const SparseOperator& M = d.mass(cfg.lumped);
  const SparseOperator D = d.viscosity(s.alpha);
  const Eigen::VectorXd F = d.loads(s.t, s.t + tau);
  const SparseOperator Mt = (2.0 / (tau * tau)) * M + (1.0 / tau) * D;
  const Eigen::VectorXd rhs = (2.0 / (tau * tau)) * (M * s.u) + (2.0 / tau) * (M * s.v) + (1.0 / tau) * (D * s.u) + F;
  const double rhs_scale = std::max(1.0, rhs.norm());

  Eigen::VectorXd u = s.u, alpha = s.alpha;
  std::vector<double> history{incremental_potential(u, alpha, s, d, cfg)};
  DamageStepResult dr;
  double resid = 0.0;
  int it = 0;
  for (;;) {
    ++it;
    const SparseOperator A = Mt + d.stiffness(alpha);
    u = solve_constrained(A, rhs, d, cfg);
    dr = solve_damage_step(d, drive_from_displacement(d, u, {}), s.alpha, DriveForm::Direct, tau, cfg.qp_tol);
    alpha = dr.solution.alpha_new;
    history.push_back(incremental_potential(u, alpha, s, d, cfg));

    // Mechanical residual at the new damage (the damage KKT residual is
    // already below qp_tol after the QP).
    Eigen::VectorXd r = (Mt + d.stiffness(alpha)) * u - rhs;
    d.apply_constraints(r);
    resid = r.norm() / rhs_scale;
    if (resid <= cfg.newton_tol) break;
    if (it >= cfg.max_inner_iters) {
      std::ostringstream os;
      os << "monolithic inner loop exceeded " << cfg.max_inner_iters << " iterations (residual " << resid << ")";
      throw SolverError(os.str());
    }
  }

  SimState ns = s;
  const Eigen::VectorXd du = u - s.u;
  ns.u = u;
  ns.v = (2.0 / tau) * du - s.v;
  d.apply_constraints(ns.v);
  ns.alpha = alpha;
  ns.ledger.dissipated_viscous += du.dot(D * du) / tau;
  ns.ledger.dissipated_damage += dr.dissipated;
  ns.ledger.external_work += F.dot(du);
  if (report) {
    report->inner_iterations = it;
    report->potential_history = history;
    report->kkt_residual = resid;
    report->qp_iterations = dr.solution.iterations;
    report->reaction = dr.solution.multiplier;
  }
  return finish(std::move(ns), d, cfg);
}

SimState step_explicit(const SimState& s, const Discretization& d, const SchemeConfig& cfg, StepReport* report) {
  cfg.validate();
  check_state(s, d);
  const int ne = d.mesh().num_triangles();
  if (s.varsigma.size() != static_cast<std::size_t>(ne))
    throw std::invalid_argument("explicit scheme: state has no proto-stress (initialise it as C1 e(u0))");
  if (!s.pi.empty()) throw std::invalid_argument("the explicit scheme does not support plasticity");
  const double tau = cfg.tau;
  const auto [C1, c] = scalar_degradation(d.law());
  const auto& geom = d.geometry();
  const auto& tris = d.mesh().triangles();

  SimState ns = s;
  // (1) proto-stress update
  for (int e = 0; e < ne; ++e) ns.varsigma[e] = s.varsigma[e] + tau * C1.apply(d.strain(e, s.v));

  // (2) damage with the secant of the degradation
  const DamageStepResult dr =
      solve_damage_step(d, drive_from_protostress(d, ns.varsigma), s.alpha, DriveForm::Secant, tau, cfg.qp_tol);
  ns.alpha = dr.solution.alpha_new;

  // (3) velocity update with the lumped mass
  const auto Dt = d.viscosity_tensors(s.alpha);
  Eigen::VectorXd fint = Eigen::VectorXd::Zero(d.num_dofs());
  for (int e = 0; e < ne; ++e) {
    double ce;
    const auto& tri = tris[e];
    if (d.evaluation() == AlphaEvaluation::ElementMean)
      ce = c((ns.alpha[tri[0]] + ns.alpha[tri[1]] + ns.alpha[tri[2]]) / 3.0);
    else
      ce = (c(ns.alpha[tri[0]]) + c(ns.alpha[tri[1]]) + c(ns.alpha[tri[2]])) / 3.0;
    const Sym2 sigma = ce * ns.varsigma[e] + Dt[e].apply(d.strain(e, s.v));
    const Eigen::Matrix<double, 6, 1> fe = geom[e].area * element_B(geom[e]).transpose() * stress_to_voigt(sigma);
    for (int a = 0; a < 6; ++a) fint[2 * tri[a / 2] + a % 2] += fe[a];
  }
  const Eigen::VectorXd F = d.loads(s.t, s.t + tau);
  const SparseOperator& ML = d.mass(true);
  const Eigen::VectorXd mdiag = ML.diagonal();
  ns.v = s.v + tau * ((F - fint).array() / mdiag.array()).matrix();
  d.apply_constraints(ns.v);
  ns.u = s.u + tau * s.v;

  ns.ledger.dissipated_viscous += tau * s.v.dot(d.viscosity(s.alpha) * s.v);
  ns.ledger.dissipated_damage += dr.dissipated;
  ns.ledger.external_work += 0.5 * tau * F.dot(s.v + ns.v);
  if (report) {
    report->inner_iterations = dr.outer_iterations;
    report->qp_iterations = dr.solution.iterations;
    report->kkt_residual = dr.solution.residual;
    report->reaction = dr.solution.multiplier;
  }
  return finish(std::move(ns), d, cfg);
}

SimState step(const SimState& s, const Discretization& d, const SchemeConfig& cfg, StepReport* report) {
  switch (cfg.scheme) {
    case SchemeKind::Staggered:
      return d.plastic() ? step_staggered_plastic(s, d, cfg, report) : step_staggered(s, d, cfg, report);
    case SchemeKind::Monolithic: return step_monolithic(s, d, cfg, report);
    case SchemeKind::Explicit: return step_explicit(s, d, cfg, report);
  }
  throw std::invalid_argument("unknown scheme");
}

double cfl_timestep(const Mesh2D& mesh, const MaterialLaw& law) {
  double h = std::numeric_limits<double>::infinity();
  for (const auto& g : element_shape_gradients(mesh)) h = std::min(h, 2.0 * g.inradius);
  const double cp = std::sqrt((law.K_fun(1.0) + law.G_fun(1.0)) / law.rho);
  return h / cp;
}

SimState step_leapfrog_reference(const SimState& s, const Discretization& d, const SchemeConfig& cfg) {
  const double tau = cfg.tau;
  const SparseOperator K = d.stiffness(s.alpha);
  const Eigen::VectorXd m = d.mass(true).diagonal();
  auto accel = [&](const Eigen::VectorXd& u, double t) {
    Eigen::VectorXd f = -(K * u);
    if (!d.loads().empty()) f += assemble_loads_at(d.mesh(), d.loads(), t);
    Eigen::VectorXd a = (f.array() / m.array()).matrix();
    d.apply_constraints(a);
    return a;
  };
  SimState ns = s;
  const Eigen::VectorXd a0 = accel(s.u, s.t);
  ns.u = s.u + tau * s.v + 0.5 * tau * tau * a0;
  ns.v = s.v + 0.5 * tau * (a0 + accel(ns.u, s.t + tau));
  ns.t += tau;
  ns.step += 1;
  ns.ledger = energy_breakdown(ns, d, true);
  return ns;
}

}  // namespace pfd
