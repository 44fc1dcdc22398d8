#include <gtest/gtest.h>

#include <random>

#include "pfd/energy.hpp"
#include "pfd/schemes.hpp"

using namespace pfd;

namespace {

// Moduli independent of alpha and no damage energy: alpha never moves.
MaterialLaw frozen_law(double rho = 1.0) {
  MaterialLaw law;
  law.kind = LawKind::LinearDamage;
  law.rho = rho;
  law.K_fun = Polynomial{2.0};
  law.G_fun = Polynomial{1.0};
  law.kappa = 1.0;
  return law;
}

MaterialLaw damaging_law() {
  MaterialLaw law;
  law.kind = LawKind::LinearDamage;
  law.K_fun = Polynomial{0.0, 2.0};
  law.G_fun = Polynomial{0.0, 1.0};
  law.gc = 2e-3;
  law.kappa = 1e-3;
  law.nu_visc = 1e-3;
  law.chi = 0.01;
  return law;
}

Eigen::VectorXd bump(const Mesh2D& m, double amp) {
  Eigen::VectorXd u(2 * m.num_nodes());
  for (int i = 0; i < m.num_nodes(); ++i) {
    const double x = m.nodes()[i].x(), y = m.nodes()[i].y();
    u[2 * i] = amp * x * (1 - x) * y;
    u[2 * i + 1] = amp * 0.5 * x * y * (1 - y);
  }
  return u;
}

SchemeConfig config(SchemeKind k, double tau) {
  SchemeConfig c;
  c.scheme = k;
  c.tau = tau;
  return c;
}

}  // namespace

TEST(Staggered, RestStateIsFixedPoint) {
  const Mesh2D m = generate_rect_mesh(3, 3, 1.0, 1.0);
  const Discretization d(m, make_phase_field_law(LawKind::AT2, 1.0, {1.0, 1.0}, 1.0, 0.5, 1.0));
  const Eigen::VectorXd z = Eigen::VectorXd::Zero(d.num_dofs());
  const SimState s0 = make_initial_state(d, z, z, Eigen::VectorXd::Ones(m.num_nodes()));
  for (double tau : {1e-4, 0.1, 10.0}) {
    const SimState s1 = step_staggered(s0, d, config(SchemeKind::Staggered, tau));
    EXPECT_LE(s1.u.norm() + s1.v.norm(), 1e-300);
    EXPECT_EQ(s1.alpha, s0.alpha);
  }
}

TEST(Staggered, CrankNicolsonConservesEnergy) {
  const Mesh2D m = generate_rect_mesh(4, 4, 1.0, 1.0);
  const Discretization d(m.with_tag_kind("left", BoundaryKind::Fixed), frozen_law());
  const SimState s0 = make_initial_state(d, bump(m, 0.1), Eigen::VectorXd::Zero(2 * m.num_nodes()),
                                         Eigen::VectorXd::Ones(m.num_nodes()));
  const SchemeConfig cfg = config(SchemeKind::Staggered, 0.05);
  SimState s = s0;
  for (int k = 0; k < 100; ++k) s = step_staggered(s, d, cfg);
  EXPECT_GT(s.ledger.kinetic, 0.0);
  EXPECT_NEAR(s.ledger.total_energy(), s0.ledger.total_energy(), 1e-10 * s0.ledger.total_energy());
}

TEST(Staggered, SingleStepEnergyIdentityWithTraction) {
  const Mesh2D m = generate_rect_mesh(1, 1, 1.0, 1.0).with_tag_kind("bottom", BoundaryKind::Fixed);
  LoadProgram lp;
  lp.traction.push_back({"top", Eigen::Vector2d(0.3, 0.5), TimeFunction::polynomial(Polynomial{0.0, 1.0})});
  MaterialLaw law = damaging_law();
  law.gc = 1e-3;
  const Discretization d(m, law, lp);
  const Eigen::VectorXd z = Eigen::VectorXd::Zero(d.num_dofs());
  const SimState s0 = make_initial_state(d, z, z, Eigen::VectorXd::Ones(m.num_nodes()));
  SchemeConfig cfg = config(SchemeKind::Staggered, 0.1);
  SimState s = s0;
  for (int k = 0; k < 10; ++k) {
    s = step_staggered(s, d, cfg);
    EXPECT_LE(balance_residual(s.ledger, s0.ledger), 1e-12) << "step " << k + 1;
  }
  EXPECT_GT(s.ledger.external_work, 0.0);
}

TEST(Staggered, DamageMonotoneUnderUnidirectionalRegime) {
  const Mesh2D m = generate_rect_mesh(6, 6, 1.0, 1.0).with_tag_kind("left", BoundaryKind::Fixed);
  LoadProgram lp;
  lp.traction.push_back({"right", Eigen::Vector2d(0.2, 0.1), TimeFunction::constant(1.0)});
  const Discretization d(m, damaging_law(), lp);
  const Eigen::VectorXd z = Eigen::VectorXd::Zero(d.num_dofs());
  SimState s = make_initial_state(d, z, z, Eigen::VectorXd::Ones(m.num_nodes()));
  const SimState s0 = s;
  const SchemeConfig cfg = config(SchemeKind::Staggered, 0.05);
  for (int k = 0; k < 40; ++k) {
    const SimState n = step_staggered(s, d, cfg);
    EXPECT_TRUE((n.alpha.array() <= s.alpha.array()).all());
    EXPECT_GE(n.alpha.minCoeff(), 0.0);
    EXPECT_LE(balance_residual(n.ledger, s0.ledger), 1e-10);
    s = n;
  }
  EXPECT_LT(s.alpha.minCoeff(), 1.0);
}

TEST(Monolithic, RestStateOneInnerIteration) {
  const Mesh2D m = generate_rect_mesh(2, 2, 1.0, 1.0);
  const Discretization d(m, damaging_law());
  const Eigen::VectorXd z = Eigen::VectorXd::Zero(d.num_dofs());
  const SimState s0 = make_initial_state(d, z, z, Eigen::VectorXd::Ones(m.num_nodes()));
  StepReport rep;
  const SimState s1 = step_monolithic(s0, d, config(SchemeKind::Monolithic, 0.1), &rep);
  EXPECT_EQ(rep.inner_iterations, 1);
  EXPECT_EQ(s1.u.norm(), 0.0);
  EXPECT_EQ(s1.alpha, s0.alpha);
}

TEST(Monolithic, PotentialNonIncreasingAcrossInnerIterations) {
  const Mesh2D m = generate_rect_mesh(4, 4, 1.0, 1.0).with_tag_kind("left", BoundaryKind::Fixed);
  LoadProgram lp;
  lp.traction.push_back({"right", Eigen::Vector2d(0.25, 0.0), TimeFunction::constant(1.0)});
  const Discretization d(m, damaging_law(), lp);
  const Eigen::VectorXd z = Eigen::VectorXd::Zero(d.num_dofs());
  SimState s = make_initial_state(d, z, z, Eigen::VectorXd::Ones(m.num_nodes()));
  const SchemeConfig cfg = config(SchemeKind::Monolithic, 0.05);
  int multi = 0;
  for (int k = 0; k < 30; ++k) {
    StepReport rep;
    const SimState n = step_monolithic(s, d, cfg, &rep);
    for (std::size_t i = 1; i < rep.potential_history.size(); ++i)
      EXPECT_LE(rep.potential_history[i], rep.potential_history[i - 1] + 1e-12 * std::abs(rep.potential_history[i - 1]))
          << "step " << k << " iteration " << i;
    multi += rep.inner_iterations > 1;
    EXPECT_TRUE((n.alpha.array() <= s.alpha.array()).all());
    s = n;
  }
  EXPECT_GT(multi, 0);
}

TEST(IncrementalPotential, PreviousStateGivesStoredEnergy) {
  const Mesh2D m = generate_rect_mesh(3, 2, 1.0, 1.0);
  const Discretization d(m, make_phase_field_law(LawKind::AT2, 1.0, {1.0, 1.0}, 1.0, 0.5, 1.0));
  Eigen::VectorXd a(m.num_nodes());
  for (int i = 0; i < m.num_nodes(); ++i) a[i] = 0.5 + 0.5 * m.nodes()[i].x();
  const SimState s = make_initial_state(d, bump(m, 0.2), Eigen::VectorXd::Zero(d.num_dofs()), a);
  const SchemeConfig cfg = config(SchemeKind::Monolithic, 0.1);
  const double stored = s.ledger.stored_elastic + s.ledger.stored_damage;
  EXPECT_NEAR(incremental_potential(s.u, s.alpha, s, d, cfg), stored, 1e-14 * std::abs(stored));
  Eigen::VectorXd up = a;
  up[0] = std::min(1.0, a[0] + 0.1);
  EXPECT_TRUE(std::isinf(incremental_potential(s.u, up, s, d, cfg)));
}

TEST(IncrementalPotential, DisplacementSolveIsStationary) {
  const Mesh2D m = generate_rect_mesh(3, 3, 1.0, 1.0).with_tag_kind("bottom", BoundaryKind::Fixed);
  const Discretization d(m, frozen_law());
  const SimState s =
      make_initial_state(d, bump(m, 0.1), bump(m, 0.3), Eigen::VectorXd::Ones(m.num_nodes()));
  const SchemeConfig cfg = config(SchemeKind::Monolithic, 0.1);
  const SimState n = step_monolithic(s, d, cfg);
  std::mt19937 rng(1);
  std::normal_distribution<double> g(0.0, 1.0);
  Eigen::VectorXd w(d.num_dofs());
  for (auto& x : w) x = g(rng);
  d.apply_constraints(w);
  const double h = 1e-4;
  const double p0 = incremental_potential(n.u, n.alpha, s, d, cfg);
  const double pp = incremental_potential(n.u + h * w, n.alpha, s, d, cfg);
  const double pm = incremental_potential(n.u - h * w, n.alpha, s, d, cfg);
  // Quadratic in u: central difference is exact up to round-off.
  EXPECT_LE(std::abs(pp - pm) / (2 * h), 1e-10 * std::max(1.0, std::abs(p0)) / h * 1e-4 + 1e-9);
  EXPECT_GT(pp, p0);
  EXPECT_GT(pm, p0);
}

TEST(Explicit, RestStateUnchanged) {
  const Mesh2D m = generate_rect_mesh(3, 3, 1.0, 1.0);
  const Discretization d(m, make_phase_field_law(LawKind::AT2, 1.0, {1.0, 1.0}, 1.0, 0.5, 1.0));
  const Eigen::VectorXd z = Eigen::VectorXd::Zero(d.num_dofs());
  const SimState s0 = make_initial_state(d, z, z, Eigen::VectorXd::Ones(m.num_nodes()), true);
  const SimState s1 = step_explicit(s0, d, config(SchemeKind::Explicit, 1e-3));
  EXPECT_EQ(s1.u.norm() + s1.v.norm(), 0.0);
  EXPECT_EQ(s1.alpha, s0.alpha);
}

TEST(Explicit, MissingProtostressRejected) {
  const Mesh2D m = generate_rect_mesh(2, 2, 1.0, 1.0);
  const Discretization d(m, make_phase_field_law(LawKind::AT2, 1.0, {1.0, 1.0}, 1.0, 0.5, 1.0));
  const Eigen::VectorXd z = Eigen::VectorXd::Zero(d.num_dofs());
  const SimState s0 = make_initial_state(d, z, z, Eigen::VectorXd::Ones(m.num_nodes()), false);
  EXPECT_THROW(step_explicit(s0, d, config(SchemeKind::Explicit, 1e-3)), std::invalid_argument);
}

TEST(Cfl, ScalesWithMeshAndDensity) {
  const MaterialLaw law = frozen_law(1.0);
  const double b1 = cfl_timestep(generate_rect_mesh(4, 4, 1.0, 1.0), law);
  const double b2 = cfl_timestep(generate_rect_mesh(8, 8, 1.0, 1.0), law);
  EXPECT_NEAR(b2, 0.5 * b1, 1e-15);
  EXPECT_NEAR(cfl_timestep(generate_rect_mesh(4, 4, 1.0, 1.0), frozen_law(4.0)), 2.0 * b1, 1e-15);
  // h / c_P with h = 2 inradius of the right isosceles triangle of leg 1/4.
  const double h = (2.0 - std::sqrt(2.0)) / 4.0;
  EXPECT_NEAR(b1, h / std::sqrt(3.0), 1e-15);
}

TEST(SchemeConfig, Validation) {
  SchemeConfig c;
  EXPECT_THROW(c.validate(), std::invalid_argument);  // tau = 0
  c.tau = 0.1;
  EXPECT_NO_THROW(c.validate());
  c.cfl_safety = 1.5;
  EXPECT_THROW(c.validate(), std::invalid_argument);
  c.cfl_safety = 0.5;
  c.qp_tol = 0.0;
  EXPECT_THROW(c.validate(), std::invalid_argument);
}

TEST(LinearSolver, ConjugateGradientMatchesDirect) {
  const Mesh2D m = generate_rect_mesh(4, 4, 1.0, 1.0).with_tag_kind("left", BoundaryKind::Fixed);
  const Discretization d(m, frozen_law());
  const SimState s0 = make_initial_state(d, bump(m, 0.1), Eigen::VectorXd::Zero(2 * m.num_nodes()),
                                         Eigen::VectorXd::Ones(m.num_nodes()));
  SchemeConfig a = config(SchemeKind::Staggered, 0.05), b = a;
  b.linear_solver = LinearSolverKind::CG;
  const SimState sa = step_staggered(s0, d, a), sb = step_staggered(s0, d, b);
  EXPECT_LE((sa.u - sb.u).norm(), 1e-10 * sa.u.norm());
}
