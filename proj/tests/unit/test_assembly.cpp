#include <gtest/gtest.h>

#include <random>

#include "pfd/assembly.hpp"

using namespace pfd;

namespace {

MaterialLaw linear_law(double K0 = 2.0, double G0 = 1.0) {
  MaterialLaw law;
  law.kind = LawKind::LinearDamage;
  law.K_fun = Polynomial{0.0, K0};
  law.G_fun = Polynomial{0.0, G0};
  law.kappa = 1.0;
  return law;
}

// Perturbed structured mesh (interior nodes jittered), reproducible per seed.
Mesh2D random_mesh(unsigned seed, int nx = 5, int ny = 4) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> j(-0.15, 0.15);
  const double Lx = 1.3, Ly = 0.9;
  const Mesh2D base = generate_rect_mesh(nx, ny, Lx, Ly);
  auto nodes = base.nodes();
  for (auto& p : nodes)
    if (p.x() > 1e-12 && p.x() < Lx - 1e-12 && p.y() > 1e-12 && p.y() < Ly - 1e-12)
      p += Eigen::Vector2d(j(rng) * Lx / nx, j(rng) * Ly / ny);
  return Mesh2D(nodes, base.triangles(), base.regions(), base.boundary_edges(), base.tags());
}

double rel_asym(const SparseOperator& A) {
  const Eigen::MatrixXd D(A);
  return (D - D.transpose()).norm() / std::max(1e-300, D.norm());
}

Mesh2D unit_triangle() { return Mesh2D({{0, 0}, {1, 0}, {0, 1}}, {{0, 1, 2}}, {0}, {}, {}); }

}  // namespace

TEST(Mass, TotalAndLumping) {
  const Mesh2D tri = unit_triangle();
  const SparseOperator M = assemble_mass(tri, 1.0, false);
  Eigen::VectorXd onesx(6);
  onesx << 1, 0, 1, 0, 1, 0;
  EXPECT_NEAR(onesx.dot(M * onesx), 0.5, 1e-15);

  const Mesh2D m = random_mesh(1);
  const SparseOperator Mc = assemble_mass(m, 2.5, false), Ml = assemble_mass(m, 2.5, true);
  const Eigen::VectorXd rows = Eigen::MatrixXd(Mc).rowwise().sum();
  const Eigen::VectorXd diag = Eigen::MatrixXd(Ml).diagonal();
  EXPECT_LE((rows - diag).norm(), 1e-14 * diag.norm());
  EXPECT_NEAR(rows.sum() / 2.0, 2.5 * m.total_area(), 1e-13);
  EXPECT_EQ(Ml.nonZeros(), Ml.rows());
  EXPECT_LE(rel_asym(Mc), 1e-12);
}

TEST(Mass, UniformVelocityKineticEnergy) {
  const Mesh2D m = random_mesh(2);
  const Eigen::Vector2d v0(0.7, -1.3);
  Eigen::VectorXd v(2 * m.num_nodes());
  for (int i = 0; i < m.num_nodes(); ++i) v.segment<2>(2 * i) = v0;
  for (bool lumped : {false, true}) {
    const SparseOperator M = assemble_mass(m, 3.0, lumped);
    EXPECT_NEAR(0.5 * v.dot(M * v), 0.5 * 3.0 * m.total_area() * v0.squaredNorm(), 1e-12);
  }
}

TEST(Stiffness, PatchTestConstantStress) {
  const Mesh2D m = random_mesh(3);
  const MaterialLaw law = linear_law();
  const Eigen::VectorXd alpha = Eigen::VectorXd::Ones(m.num_nodes());
  const SparseOperator K = assemble_stiffness(m, alpha, law);
  // u = A x, affine; interior nodal forces vanish, strain constant.
  Eigen::Matrix2d A;
  A << 0.01, 0.02, -0.005, 0.03;
  Eigen::VectorXd u(2 * m.num_nodes());
  for (int i = 0; i < m.num_nodes(); ++i) u.segment<2>(2 * i) = A * m.nodes()[i];
  const Eigen::VectorXd f = K * u;
  const auto geom = element_shape_gradients(m);
  const Sym2 e_exact = 0.5 * (A + A.transpose());
  for (int e = 0; e < m.num_triangles(); ++e)
    EXPECT_LE((element_strain(geom[e], m.triangles()[e], u) - e_exact).norm(), 1e-14);
  // Nodal forces on interior nodes cancel.
  std::vector<bool> boundary(m.num_nodes(), false);
  for (const auto& be : m.boundary_edges()) boundary[be.a] = boundary[be.b] = true;
  for (int i = 0; i < m.num_nodes(); ++i)
    if (!boundary[i]) EXPECT_LE(f.segment<2>(2 * i).norm(), 1e-13);
}

TEST(Stiffness, RigidModesInKernel) {
  const Mesh2D m = random_mesh(4);
  const SparseOperator K = assemble_stiffness(m, Eigen::VectorXd::Ones(m.num_nodes()), linear_law());
  const double scale = Eigen::MatrixXd(K).norm();
  Eigen::VectorXd tx(2 * m.num_nodes()), ty(2 * m.num_nodes()), rot(2 * m.num_nodes());
  for (int i = 0; i < m.num_nodes(); ++i) {
    tx.segment<2>(2 * i) << 1, 0;
    ty.segment<2>(2 * i) << 0, 1;
    rot.segment<2>(2 * i) << -m.nodes()[i].y(), m.nodes()[i].x();
  }
  for (const auto* r : {&tx, &ty, &rot}) EXPECT_LE((K * *r).norm(), 1e-10 * scale * r->norm());
  EXPECT_LE(rel_asym(K), 1e-12);
}

TEST(Stiffness, CompleteDamageGivesZeroOperator) {
  const Mesh2D m = random_mesh(5);
  const SparseOperator K = assemble_stiffness(m, Eigen::VectorXd::Zero(m.num_nodes()), linear_law());
  EXPECT_EQ(Eigen::MatrixXd(K).norm(), 0.0);
}

TEST(Stiffness, QuadraticFormMatchesElementQuadrature) {
  MaterialLaw law = linear_law(3.0, 1.5);
  law.K_fun = Polynomial{0.01, 0.0, 3.0};
  law.G_fun = Polynomial{0.01, 1.0, 0.5};
  std::uniform_real_distribution<double> ua(0.0, 1.0);
  std::normal_distribution<double> nu(0.0, 1.0);
  for (unsigned seed = 0; seed < 10; ++seed) {
    std::mt19937 rng(100 + seed);
    const Mesh2D m = random_mesh(seed);
    const auto geom = element_shape_gradients(m);
    Eigen::VectorXd alpha(m.num_nodes()), u(2 * m.num_nodes());
    for (auto& a : alpha) a = ua(rng);
    for (auto& x : u) x = nu(rng);
    for (AlphaEvaluation ev : {AlphaEvaluation::ElementMean, AlphaEvaluation::NodalMidpoint}) {
      const SparseOperator K = assemble_stiffness(m, alpha, law, ev);
      double oracle = 0.0;
      for (int e = 0; e < m.num_triangles(); ++e) {
        const auto& t = m.triangles()[e];
        const Sym2 eps = element_strain(geom[e], t, u);
        auto phi_el = [&](double a) {
          const double tr = eps.trace();
          const Sym2 d = eps - 0.5 * tr * Sym2::Identity();
          return 0.5 * law.K_fun(a) * tr * tr + law.G_fun(a) * (d.array() * d.array()).sum();
        };
        if (ev == AlphaEvaluation::ElementMean)
          oracle += geom[e].area * phi_el((alpha[t[0]] + alpha[t[1]] + alpha[t[2]]) / 3.0);
        else
          oracle += geom[e].area * (phi_el(alpha[t[0]]) + phi_el(alpha[t[1]]) + phi_el(alpha[t[2]])) / 3.0;
      }
      EXPECT_NEAR(u.dot(K * u), 2.0 * oracle, 1e-12 * 2.0 * oracle);
      EXPECT_LE(rel_asym(K), 1e-12);
    }
  }
}

TEST(Viscosity, D0AndChi) {
  const Mesh2D m = random_mesh(6);
  const Eigen::VectorXd ones = Eigen::VectorXd::Ones(m.num_nodes());
  MaterialLaw law = linear_law();
  law.D0 = {0.3, 0.2};
  law.chi = 0.0;
  MaterialLaw d0_as_law = linear_law();
  d0_as_law.K_fun = Polynomial{0.3};
  d0_as_law.G_fun = Polynomial{0.2};
  const Eigen::MatrixXd Dref(assemble_stiffness(m, ones, d0_as_law));
  EXPECT_LE((Eigen::MatrixXd(assemble_viscosity(m, ones, law)) - Dref).norm(), 1e-14 * Dref.norm());
  law.chi = 1.0;
  const Eigen::MatrixXd Ksum = Dref + Eigen::MatrixXd(assemble_stiffness(m, ones, law));
  EXPECT_LE((Eigen::MatrixXd(assemble_viscosity(m, ones, law)) - Ksum).norm(), 1e-14 * Ksum.norm());
}

TEST(DamageGradient, AffineEnergies) {
  const Mesh2D m = generate_rect_mesh(3, 3, 1.0, 1.0);
  Eigen::VectorXd alpha(m.num_nodes());
  for (int i = 0; i < m.num_nodes(); ++i) alpha[i] = m.nodes()[i].x();
  EXPECT_NEAR(damage_gradient_energy(m, alpha, 2.0, 2.0), 1.0, 1e-14);
  EXPECT_NEAR(damage_gradient_energy(m, alpha, 2.0, 4.0), 0.5, 1e-14);
  // p = 2: quadratic form of the operator equals twice the energy.
  const SparseOperator L = assemble_damage_gradient(m, alpha, 2.0, 2.0);
  EXPECT_NEAR(alpha.dot(L * alpha), 2.0, 1e-13);
  const Eigen::VectorXd c = Eigen::VectorXd::Constant(m.num_nodes(), 0.4);
  EXPECT_EQ(damage_gradient_energy(m, c, 2.0, 3.0), 0.0);
  EXPECT_LE(damage_gradient_residual(m, c, 2.0, 3.0).norm(), 1e-15);
}

TEST(DamageGradient, ResidualIsEnergyDerivative) {
  const Mesh2D m = random_mesh(7);
  std::mt19937 rng(9);
  std::uniform_real_distribution<double> ua(0.0, 1.0);
  Eigen::VectorXd alpha(m.num_nodes());
  for (auto& a : alpha) a = ua(rng);
  for (double p : {2.0, 3.0, 4.0}) {
    const Eigen::VectorXd r = damage_gradient_residual(m, alpha, 0.7, p);
    for (int i : {0, 5, 11}) {
      Eigen::VectorXd ap = alpha, am = alpha;
      const double h = 1e-6;
      ap[i] += h;
      am[i] -= h;
      const double fd = (damage_gradient_energy(m, ap, 0.7, p) - damage_gradient_energy(m, am, 0.7, p)) / (2 * h);
      EXPECT_NEAR(r[i], fd, 1e-6 * std::max(1.0, std::abs(fd))) << "p=" << p;
    }
  }
}

TEST(Loads, TractionTrapezoidAndTimeAverage) {
  const Mesh2D m = generate_rect_mesh(1, 1, 2.0, 1.0);  // top edge length 2
  LoadProgram lp;
  lp.traction.push_back({"top", Eigen::Vector2d(0.0, 3.0), TimeFunction::constant(1.0)});
  const FieldVector f = assemble_loads(m, lp, 0.0, 1.0);
  EXPECT_NEAR(f.sum(), 6.0, 1e-14);
  for (int i = 0; i < m.num_nodes(); ++i) {
    const double expected = m.nodes()[i].y() == 1.0 ? 3.0 : 0.0;  // g L / 2 per edge node
    EXPECT_NEAR(f[2 * i + 1], expected, 1e-14);
    EXPECT_EQ(f[2 * i], 0.0);
  }
  // f(t) = t averaged over [0, 2] is 1.
  LoadProgram lt;
  lt.traction.push_back({"top", Eigen::Vector2d(0.0, 3.0), TimeFunction::polynomial(Polynomial{0.0, 1.0})});
  EXPECT_LE((assemble_loads(m, lt, 0.0, 2.0) - f).norm(), 1e-14);
  EXPECT_EQ(assemble_loads(m, LoadProgram{}, 0.0, 1.0).norm(), 0.0);
  LoadProgram bad;
  bad.traction.push_back({"nowhere", Eigen::Vector2d(1.0, 0.0), TimeFunction::constant(1.0)});
  EXPECT_ANY_THROW(assemble_loads(m, bad, 0.0, 1.0));
}

TEST(Loads, BodyForceOnePoint) {
  const Mesh2D m = random_mesh(8);
  LoadProgram lp;
  lp.body.push_back({Eigen::Vector2d(2.0, -1.0), TimeFunction::constant(1.0)});
  const FieldVector f = assemble_loads(m, lp, 0.0, 0.5);
  double fx = 0, fy = 0;
  for (int i = 0; i < m.num_nodes(); ++i) {
    fx += f[2 * i];
    fy += f[2 * i + 1];
  }
  EXPECT_NEAR(fx, 2.0 * m.total_area(), 1e-13);
  EXPECT_NEAR(fy, -m.total_area(), 1e-13);
}

TEST(TimeFunction, ScheduleAverageExact) {
  const TimeFunction s = TimeFunction::schedule({{0.0, 0.0}, {1.0, 2.0}, {3.0, 2.0}});
  EXPECT_DOUBLE_EQ(s(0.5), 1.0);
  EXPECT_DOUBLE_EQ(s(10.0), 2.0);
  EXPECT_DOUBLE_EQ(s(-1.0), 0.0);
  // Integral over [0.5, 2]: 0.75*... ramp part 0.5->1 avg 1.5 * 0.5, flat 2 * 1.
  EXPECT_NEAR(s.average(0.5, 2.0), (1.5 * 0.5 + 2.0 * 1.0) / 1.5, 1e-15);
  EXPECT_THROW(TimeFunction::schedule({{1.0, 0.0}, {1.0, 1.0}}), std::invalid_argument);
}
