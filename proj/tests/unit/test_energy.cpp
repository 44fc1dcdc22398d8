#include <gtest/gtest.h>

#include <cmath>
#include <fstream>
#include <sstream>

#include "pfd/energy.hpp"
#include "pfd/schemes.hpp"

using namespace pfd;

namespace {

EnergyLedger sample_ledger() {
  EnergyLedger l;
  l.kinetic = 1.0;
  l.stored_elastic = 2.0;
  l.stored_damage = 0.5;
  l.stored_plastic = 0.25;
  return l;
}

}  // namespace

TEST(Balance, ZeroForIdenticalLedgers) {
  const EnergyLedger l = sample_ledger();
  EXPECT_EQ(balance_residual(l, l), 0.0);
}

TEST(Balance, AccountsForDissipationAndWork) {
  const EnergyLedger l0 = sample_ledger();
  EnergyLedger l1 = l0;
  l1.kinetic -= 0.3;
  l1.dissipated_viscous = 0.1;
  l1.dissipated_damage = 0.15;
  l1.dissipated_plastic = 0.05;
  EXPECT_NEAR(balance_residual(l1, l0), 0.0, 1e-15);
  l1.external_work = 1.0;
  l1.stored_elastic += 1.0;
  EXPECT_NEAR(balance_residual(l1, l0), 0.0, 1e-15);
  l1.stored_elastic += 0.5;
  // Scaled by max(1, |RHS|) with RHS = 3.75 + 1.
  EXPECT_NEAR(balance_residual(l1, l0), 0.5 / 4.75, 1e-15);
}

TEST(Balance, RejectsDecreasingDissipation) {
  EnergyLedger l0 = sample_ledger();
  l0.dissipated_damage = 1.0;
  EnergyLedger l1 = l0;
  l1.dissipated_damage = 0.5;
  EXPECT_THROW(balance_residual(l1, l0), std::invalid_argument);
}

TEST(Breakdown, KineticAndElasticMatchClosedForms) {
  const Mesh2D m = generate_rect_mesh(2, 3, 2.0, 3.0);
  const MaterialLaw law = make_phase_field_law(LawKind::AT2, 2.0, {3.0, 1.5}, 1.0, 0.5, 1.0);
  const Discretization d(m, law);
  // Uniform velocity (1, 2) and uniform strain exx = 0.01.
  Eigen::VectorXd u(d.num_dofs()), v(d.num_dofs());
  for (int i = 0; i < m.num_nodes(); ++i) {
    u[2 * i] = 0.01 * m.nodes()[i].x();
    u[2 * i + 1] = 0.0;
    v[2 * i] = 1.0;
    v[2 * i + 1] = 2.0;
  }
  const SimState s = make_initial_state(d, u, v, Eigen::VectorXd::Ones(m.num_nodes()));
  const double area = 6.0;
  EXPECT_NEAR(s.ledger.kinetic, 0.5 * 2.0 * 5.0 * area, 1e-12);
  // C(1) = (0.25 + 1) C1; energy 1/2 (K tr^2 + 2G |dev|^2) per unit volume.
  const double K = 1.25 * 3.0, G = 1.25 * 1.5, tr = 0.01, dev2 = 2 * 0.005 * 0.005;
  EXPECT_NEAR(s.ledger.stored_elastic, 0.5 * (K * tr * tr + 2 * G * dev2) * area, 1e-14);
  EXPECT_NEAR(s.ledger.stored_damage, 0.0, 1e-15);
  const SimState lumped = make_initial_state(d, u, v, Eigen::VectorXd::Ones(m.num_nodes()), false, true);
  EXPECT_NEAR(lumped.ledger.kinetic, s.ledger.kinetic, 1e-12);
}

TEST(Breakdown, DamageEnergyOfUniformField) {
  const Mesh2D m = generate_rect_mesh(2, 2, 1.0, 1.0);
  const double gc = 0.8, eps = 0.2;
  const Discretization d(m, make_phase_field_law(LawKind::AT2, 1.0, {1.0, 1.0}, gc, eps, 1.0));
  const Eigen::VectorXd z = Eigen::VectorXd::Zero(d.num_dofs());
  const SimState s = make_initial_state(d, z, z, Eigen::VectorXd::Constant(m.num_nodes(), 0.5));
  EXPECT_NEAR(s.ledger.stored_damage, gc * 0.25 / (2 * eps), 1e-14);
}

TEST(Csv, RowRoundTrip) {
  EnergyLedger l = sample_ledger();
  l.dissipated_damage = 1.0 / 3.0;
  l.external_work = 1e-300;
  std::stringstream ss;
  ss << energy_csv_header() << "\n" << energy_csv_row(0.1, l, 2.5e-17) << "\n";
  const auto rows = read_energy_csv(ss);
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_EQ(rows[0].t, 0.1);
  EXPECT_EQ(rows[0].ledger.dissipated_damage, l.dissipated_damage);
  EXPECT_EQ(rows[0].ledger.external_work, l.external_work);
  EXPECT_EQ(rows[0].residual, 2.5e-17);
}

TEST(Csv, MalformedCellNamesLine) {
  std::ifstream in(std::string(PFD_TEST_DATA) + "/corrupted_energy.csv");
  ASSERT_TRUE(in);
  try {
    read_energy_csv(in);
    FAIL() << "expected an error";
  } catch (const std::runtime_error& e) {
    EXPECT_NE(std::string(e.what()).find("line"), std::string::npos) << e.what();
  }
}

TEST(Csv, RecomputedResidualDetectsImbalance) {
  std::ifstream in(std::string(PFD_TEST_DATA) + "/unbalanced_energy.csv");
  ASSERT_TRUE(in);
  const auto rows = read_energy_csv(in);
  EXPECT_GT(max_recomputed_residual(rows), 1e-8);
}

TEST(Ledger, ZeroLoadRunStaysAtRest) {
  const Mesh2D m = generate_rect_mesh(4, 4, 1.0, 1.0);
  const Discretization d(m, make_phase_field_law(LawKind::AT2, 1000.0, {1e9, 5e8}, 10.0, 0.1, 1.0));
  const Eigen::VectorXd z = Eigen::VectorXd::Zero(d.num_dofs());
  SimState s = make_initial_state(d, z, z, Eigen::VectorXd::Ones(m.num_nodes()));
  const SimState s0 = s;
  SchemeConfig cfg;
  cfg.tau = 1e-5;
  for (int k = 0; k < 100; ++k) s = step_staggered(s, d, cfg);
  EXPECT_EQ(balance_residual(s.ledger, s0.ledger), 0.0);
  EXPECT_EQ(s.ledger.total_dissipation(), 0.0);
  EXPECT_NEAR(s.t, 1e-3, 1e-15);
  EXPECT_EQ(s.step, 100);
}

TEST(Ledger, MonolithicResidualIsFirstOrderInTau) {
  const Mesh2D m = generate_rect_mesh(4, 4, 1.0, 1.0).with_tag_kind("bottom", BoundaryKind::Fixed);
  const MaterialLaw law = make_phase_field_law(LawKind::AT2, 1.0, {1.0, 1.0}, 1e-3, 0.25, 1.0);
  LoadProgram lp;
  lp.traction.push_back({"top", Eigen::Vector2d(0.02, 0.08), TimeFunction::schedule({{0.0, 0.0}, {0.4, 1.0}})});
  const Discretization d(m, law, lp);
  const Eigen::VectorXd z = Eigen::VectorXd::Zero(d.num_dofs());
  std::vector<double> res;
  for (double tau : {0.04, 0.02, 0.01, 0.005}) {
    SimState s = make_initial_state(d, z, z, Eigen::VectorXd::Ones(m.num_nodes()));
    const EnergyLedger l0 = s.ledger;
    SchemeConfig cfg;
    cfg.scheme = SchemeKind::Monolithic;
    cfg.tau = tau;
    for (long k = 0, n = std::lround(0.8 / tau); k < n; ++k) s = step(s, d, cfg);
    EXPECT_LT(s.alpha.minCoeff(), 0.5);
    res.push_back(balance_residual(s.ledger, l0));
  }
  for (std::size_t i = 1; i < res.size(); ++i) EXPECT_GE(res[i - 1] / res[i], 1.8) << "halving " << i;
}
