#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "pfd/config.hpp"
#include "pfd/energy.hpp"
#include "pfd/io.hpp"
#include "pfd/scenarios.hpp"
#include "pfd/simulation.hpp"

using namespace pfd;
namespace fs = std::filesystem;

namespace {

const char* kMinimal = R"(
[mesh]
nx = 2
ny = 1
Lx = 2
Ly = 1

[material]
law = at2-phasefield
rho = 1
K1 = 1
G1 = 1
gc = 0.5
eps_pf = 0.25

[scheme]
scheme = staggered
tau = 0.01
steps = 20
)";

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> errors_of(const std::string& text) {
  try {
    parse_config_string(text);
  } catch (const ConfigError& e) {
    return e.errors();
  }
  return {};
}

bool any_contains(const std::vector<std::string>& v, const std::string& needle) {
  for (const auto& s : v)
    if (s.find(needle) != std::string::npos) return true;
  return false;
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("pfd_test_" + name);
  fs::remove_all(p);
  return p;
}

}  // namespace

TEST(Config, DefaultsFilled) {
  const RunConfig c = parse_config_string(kMinimal);
  EXPECT_EQ(c.mesh.nx, 2);
  EXPECT_EQ(c.steps, 20);
  EXPECT_EQ(c.scheme.scheme, SchemeKind::Staggered);
  EXPECT_EQ(c.scheme.tau, 0.01);
  EXPECT_EQ(c.output.cadence, 10);
  EXPECT_EQ(c.output.dir, "output");
  EXPECT_TRUE(c.loads.empty());
  const MaterialLaw law = build_material(c);
  EXPECT_EQ(law.kind, LawKind::AT2);
  EXPECT_DOUBLE_EQ(law.kappa, 0.25 * 0.5);
}

TEST(Config, MisspelledKeyNamesKeyAndSection) {
  const auto errs = errors_of(slurp(std::string(PFD_TEST_DATA) + "/misspelled.ini"));
  ASSERT_FALSE(errs.empty());
  EXPECT_TRUE(any_contains(errs, "'tua'")) << errs[0];
  EXPECT_TRUE(any_contains(errs, "[scheme]")) << errs[0];
}

TEST(Config, AllErrorsReportedAtOnce) {
  const std::string text = std::string(kMinimal) + "colour = red\n[output]\ncadense = 3\n[bogus]\nx = 1\n";
  const auto errs = errors_of(text);
  EXPECT_TRUE(any_contains(errs, "'colour'"));
  EXPECT_TRUE(any_contains(errs, "'cadense'"));
  EXPECT_TRUE(any_contains(errs, "bogus"));
  EXPECT_GE(errs.size(), 3u);
}

TEST(Config, MissingRequiredKey) {
  std::string text = kMinimal;
  text.replace(text.find("gc = 0.5\n"), 9, "");
  const auto errs = errors_of(text);
  EXPECT_TRUE(any_contains(errs, "'gc'"));
  EXPECT_TRUE(any_contains(errs, "[material]"));
}

TEST(Config, UnitsRejected) {
  std::string text = kMinimal;
  text.replace(text.find("K1 = 1\n"), 7, "K1 = 1e9 Pa\n");
  const auto errs = errors_of(text);
  ASSERT_FALSE(errs.empty());
  EXPECT_TRUE(any_contains(errs, "unit"));
}

TEST(Config, SerializeRoundTrip) {
  const RunConfig c = fig1_config();
  EXPECT_EQ(parse_config_string(serialize_config(c)), c);
  const RunConfig m = parse_config_string(kMinimal);
  EXPECT_EQ(parse_config_string(serialize_config(m)), m);
}

TEST(Config, ShippedFig1MatchesEmbedded) {
  EXPECT_EQ(parse_config(std::string(PFD_SOURCE_DIR) + "/configs/fig1.ini"), fig1_config());
}

TEST(Vtk, GoldenOneTriangle) {
  std::vector<BoundaryEdge> edges = {{0, 1, 0}, {1, 2, 0}, {2, 0, 0}};
  const Mesh2D mesh({{0.0, 0.0}, {2.0, 0.0}, {0.0, 1.0}}, {{0, 1, 2}}, {0}, edges, {{"all", BoundaryKind::Free}});
  SimState s;
  s.step = 3;
  s.t = 0.25;
  s.u = Eigen::VectorXd(6);
  s.u << 0.1, -0.0, 0.0, -0.2, 1.0 / 3.0, 1e-12;
  s.v = Eigen::VectorXd::Zero(6);
  s.v[2] = 1.0;
  s.alpha = Eigen::Vector3d(1.0, 0.5, 0.1234567891234);
  Sym2 p;
  p << 0.01, -0.02, -0.02, -0.01;
  s.pi = {p};
  std::ostringstream out;
  write_vtk(out, s, mesh);
  EXPECT_EQ(out.str(), slurp(std::string(PFD_TEST_DATA) + "/one_triangle.vtk"));
  // Byte-identical on repeat.
  std::ostringstream again;
  write_vtk(again, s, mesh);
  EXPECT_EQ(out.str(), again.str());
}

TEST(Vtk, MismatchedStateRejected) {
  const Mesh2D mesh = generate_rect_mesh(1, 1, 1.0, 1.0);
  SimState s;
  s.alpha = Eigen::VectorXd::Ones(3);
  std::ostringstream out;
  EXPECT_THROW(write_vtk(out, s, mesh), IoError);
}

TEST(Snapshot, RoundTripIsExact) {
  SimState s;
  s.t = 0.1 + 0.2;
  s.step = 17;
  s.u = Eigen::VectorXd::LinSpaced(6, -1.0 / 3.0, 2.0 / 7.0);
  s.v = Eigen::VectorXd::Constant(6, 1e-310);
  s.alpha = Eigen::VectorXd::LinSpaced(3, 0.0, 1.0);
  Sym2 p;
  p << 1.0 / 9.0, 2e-5, 2e-5, -1.0 / 9.0;
  s.pi = {p, -p};
  s.varsigma = {2 * p};
  s.ledger.kinetic = 1.0 / 7.0;
  s.ledger.external_work = 3.25;
  s.ledger.dissipated_damage = 1e-17;
  std::stringstream ss;
  write_snapshot(ss, s);
  const SimState r = read_snapshot(ss);
  EXPECT_EQ(r.t, s.t);
  EXPECT_EQ(r.step, s.step);
  EXPECT_EQ(r.u, s.u);
  EXPECT_EQ(r.v, s.v);
  EXPECT_EQ(r.alpha, s.alpha);
  ASSERT_EQ(r.pi.size(), 2u);
  EXPECT_EQ(r.pi[1], s.pi[1]);
  ASSERT_EQ(r.varsigma.size(), 1u);
  EXPECT_EQ(r.varsigma[0], s.varsigma[0]);
  EXPECT_EQ(r.ledger.kinetic, s.ledger.kinetic);
  EXPECT_EQ(r.ledger.external_work, s.ledger.external_work);
  EXPECT_EQ(r.ledger.dissipated_damage, s.ledger.dissipated_damage);
}

TEST(Snapshot, TruncatedInputRejected) {
  std::stringstream ss("pfd-snapshot 1\nt 0\nstep 1\n");
  EXPECT_THROW(read_snapshot(ss), IoError);
}

TEST(Simulation, CadenceProducesExpectedFiles) {
  RunConfig c = parse_config_string(kMinimal);
  const fs::path dir = scratch("cadence");
  c.output.dir = dir.string();
  const RunSummary sum = run_simulation(c);
  EXPECT_EQ(sum.steps, 20);
  EXPECT_EQ(sum.vtk_files, 3);
  int vtk = 0;
  for (const auto& e : fs::directory_iterator(dir)) vtk += e.path().extension() == ".vtk";
  EXPECT_EQ(vtk, 3);
  EXPECT_TRUE(fs::exists(dir / "state_000020.vtk"));
  // Restart from the last sidecar reproduces the in-memory final state.
  const SimState r = read_snapshot((dir / "state_000020.snap").string());
  EXPECT_EQ(r.u, sum.final_state.u);
  EXPECT_EQ(r.alpha, sum.final_state.alpha);
  fs::remove_all(dir);
}

TEST(Simulation, CsvHasOneRowPerStepPlusInitial) {
  RunConfig c = parse_config_string(kMinimal);
  const fs::path dir = scratch("csv");
  c.output.dir = dir.string();
  const RunSummary sum = run_simulation(c);
  std::ifstream in(sum.csv_path);
  ASSERT_TRUE(in);
  std::string header;
  std::getline(in, header);
  EXPECT_EQ(header, energy_csv_header());
  int rows = 0;
  for (std::string line; std::getline(in, line);) rows += !line.empty();
  EXPECT_EQ(rows, 21);
  fs::remove_all(dir);
}
