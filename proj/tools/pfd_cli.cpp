#include <cstdio>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "pfd/config.hpp"
#include "pfd/energy.hpp"
#include "pfd/mesh.hpp"
#include "pfd/scenarios.hpp"
#include "pfd/schemes.hpp"
#include "pfd/simulation.hpp"

namespace {

std::string parent_dir(const std::string& path) {
  const auto pos = path.find_last_of('/');
  return pos == std::string::npos ? "." : path.substr(0, pos);
}

int cmd_run(const std::string& path, const std::string& out_dir) {
  pfd::RunConfig c = pfd::parse_config(path);
  if (!out_dir.empty()) c.output.dir = out_dir;
  const pfd::RunSummary r = pfd::run_simulation(c, parent_dir(path));
  std::printf("steps: %ld\n", r.steps);
  std::printf("vtk files: %d\n", r.vtk_files);
  if (!r.csv_path.empty()) std::printf("energy log: %s\n", r.csv_path.c_str());
  std::printf("max residual: %.6e\n", r.max_residual);
  std::printf("final residual: %.6e\n", r.final_residual);
  return 0;
}

int cmd_cfl(const std::string& path) {
  const pfd::RunConfig c = pfd::parse_config(path);
  const pfd::Mesh2D mesh = pfd::build_mesh(c, parent_dir(path));
  const double bound = pfd::cfl_timestep(mesh, pfd::build_material(c));
  std::printf("cfl bound: %.17g\n", bound);
  std::printf("recommended tau: %.17g\n", c.scheme.cfl_safety * bound);
  return 0;
}

int cmd_check_energy(const std::string& path, double threshold) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read '" + path + "'");
  const auto rows = pfd::read_energy_csv(in);
  const double r = pfd::max_recomputed_residual(rows);
  std::printf("rows: %zu\n", rows.size());
  std::printf("max residual: %.6e (threshold %.1e)\n", r, threshold);
  if (r > threshold) {
    std::printf("FAIL: energy balance violated\n");
    return 1;
  }
  std::printf("OK\n");
  return 0;
}

int cmd_fig1(const std::string& out_dir, const std::string& config) {
  const pfd::RunConfig c = config.empty() ? pfd::fig1_config() : pfd::parse_config(config);
  const pfd::Fig1Report r = pfd::run_fig1(c, out_dir);
  std::printf("%s\n", r.summary().c_str());
  auto line = [](bool ok, const char* what) { std::printf("[%s] %s\n", ok ? "PASS" : "FAIL", what); };
  line(r.ruptured(), "min alpha < 0.05 after rupture");
  line(r.band_ok(), "single damaged band, height <= 6 eps, spans >= 90% of the width");
  line(r.waves_emitted(), "kinetic energy after rupture is nonzero");
  line(r.bounds_ok() && r.monotone, "alpha within [0,1] and non-increasing");
  return r.pass() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dynamic phase-field fracture solver"};
  app.require_subcommand(1);

  std::string config, out_dir, csv;
  double threshold = 1e-8;

  auto* run = app.add_subcommand("run", "Run the time loop of a config, writing VTK files and the energy CSV");
  run->add_option("config", config, "Config file")->required()->check(CLI::ExistingFile);
  run->add_option("--out", out_dir, "Override the output directory");

  int nx = 8, ny = 8;
  double Lx = 1.0, Ly = 1.0;
  std::string mesh_out;
  auto* mesh = app.add_subcommand("mesh-gen", "Write a structured rectangle mesh");
  mesh->add_option("--nx", nx, "Cells in x")->check(CLI::PositiveNumber);
  mesh->add_option("--ny", ny, "Cells in y")->check(CLI::PositiveNumber);
  mesh->add_option("--Lx", Lx, "Width, m")->check(CLI::PositiveNumber);
  mesh->add_option("--Ly", Ly, "Height, m")->check(CLI::PositiveNumber);
  mesh->add_option("-o,--output", mesh_out, "Output file (stdout when omitted)");

  auto* cfl = app.add_subcommand("cfl", "Print the explicit time-step bound of a config");
  cfl->add_option("config", config, "Config file")->required()->check(CLI::ExistingFile);

  auto* check = app.add_subcommand("check-energy", "Recompute the energy balance residual of an energy CSV");
  check->add_option("csv", csv, "Energy CSV")->required();
  check->add_option("--threshold", threshold, "Largest accepted residual");

  auto* scenario = app.add_subcommand("scenario", "Built-in verification scenarios");
  scenario->require_subcommand(1);
  auto* fig1 = scenario->add_subcommand("fig1", "Tension rupture of a stretched rectangle with property checks");
  fig1->add_option("--out", out_dir, "Write VTK files and the energy CSV here");
  fig1->add_option("--config", config, "Use this config instead of the built-in one");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) return cmd_run(config, out_dir);
    if (*mesh) {
      const pfd::Mesh2D m = pfd::generate_rect_mesh(nx, ny, Lx, Ly);
      if (mesh_out.empty()) {
        pfd::write_mesh(std::cout, m);
      } else {
        std::ofstream f(mesh_out);
        if (!f) throw std::runtime_error("cannot write '" + mesh_out + "'");
        pfd::write_mesh(f, m);
      }
      return 0;
    }
    if (*cfl) return cmd_cfl(config);
    if (*check) return cmd_check_energy(csv, threshold);
    if (*fig1) return cmd_fig1(out_dir, config);
  } catch (const std::exception& ex) {
    std::fprintf(stderr, "error: %s\n", ex.what());
    return 2;
  }
  return 1;
}
