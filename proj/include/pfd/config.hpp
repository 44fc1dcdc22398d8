#pragma once

// Run configuration: INI-style sections with `key = value` lines, SI units.
//
//   [mesh]        nx, ny, Lx, Ly          (generated rectangle)  or  file
//   [boundary]    <tag> = free | traction | sliding | fixed
//   [material]    law, rho, and either K, G, phi (polynomials in a) or
//                 K1, G1, gc, eps_pf, eps0 for the phase-field presets;
//                 optional kappa, p_grad, nu_visc, D0_K, D0_G, chi, eps_reg,
//                 gc, regime, alpha_eval
//   [plasticity]  H, G_nh, sigma_yld (polynomial in a), kappa1
//   [scheme]      scheme, tau, steps, newton_tol, qp_tol, max_inner_iters,
//                 cfl_safety, lumped, linear_solver, linear_tol
//   [load.NAME]   kind = traction | body, tag (traction only), gx, gy,
//                 time = <polynomial in t>  or  schedule = t0 v0, t1 v1, ...
//   [initial]     ux, uy, vx, vy, alpha   (polynomials in x, y)
//   [output]      dir, cadence, vtk, csv, prefix
//
// '#' and ';' start comments. Numbers must be plain decimal literals; a
// trailing unit ("1e9 Pa") is rejected.

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "pfd/assembly.hpp"
#include "pfd/expr.hpp"
#include "pfd/material.hpp"
#include "pfd/mesh.hpp"
#include "pfd/plastic_law.hpp"
#include "pfd/state.hpp"

namespace pfd {

class ConfigError : public std::invalid_argument {
 public:
  explicit ConfigError(std::vector<std::string> errors);
  const std::vector<std::string>& errors() const { return errors_; }

 private:
  std::vector<std::string> errors_;
};

struct MeshSource {
  std::string file;  // empty for a generated rectangle
  int nx = 0, ny = 0;
  double Lx = 0.0, Ly = 0.0;
  bool operator==(const MeshSource&) const = default;
};

struct MaterialSpec {
  std::string law;  // linear-damage | mode-sensitive | at2-phasefield | at1-phasefield
  double rho = 0.0;
  PolyExpr K, G, phi;  // in "a"; for the quadratic laws
  double K1 = 0.0, G1 = 0.0;  // undamaged moduli of the presets
  double gc = 0.0, eps_pf = 0.0, eps0 = 1.0;
  std::optional<double> kappa;
  double p_grad = 2.0, nu_visc = 0.0, D0_K = 0.0, D0_G = 0.0, chi = 0.0, eps_reg = 0.0;
  Regime regime = Regime::Unidirectional;
  AlphaEvaluation alpha_eval = AlphaEvaluation::ElementMean;
  bool operator==(const MaterialSpec&) const = default;
};

struct PlasticSpec {
  double H = 0.0, G_nh = 0.0, kappa1 = 0.0;
  PolyExpr sigma_yld;  // in "a"
  bool operator==(const PlasticSpec&) const = default;
};

struct LoadSpec {
  std::string name;
  bool traction = true;
  std::string tag;
  double gx = 0.0, gy = 0.0;
  std::optional<PolyExpr> time_poly;                   // in "t"
  std::vector<std::pair<double, double>> schedule;     // used when time_poly is unset
  bool operator==(const LoadSpec&) const = default;
  TimeFunction time_function() const;
};

struct InitialSpec {
  PolyExpr ux, uy, vx, vy, alpha;  // in "x", "y"
  bool operator==(const InitialSpec&) const = default;
};

struct OutputSpec {
  std::string dir = "output";
  int cadence = 10;
  bool vtk = true;
  std::string csv = "energy.csv";
  std::string prefix = "state";
  bool operator==(const OutputSpec&) const = default;
};

struct RunConfig {
  MeshSource mesh;
  std::map<std::string, BoundaryKind> boundary;
  MaterialSpec material;
  std::optional<PlasticSpec> plasticity;
  SchemeConfig scheme;
  long steps = 0;
  std::vector<LoadSpec> loads;
  InitialSpec initial;
  OutputSpec output;

  bool operator==(const RunConfig& o) const;
};

/// Parses and validates; throws ConfigError listing every problem found.
RunConfig parse_config_string(const std::string& text);
RunConfig parse_config(const std::string& path);

/// Canonical text; parse_config_string(serialize_config(c)) == c.
std::string serialize_config(const RunConfig& c);

/// Objects built from a validated config. File paths of meshes are resolved
/// relative to base_dir.
Mesh2D build_mesh(const RunConfig& c, const std::string& base_dir = ".");
MaterialLaw build_material(const RunConfig& c);
std::optional<PlasticLaw> build_plastic(const RunConfig& c);
LoadProgram build_loads(const RunConfig& c, const Mesh2D& mesh);

}  // namespace pfd
