#pragma once

#include <string>
#include <vector>

#include "pfd/config.hpp"
#include "pfd/mesh.hpp"

namespace pfd {

/// Built-in tension-rupture scenario: a 1 x 2 rectangle stretched by
/// tractions on top and bottom, free left side, sliding right side, AT2 law
/// with eps = 4h, staggered scheme. The same text ships as configs/fig1.ini.
const std::string& fig1_config_text();
RunConfig fig1_config();

/// Connected components of the node set {alpha < threshold}; two nodes are
/// adjacent when they share a triangle edge.
std::vector<std::vector<int>> low_alpha_components(const Mesh2D& mesh, const Eigen::VectorXd& alpha,
                                                   double threshold);

struct Fig1Report {
  long steps = 0;
  long rupture_step = -1;  // first step with min alpha < 0.05
  double min_alpha = 1.0;
  int band_components = 0;
  double band_height = 0.0;
  double band_span_fraction = 0.0;
  double eps = 0.0;
  double width = 0.0;
  double final_kinetic = 0.0;
  double alpha_lo = 1.0, alpha_hi = 0.0;  // extremes over all steps
  bool monotone = true;                   // alpha non-increasing node-wise every step
  double max_residual = 0.0;

  bool ruptured() const { return min_alpha < 0.05; }
  bool band_ok() const {
    return band_components == 1 && band_height <= 6.0 * eps && band_span_fraction >= 0.9;
  }
  bool waves_emitted() const { return rupture_step >= 0 && rupture_step < steps && final_kinetic > 0.0; }
  bool bounds_ok() const { return alpha_lo >= -1e-9 && alpha_hi <= 1.0 + 1e-9; }
  bool pass() const { return ruptured() && band_ok() && waves_emitted() && bounds_ok() && monotone; }
  std::string summary() const;
};

/// Runs a tension-rupture config and evaluates the rupture properties. Files
/// are written only when out_dir is non-empty.
Fig1Report run_fig1(const RunConfig& c, const std::string& out_dir = "");

}  // namespace pfd
