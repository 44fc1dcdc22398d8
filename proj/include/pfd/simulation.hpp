#pragma once

#include <functional>
#include <string>

#include "pfd/config.hpp"
#include "pfd/discretization.hpp"
#include "pfd/schemes.hpp"

namespace pfd {

struct Problem {
  Discretization disc;
  SimState initial;
  SchemeConfig scheme;
  long steps = 0;
};

/// Mesh, law, loads and initial state of a validated config. Initial fields
/// are the polynomial expressions evaluated at the nodes.
Problem build_problem(const RunConfig& c, const std::string& base_dir = ".");

struct RunSummary {
  long steps = 0;
  double final_residual = 0.0;
  double max_residual = 0.0;
  int vtk_files = 0;
  std::string csv_path;
  SimState final_state;
};

using StepObserver = std::function<void(const SimState&, const StepReport&)>;

/// Time loop. Writes <dir>/<prefix>_NNNNNN.vtk (+ .snap sidecar) at t = 0 and
/// every `cadence` steps, the last step included, and the energy CSV with one
/// row per step. An empty output dir disables all files.
RunSummary run_simulation(const RunConfig& c, const std::string& base_dir = ".", const StepObserver& observer = {});

/// Same loop on an already built problem.
RunSummary run_problem(const Problem& p, const OutputSpec& out, const StepObserver& observer = {});

}  // namespace pfd
