#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>

#include "pfd/mesh.hpp"
#include "pfd/state.hpp"

namespace pfd {

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Legacy ASCII VTK unstructured grid: POINTS, triangle CELLS (type 5),
/// POINT_DATA vectors u, v and scalar alpha, CELL_DATA tensor pi when the
/// state carries plastic strain. Values use %.9g with -0 printed as 0, so the
/// output is byte-for-byte deterministic.
void write_vtk(std::ostream& out, const SimState& s, const Mesh2D& mesh);
void write_vtk(const SimState& s, const Mesh2D& mesh, const std::string& path);

/// Full-precision sidecar holding everything needed to restart: t, step,
/// ledger, u, v, alpha, pi, varsigma.
void write_snapshot(std::ostream& out, const SimState& s);
void write_snapshot(const SimState& s, const std::string& path);
SimState read_snapshot(std::istream& in);
SimState read_snapshot(const std::string& path);

}  // namespace pfd
