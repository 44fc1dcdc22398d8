#pragma once

#include <array>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace pfd {

class MeshError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// How a tagged part of the boundary acts on the displacement.
enum class BoundaryKind { Free, Traction, NormalSliding, Fixed };

const char* to_string(BoundaryKind k);
BoundaryKind boundary_kind_from_string(const std::string& s);

struct BoundaryTag {
  std::string name;
  BoundaryKind kind = BoundaryKind::Free;
};

struct BoundaryEdge {
  int a = 0;
  int b = 0;
  int tag = 0;  // index into Mesh2D::tags()
};

/// Immutable planar triangulation with tagged boundary edges.
///
/// Invariants, checked on construction: positive signed area for every
/// triangle, node indices in range, every boundary edge is an edge of exactly
/// one triangle, unique tag names.
class Mesh2D {
 public:
  Mesh2D(std::vector<Eigen::Vector2d> nodes, std::vector<std::array<int, 3>> triangles,
         std::vector<int> regions, std::vector<BoundaryEdge> edges, std::vector<BoundaryTag> tags);

  const std::vector<Eigen::Vector2d>& nodes() const { return nodes_; }
  const std::vector<std::array<int, 3>>& triangles() const { return triangles_; }
  const std::vector<int>& regions() const { return regions_; }
  const std::vector<BoundaryEdge>& boundary_edges() const { return edges_; }
  const std::vector<BoundaryTag>& tags() const { return tags_; }

  int num_nodes() const { return static_cast<int>(nodes_.size()); }
  int num_triangles() const { return static_cast<int>(triangles_.size()); }

  /// Index of a tag by name, or -1.
  int find_tag(const std::string& name) const;
  /// Copy of the mesh with the kind of one tag changed.
  Mesh2D with_tag_kind(const std::string& name, BoundaryKind kind) const;

  double signed_area(int tri) const;
  double total_area() const;

 private:
  std::vector<Eigen::Vector2d> nodes_;
  std::vector<std::array<int, 3>> triangles_;
  std::vector<int> regions_;
  std::vector<BoundaryEdge> edges_;
  std::vector<BoundaryTag> tags_;
};

/// Structured rectangle [0,Lx] x [0,Ly] with nx*ny cells, each cell split into
/// two triangles along its fixed lower-left to upper-right diagonal. The mesh
/// has (nx+1)(ny+1) nodes, numbered row by row from the lower-left corner,
/// 2*nx*ny triangles, and boundary tags left/right/bottom/top (all Free).
Mesh2D generate_rect_mesh(int nx, int ny, double Lx, double Ly);

/// Constant P1 data of one triangle: area and the gradients of the three
/// barycentric basis functions (row i = grad of basis i).
struct ElementGeometry {
  double area = 0.0;
  Eigen::Matrix<double, 3, 2> grad;
  double inradius = 0.0;
};

/// Per-triangle shape gradients; throws MeshError naming the first
/// degenerate triangle.
std::vector<ElementGeometry> element_shape_gradients(const Mesh2D& mesh);

/// ASCII mesh format:
///   nodes N / N lines "x y" / triangles M / M lines "i j k region" /
///   boundary B / B lines "i j tagname"     (0-based indices)
/// Tag kinds are not part of the file; all tags are read as Free.
Mesh2D read_mesh(std::istream& in);
Mesh2D read_mesh_file(const std::string& path);
void write_mesh(std::ostream& out, const Mesh2D& mesh);

}  // namespace pfd
