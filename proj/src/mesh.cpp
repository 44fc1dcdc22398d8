#include "pfd/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>
#include <utility>

namespace pfd {

const char* to_string(BoundaryKind k) {
  switch (k) {
    case BoundaryKind::Free: return "free";
    case BoundaryKind::Traction: return "traction";
    case BoundaryKind::NormalSliding: return "normal-sliding";
    case BoundaryKind::Fixed: return "fixed";
  }
  return "free";
}

BoundaryKind boundary_kind_from_string(const std::string& s) {
  if (s == "free") return BoundaryKind::Free;
  if (s == "traction") return BoundaryKind::Traction;
  if (s == "normal-sliding" || s == "sliding") return BoundaryKind::NormalSliding;
  if (s == "fixed") return BoundaryKind::Fixed;
  throw MeshError("unknown boundary kind '" + s + "'");
}

Mesh2D::Mesh2D(std::vector<Eigen::Vector2d> nodes, std::vector<std::array<int, 3>> triangles,
               std::vector<int> regions, std::vector<BoundaryEdge> edges, std::vector<BoundaryTag> tags)
    : nodes_(std::move(nodes)),
      triangles_(std::move(triangles)),
      regions_(std::move(regions)),
      edges_(std::move(edges)),
      tags_(std::move(tags)) {
  const int n = num_nodes();
  if (regions_.empty()) regions_.assign(triangles_.size(), 0);
  if (regions_.size() != triangles_.size()) throw MeshError("region list does not match triangle count");

  std::map<std::pair<int, int>, int> edge_use;
  for (std::size_t t = 0; t < triangles_.size(); ++t) {
    for (int idx : triangles_[t])
      if (idx < 0 || idx >= n) throw MeshError("triangle " + std::to_string(t) + " has node index out of range");
    if (!(signed_area(static_cast<int>(t)) > 0.0))
      throw MeshError("triangle " + std::to_string(t) + " has non-positive signed area");
    for (int k = 0; k < 3; ++k) {
      int a = triangles_[t][k], b = triangles_[t][(k + 1) % 3];
      ++edge_use[{std::min(a, b), std::max(a, b)}];
    }
  }

  std::set<std::string> names;
  for (const auto& tag : tags_)
    if (!names.insert(tag.name).second) throw MeshError("duplicate boundary tag '" + tag.name + "'");

  for (std::size_t e = 0; e < edges_.size(); ++e) {
    const auto& be = edges_[e];
    if (be.a < 0 || be.a >= n || be.b < 0 || be.b >= n)
      throw MeshError("boundary edge " + std::to_string(e) + " has node index out of range");
    if (be.tag < 0 || be.tag >= static_cast<int>(tags_.size()))
      throw MeshError("boundary edge " + std::to_string(e) + " has an unknown tag");
    auto it = edge_use.find({std::min(be.a, be.b), std::max(be.a, be.b)});
    if (it == edge_use.end() || it->second != 1)
      throw MeshError("boundary edge " + std::to_string(e) + " is not an edge of exactly one triangle");
  }
}

int Mesh2D::find_tag(const std::string& name) const {
  for (std::size_t i = 0; i < tags_.size(); ++i)
    if (tags_[i].name == name) return static_cast<int>(i);
  return -1;
}

Mesh2D Mesh2D::with_tag_kind(const std::string& name, BoundaryKind kind) const {
  const int idx = find_tag(name);
  if (idx < 0) throw MeshError("unknown boundary tag '" + name + "'");
  auto tags = tags_;
  tags[idx].kind = kind;
  return Mesh2D(nodes_, triangles_, regions_, edges_, std::move(tags));
}

double Mesh2D::signed_area(int tri) const {
  const auto& t = triangles_[tri];
  const Eigen::Vector2d a = nodes_[t[1]] - nodes_[t[0]];
  const Eigen::Vector2d b = nodes_[t[2]] - nodes_[t[0]];
  return 0.5 * (a.x() * b.y() - a.y() * b.x());
}

double Mesh2D::total_area() const {
  double s = 0.0;
  for (int t = 0; t < num_triangles(); ++t) s += signed_area(t);
  return s;
}

Mesh2D generate_rect_mesh(int nx, int ny, double Lx, double Ly) {
  if (nx < 1 || ny < 1) throw MeshError("generate_rect_mesh: nx and ny must be >= 1");
  if (!(Lx > 0.0) || !(Ly > 0.0)) throw MeshError("generate_rect_mesh: Lx and Ly must be positive");

  std::vector<Eigen::Vector2d> nodes;
  nodes.reserve(static_cast<std::size_t>((nx + 1) * (ny + 1)));
  for (int j = 0; j <= ny; ++j)
    for (int i = 0; i <= nx; ++i) nodes.emplace_back(Lx * i / nx, Ly * j / ny);

  auto id = [nx](int i, int j) { return j * (nx + 1) + i; };
  std::vector<std::array<int, 3>> tris;
  tris.reserve(static_cast<std::size_t>(2 * nx * ny));
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      const int n00 = id(i, j), n10 = id(i + 1, j), n11 = id(i + 1, j + 1), n01 = id(i, j + 1);
      tris.push_back({n00, n10, n11});
      tris.push_back({n00, n11, n01});
    }

  std::vector<BoundaryTag> tags = {{"left", BoundaryKind::Free},
                                   {"right", BoundaryKind::Free},
                                   {"bottom", BoundaryKind::Free},
                                   {"top", BoundaryKind::Free}};
  // Geometric tagging with tolerance 1e-12 * max(Lx, Ly).
  const double tol = 1e-12 * std::max(Lx, Ly);
  std::vector<BoundaryEdge> edges;
  auto classify = [&](const Eigen::Vector2d& p, const Eigen::Vector2d& q) -> int {
    if (std::abs(p.x()) <= tol && std::abs(q.x()) <= tol) return 0;
    if (std::abs(p.x() - Lx) <= tol && std::abs(q.x() - Lx) <= tol) return 1;
    if (std::abs(p.y()) <= tol && std::abs(q.y()) <= tol) return 2;
    if (std::abs(p.y() - Ly) <= tol && std::abs(q.y() - Ly) <= tol) return 3;
    return -1;
  };
  for (int i = 0; i < nx; ++i) {
    edges.push_back({id(i, 0), id(i + 1, 0), classify(nodes[id(i, 0)], nodes[id(i + 1, 0)])});
    edges.push_back({id(i + 1, ny), id(i, ny), classify(nodes[id(i + 1, ny)], nodes[id(i, ny)])});
  }
  for (int j = 0; j < ny; ++j) {
    edges.push_back({id(nx, j), id(nx, j + 1), classify(nodes[id(nx, j)], nodes[id(nx, j + 1)])});
    edges.push_back({id(0, j + 1), id(0, j), classify(nodes[id(0, j + 1)], nodes[id(0, j)])});
  }
  return Mesh2D(std::move(nodes), std::move(tris), {}, std::move(edges), std::move(tags));
}

std::vector<ElementGeometry> element_shape_gradients(const Mesh2D& mesh) {
  std::vector<ElementGeometry> out(mesh.triangles().size());
  const auto& X = mesh.nodes();
  for (std::size_t t = 0; t < out.size(); ++t) {
    const auto& tri = mesh.triangles()[t];
    const Eigen::Vector2d& p0 = X[tri[0]];
    const Eigen::Vector2d& p1 = X[tri[1]];
    const Eigen::Vector2d& p2 = X[tri[2]];
    const double det = (p1.x() - p0.x()) * (p2.y() - p0.y()) - (p2.x() - p0.x()) * (p1.y() - p0.y());
    const double scale = std::max({(p1 - p0).squaredNorm(), (p2 - p0).squaredNorm(), (p2 - p1).squaredNorm()});
    if (!(std::abs(det) > 1e-14 * scale))
      throw MeshError("degenerate triangle " + std::to_string(t));
    ElementGeometry& g = out[t];
    g.area = 0.5 * det;
    // grad N_i = perp(opposite edge) / (2A)
    g.grad.row(0) << (p1.y() - p2.y()) / det, (p2.x() - p1.x()) / det;
    g.grad.row(1) << (p2.y() - p0.y()) / det, (p0.x() - p2.x()) / det;
    g.grad.row(2) << (p0.y() - p1.y()) / det, (p1.x() - p0.x()) / det;
    const double perim = (p1 - p0).norm() + (p2 - p1).norm() + (p0 - p2).norm();
    g.inradius = 2.0 * std::abs(g.area) / perim;
  }
  return out;
}

Mesh2D read_mesh(std::istream& in) {
  auto expect = [&](const char* word) -> long {
    std::string w;
    long count = -1;
    if (!(in >> w >> count) || w != word || count < 0)
      throw MeshError(std::string("mesh file: expected '") + word + " <count>'");
    return count;
  };
  const long n = expect("nodes");
  std::vector<Eigen::Vector2d> nodes(static_cast<std::size_t>(n));
  for (auto& p : nodes)
    if (!(in >> p.x() >> p.y())) throw MeshError("mesh file: truncated node list");
  const long m = expect("triangles");
  std::vector<std::array<int, 3>> tris(static_cast<std::size_t>(m));
  std::vector<int> regions(static_cast<std::size_t>(m));
  for (long t = 0; t < m; ++t)
    if (!(in >> tris[t][0] >> tris[t][1] >> tris[t][2] >> regions[t]))
      throw MeshError("mesh file: truncated triangle list");
  const long b = expect("boundary");
  std::vector<BoundaryEdge> edges;
  std::vector<BoundaryTag> tags;
  for (long e = 0; e < b; ++e) {
    int i = 0, j = 0;
    std::string name;
    if (!(in >> i >> j >> name)) throw MeshError("mesh file: truncated boundary list");
    auto it = std::find_if(tags.begin(), tags.end(), [&](const BoundaryTag& t) { return t.name == name; });
    int tag = static_cast<int>(it - tags.begin());
    if (it == tags.end()) tags.push_back({name, BoundaryKind::Free});
    edges.push_back({i, j, tag});
  }
  return Mesh2D(std::move(nodes), std::move(tris), std::move(regions), std::move(edges), std::move(tags));
}

Mesh2D read_mesh_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw MeshError("cannot open mesh file '" + path + "'");
  return read_mesh(f);
}

void write_mesh(std::ostream& out, const Mesh2D& mesh) {
  char buf[96];
  out << "nodes " << mesh.num_nodes() << '\n';
  for (const auto& p : mesh.nodes()) {
    std::snprintf(buf, sizeof buf, "%.17g %.17g\n", p.x(), p.y());
    out << buf;
  }
  out << "triangles " << mesh.num_triangles() << '\n';
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const auto& tri = mesh.triangles()[t];
    out << tri[0] << ' ' << tri[1] << ' ' << tri[2] << ' ' << mesh.regions()[t] << '\n';
  }
  out << "boundary " << mesh.boundary_edges().size() << '\n';
  for (const auto& e : mesh.boundary_edges()) out << e.a << ' ' << e.b << ' ' << mesh.tags()[e.tag].name << '\n';
}

}  // namespace pfd
