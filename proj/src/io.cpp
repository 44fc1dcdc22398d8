#include "pfd/io.hpp"

#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>

namespace pfd {

namespace {

std::string g9(double v) {
  if (v == 0.0) v = 0.0;  // drops the sign of -0
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

std::string g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open '" + path + "' for writing");
  return f;
}

void write_vector_field(std::ostream& out, const char* name, const Eigen::VectorXd& f, int n) {
  out << "VECTORS " << name << " double\n";
  for (int i = 0; i < n; ++i) {
    const double x = f.size() ? f[2 * i] : 0.0, y = f.size() ? f[2 * i + 1] : 0.0;
    out << g9(x) << ' ' << g9(y) << " 0\n";
  }
}

}  // namespace

void write_vtk(std::ostream& out, const SimState& s, const Mesh2D& mesh) {
  const int n = mesh.num_nodes(), m = mesh.num_triangles();
  if ((s.u.size() && s.u.size() != 2 * n) || (s.v.size() && s.v.size() != 2 * n) ||
      (s.alpha.size() && s.alpha.size() != n))
    throw IoError("state does not match the mesh");
  out << "# vtk DataFile Version 3.0\n";
  out << "pfd step " << s.step << " t " << g9(s.t) << "\n";
  out << "ASCII\nDATASET UNSTRUCTURED_GRID\n";
  out << "POINTS " << n << " double\n";
  for (const auto& p : mesh.nodes()) out << g9(p.x()) << ' ' << g9(p.y()) << " 0\n";
  out << "CELLS " << m << ' ' << 4 * m << "\n";
  for (const auto& t : mesh.triangles()) out << "3 " << t[0] << ' ' << t[1] << ' ' << t[2] << "\n";
  out << "CELL_TYPES " << m << "\n";
  for (int e = 0; e < m; ++e) out << "5\n";
  out << "POINT_DATA " << n << "\n";
  write_vector_field(out, "u", s.u, n);
  write_vector_field(out, "v", s.v, n);
  out << "SCALARS alpha double 1\nLOOKUP_TABLE default\n";
  for (int i = 0; i < n; ++i) out << g9(s.alpha.size() ? s.alpha[i] : 1.0) << "\n";
  if (!s.pi.empty()) {
    if (static_cast<int>(s.pi.size()) != m) throw IoError("plastic strain does not match the mesh");
    out << "CELL_DATA " << m << "\nTENSORS pi double\n";
    for (const auto& p : s.pi) {
      out << g9(p(0, 0)) << ' ' << g9(p(0, 1)) << " 0\n";
      out << g9(p(1, 0)) << ' ' << g9(p(1, 1)) << " 0\n";
      out << "0 0 0\n";
    }
  }
}

void write_vtk(const SimState& s, const Mesh2D& mesh, const std::string& path) {
  std::ofstream f = open_out(path);
  write_vtk(f, s, mesh);
  if (!f) throw IoError("write to '" + path + "' failed");
}

void write_snapshot(std::ostream& out, const SimState& s) {
  const EnergyLedger& l = s.ledger;
  out << "pfd-snapshot 1\n";
  out << "t " << g17(s.t) << "\nstep " << s.step << "\n";
  out << "ledger " << g17(l.kinetic) << ' ' << g17(l.stored_elastic) << ' ' << g17(l.stored_damage) << ' '
      << g17(l.stored_plastic) << ' ' << g17(l.dissipated_viscous) << ' ' << g17(l.dissipated_damage) << ' '
      << g17(l.dissipated_plastic) << ' ' << g17(l.external_work) << "\n";
  auto vec = [&](const char* name, const Eigen::VectorXd& v) {
    out << name << ' ' << v.size() << "\n";
    for (Eigen::Index i = 0; i < v.size(); ++i) out << g17(v[i]) << "\n";
  };
  vec("u", s.u);
  vec("v", s.v);
  vec("alpha", s.alpha);
  auto tens = [&](const char* name, const std::vector<Sym2>& t) {
    out << name << ' ' << t.size() << "\n";
    for (const auto& x : t) out << g17(x(0, 0)) << ' ' << g17(x(0, 1)) << ' ' << g17(x(1, 1)) << "\n";
  };
  tens("pi", s.pi);
  tens("varsigma", s.varsigma);
}

void write_snapshot(const SimState& s, const std::string& path) {
  std::ofstream f = open_out(path);
  write_snapshot(f, s);
  if (!f) throw IoError("write to '" + path + "' failed");
}

SimState read_snapshot(std::istream& in) {
  auto expect = [&](const char* word) {
    std::string w;
    if (!(in >> w) || w != word) throw IoError(std::string("snapshot: expected '") + word + "'");
  };
  SimState s;
  int version = 0;
  expect("pfd-snapshot");
  if (!(in >> version) || version != 1) throw IoError("snapshot: unsupported version");
  expect("t");
  in >> s.t;
  expect("step");
  in >> s.step;
  expect("ledger");
  EnergyLedger& l = s.ledger;
  in >> l.kinetic >> l.stored_elastic >> l.stored_damage >> l.stored_plastic >> l.dissipated_viscous >>
      l.dissipated_damage >> l.dissipated_plastic >> l.external_work;
  auto vec = [&](const char* name, Eigen::VectorXd& v) {
    expect(name);
    long n = 0;
    if (!(in >> n) || n < 0) throw IoError(std::string("snapshot: bad size of ") + name);
    v.resize(n);
    for (long i = 0; i < n; ++i) in >> v[i];
  };
  vec("u", s.u);
  vec("v", s.v);
  vec("alpha", s.alpha);
  auto tens = [&](const char* name, std::vector<Sym2>& t) {
    expect(name);
    long n = 0;
    if (!(in >> n) || n < 0) throw IoError(std::string("snapshot: bad size of ") + name);
    t.resize(n);
    for (auto& x : t) {
      double a = 0, b = 0, c = 0;
      in >> a >> b >> c;
      x << a, b, b, c;
    }
  };
  tens("pi", s.pi);
  tens("varsigma", s.varsigma);
  if (!in) throw IoError("snapshot: truncated or malformed data");
  return s;
}

SimState read_snapshot(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw IoError("cannot read snapshot '" + path + "'");
  return read_snapshot(f);
}

}  // namespace pfd
