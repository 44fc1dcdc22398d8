#include "pfd/assembly.hpp"

#include <algorithm>
#include <cmath>

namespace pfd {

using Triplets = std::vector<Eigen::Triplet<double>>;

const char* to_string(AlphaEvaluation e) {
  return e == AlphaEvaluation::NodalMidpoint ? "nodal-midpoint" : "element-mean";
}

AlphaEvaluation alpha_evaluation_from_string(const std::string& s) {
  if (s == "element-mean") return AlphaEvaluation::ElementMean;
  if (s == "nodal-midpoint") return AlphaEvaluation::NodalMidpoint;
  throw std::invalid_argument("unknown alpha evaluation '" + s + "'");
}

Sym2 element_strain(const ElementGeometry& g, const std::array<int, 3>& tri, const FieldVector& u) {
  Sym2 grad = Sym2::Zero();  // grad(u)_{ij} = du_i/dx_j
  for (int k = 0; k < 3; ++k) {
    const double ux = u[2 * tri[k]], uy = u[2 * tri[k] + 1];
    grad(0, 0) += ux * g.grad(k, 0);
    grad(0, 1) += ux * g.grad(k, 1);
    grad(1, 0) += uy * g.grad(k, 0);
    grad(1, 1) += uy * g.grad(k, 1);
  }
  return 0.5 * (grad + grad.transpose());
}

Eigen::Matrix<double, 3, 6> element_B(const ElementGeometry& g) {
  Eigen::Matrix<double, 3, 6> B = Eigen::Matrix<double, 3, 6>::Zero();
  for (int k = 0; k < 3; ++k) {
    const double bx = g.grad(k, 0), by = g.grad(k, 1);
    B(0, 2 * k) = bx;
    B(1, 2 * k + 1) = by;
    B(2, 2 * k) = by;
    B(2, 2 * k + 1) = bx;
  }
  return B;
}

SparseOperator assemble_iso_operator(const Mesh2D& mesh, const std::vector<ElementGeometry>& geom,
                                     const std::vector<IsoTensor>& tensors) {
  const int n = 2 * mesh.num_nodes();
  Triplets trip;
  trip.reserve(36 * geom.size());
  for (int e = 0; e < mesh.num_triangles(); ++e) {
    const auto& tri = mesh.triangles()[e];
    const auto B = element_B(geom[e]);
    const Eigen::Matrix<double, 6, 6> ke = geom[e].area * B.transpose() * tensors[e].voigt() * B;
    for (int a = 0; a < 6; ++a)
      for (int b = 0; b < 6; ++b)
        trip.emplace_back(2 * tri[a / 2] + a % 2, 2 * tri[b / 2] + b % 2, ke(a, b));
  }
  SparseOperator K(n, n);
  K.setFromTriplets(trip.begin(), trip.end());
  return K;
}

SparseOperator assemble_scalar_mass(const Mesh2D& mesh, bool lumped) {
  const auto geom = element_shape_gradients(mesh);
  const int n = mesh.num_nodes();
  Triplets trip;
  for (int e = 0; e < mesh.num_triangles(); ++e) {
    const auto& tri = mesh.triangles()[e];
    const double A = geom[e].area;
    for (int a = 0; a < 3; ++a) {
      if (lumped) {
        trip.emplace_back(tri[a], tri[a], A / 3.0);
        continue;
      }
      for (int b = 0; b < 3; ++b) trip.emplace_back(tri[a], tri[b], A * (a == b ? 2.0 : 1.0) / 12.0);
    }
  }
  SparseOperator M(n, n);
  M.setFromTriplets(trip.begin(), trip.end());
  return M;
}

SparseOperator assemble_mass(const Mesh2D& mesh, double rho, bool lumped) {
  if (!(rho > 0.0)) throw std::invalid_argument("assemble_mass: rho must be positive");
  const SparseOperator Ms = assemble_scalar_mass(mesh, lumped);
  Triplets trip;
  for (int k = 0; k < Ms.outerSize(); ++k)
    for (SparseOperator::InnerIterator it(Ms, k); it; ++it)
      for (int c = 0; c < 2; ++c) trip.emplace_back(2 * it.row() + c, 2 * it.col() + c, rho * it.value());
  SparseOperator M(2 * mesh.num_nodes(), 2 * mesh.num_nodes());
  M.setFromTriplets(trip.begin(), trip.end());
  return M;
}

namespace {

void check_alpha_field(const FieldVector& alpha, const Mesh2D& mesh) {
  if (alpha.size() != mesh.num_nodes()) throw std::invalid_argument("alpha field has the wrong length");
  for (Eigen::Index i = 0; i < alpha.size(); ++i) check_alpha(alpha[i]);
}

}  // namespace

SparseOperator assemble_stiffness(const Mesh2D& mesh, const FieldVector& alpha, const MaterialLaw& law,
                                  AlphaEvaluation eval) {
  check_alpha_field(alpha, mesh);
  const auto geom = element_shape_gradients(mesh);
  std::vector<IsoTensor> t(geom.size());
  for (int e = 0; e < mesh.num_triangles(); ++e)
    t[e] = element_tensor(mesh.triangles()[e], alpha, eval, [&](double a) { return elastic_tensor(a, law); });
  return assemble_iso_operator(mesh, geom, t);
}

SparseOperator assemble_viscosity(const Mesh2D& mesh, const FieldVector& alpha, const MaterialLaw& law,
                                  AlphaEvaluation eval) {
  check_alpha_field(alpha, mesh);
  const auto geom = element_shape_gradients(mesh);
  std::vector<IsoTensor> t(geom.size());
  for (int e = 0; e < mesh.num_triangles(); ++e)
    t[e] = element_tensor(mesh.triangles()[e], alpha, eval, [&](double a) { return viscosity_tensor(a, law); });
  return assemble_iso_operator(mesh, geom, t);
}

SparseOperator assemble_scalar_laplacian(const Mesh2D& mesh, const std::vector<ElementGeometry>& geom,
                                         const std::vector<double>& coeff) {
  const int n = mesh.num_nodes();
  Triplets trip;
  trip.reserve(9 * geom.size());
  for (int e = 0; e < mesh.num_triangles(); ++e) {
    const auto& tri = mesh.triangles()[e];
    const Eigen::Matrix3d ke = geom[e].area * coeff[e] * geom[e].grad * geom[e].grad.transpose();
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b) trip.emplace_back(tri[a], tri[b], ke(a, b));
  }
  SparseOperator S(n, n);
  S.setFromTriplets(trip.begin(), trip.end());
  return S;
}

std::vector<Eigen::Vector2d> element_gradients(const std::vector<ElementGeometry>& geom, const Mesh2D& mesh,
                                               const FieldVector& alpha) {
  std::vector<Eigen::Vector2d> g(geom.size());
  for (int e = 0; e < mesh.num_triangles(); ++e) {
    const auto& tri = mesh.triangles()[e];
    g[e] = geom[e].grad.transpose() * Eigen::Vector3d(alpha[tri[0]], alpha[tri[1]], alpha[tri[2]]);
  }
  return g;
}

SparseOperator assemble_damage_gradient(const Mesh2D& mesh, const FieldVector& alpha, double kappa, double p) {
  if (!(p >= 2.0)) throw std::invalid_argument("p_grad must be at least 2");
  const auto geom = element_shape_gradients(mesh);
  std::vector<double> k(geom.size(), kappa);
  if (p != 2.0) {
    const auto g = element_gradients(geom, mesh, alpha);
    for (std::size_t e = 0; e < k.size(); ++e) k[e] = kappa * std::pow(g[e].norm(), p - 2.0);
  }
  return assemble_scalar_laplacian(mesh, geom, k);
}

double damage_gradient_energy(const Mesh2D& mesh, const FieldVector& alpha, double kappa, double p) {
  const auto geom = element_shape_gradients(mesh);
  const auto g = element_gradients(geom, mesh, alpha);
  double s = 0.0;
  for (std::size_t e = 0; e < g.size(); ++e) s += geom[e].area * kappa / p * std::pow(g[e].norm(), p);
  return s;
}

FieldVector damage_gradient_residual(const Mesh2D& mesh, const FieldVector& alpha, double kappa, double p) {
  const auto geom = element_shape_gradients(mesh);
  const auto g = element_gradients(geom, mesh, alpha);
  FieldVector r = FieldVector::Zero(mesh.num_nodes());
  for (int e = 0; e < mesh.num_triangles(); ++e) {
    const double n = g[e].norm();
    const double k = (p == 2.0) ? kappa : kappa * std::pow(n, p - 2.0);
    const Eigen::Vector3d re = geom[e].area * k * geom[e].grad * g[e];
    for (int a = 0; a < 3; ++a) r[mesh.triangles()[e][a]] += re[a];
  }
  return r;
}

// ---------------------------------------------------------------- time functions

TimeFunction::TimeFunction(std::vector<Piece> pieces) : pieces_(std::move(pieces)) {
  if (pieces_.empty()) throw std::invalid_argument("time function needs at least one piece");
  for (std::size_t i = 0; i < pieces_.size(); ++i) {
    if (!(pieces_[i].t1 > pieces_[i].t0)) throw std::invalid_argument("time function piece with empty interval");
    if (i && pieces_[i].t0 != pieces_[i - 1].t1) throw std::invalid_argument("time function pieces must be contiguous");
  }
}

TimeFunction TimeFunction::constant(double v) { return polynomial(Polynomial::constant(v)); }

TimeFunction TimeFunction::polynomial(const Polynomial& p) {
  TimeFunction f(std::vector<Piece>{{-1.0, 1.0, p}});
  f.global_ = true;
  return f;
}

TimeFunction TimeFunction::schedule(const std::vector<std::pair<double, double>>& knots) {
  if (knots.empty()) throw std::invalid_argument("schedule needs at least one knot");
  if (knots.size() == 1) {
    TimeFunction f = constant(knots[0].second);
    f.global_ = false;
    f.knots_ = knots;
    return f;
  }
  std::vector<Piece> pieces;
  for (std::size_t i = 0; i + 1 < knots.size(); ++i) {
    const auto [ta, va] = knots[i];
    const auto [tb, vb] = knots[i + 1];
    if (!(tb > ta)) throw std::invalid_argument("schedule times must be strictly increasing");
    const double slope = (vb - va) / (tb - ta);
    pieces.push_back({ta, tb, Polynomial({va - slope * ta, slope})});
  }
  TimeFunction f(std::move(pieces));
  f.knots_ = knots;
  return f;
}

double TimeFunction::operator()(double t) const {
  if (global_) return pieces_.front().p(t);
  if (knots_.size() == 1) return knots_[0].second;
  if (t <= pieces_.front().t0) return pieces_.front().p(pieces_.front().t0);
  for (const auto& pc : pieces_)
    if (t <= pc.t1) return pc.p(t);
  return pieces_.back().p(pieces_.back().t1);
}

// Integral from the start of the first piece (or 0 for global polynomials).
double TimeFunction::integral_to(double t) const {
  if (global_) return pieces_.front().p.antiderivative()(t);
  if (knots_.size() == 1) return knots_[0].second * t;
  const double tb = pieces_.front().t0;
  if (t <= tb) return pieces_.front().p(tb) * (t - tb);
  double s = 0.0;
  for (const auto& pc : pieces_) {
    const Polynomial P = pc.p.antiderivative();
    const double hi = std::min(t, pc.t1);
    s += P(hi) - P(pc.t0);
    if (t <= pc.t1) return s;
  }
  const auto& last = pieces_.back();
  return s + last.p(last.t1) * (t - last.t1);
}

double TimeFunction::average(double t0, double t1) const {
  if (!(t1 > t0)) throw std::invalid_argument("time average needs t1 > t0");
  return (integral_to(t1) - integral_to(t0)) / (t1 - t0);
}

bool TimeFunction::operator==(const TimeFunction& o) const {
  if (global_ != o.global_ || knots_ != o.knots_ || pieces_.size() != o.pieces_.size()) return false;
  for (std::size_t i = 0; i < pieces_.size(); ++i)
    if (pieces_[i].t0 != o.pieces_[i].t0 || pieces_[i].t1 != o.pieces_[i].t1 || !(pieces_[i].p == o.pieces_[i].p))
      return false;
  return true;
}

// ---------------------------------------------------------------- loads

namespace {

template <class Weight>
FieldVector assemble_loads_impl(const Mesh2D& mesh, const LoadProgram& loads, Weight&& weight) {
  FieldVector F = FieldVector::Zero(2 * mesh.num_nodes());
  for (const auto& b : loads.body) {
    const Eigen::Vector2d f = b.value * weight(b.time);
    if (f.isZero(0.0)) continue;
    for (int e = 0; e < mesh.num_triangles(); ++e) {
      const double w = mesh.signed_area(e) / 3.0;
      for (int n : mesh.triangles()[e]) {
        F[2 * n] += w * f.x();
        F[2 * n + 1] += w * f.y();
      }
    }
  }
  for (const auto& tl : loads.traction) {
    const int tag = mesh.find_tag(tl.tag);
    if (tag < 0) throw std::invalid_argument("traction on unknown boundary tag '" + tl.tag + "'");
    const Eigen::Vector2d g = tl.value * weight(tl.time);
    for (const auto& be : mesh.boundary_edges()) {
      if (be.tag != tag) continue;
      const double half = 0.5 * (mesh.nodes()[be.b] - mesh.nodes()[be.a]).norm();
      for (int n : {be.a, be.b}) {
        F[2 * n] += half * g.x();
        F[2 * n + 1] += half * g.y();
      }
    }
  }
  return F;
}

}  // namespace

FieldVector assemble_loads(const Mesh2D& mesh, const LoadProgram& loads, double t0, double t1) {
  if (!(t1 > t0)) throw std::invalid_argument("assemble_loads needs t1 > t0");
  return assemble_loads_impl(mesh, loads, [&](const TimeFunction& f) { return f.average(t0, t1); });
}

FieldVector assemble_loads_at(const Mesh2D& mesh, const LoadProgram& loads, double t) {
  return assemble_loads_impl(mesh, loads, [&](const TimeFunction& f) { return f(t); });
}

}  // namespace pfd
