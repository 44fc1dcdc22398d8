#pragma once

// P1 assembly of global operators and load vectors.
//
// Vector fields are interleaved per node: dof 2*i is the x component of node
// i and dof 2*i+1 the y component. Scalar fields have one dof per node.

#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "pfd/material.hpp"
#include "pfd/mesh.hpp"
#include "pfd/polynomial.hpp"

namespace pfd {

using SparseOperator = Eigen::SparseMatrix<double>;
using FieldVector = Eigen::VectorXd;

/// How the nodal damage field enters C(alpha), D(alpha) and phi(alpha) inside
/// an element.
///   ElementMean:   one point, alpha at the element centroid (mean of nodes).
///   NodalMidpoint: vertex rule, alpha at each node with weight area/3.
enum class AlphaEvaluation { ElementMean, NodalMidpoint };

const char* to_string(AlphaEvaluation e);
AlphaEvaluation alpha_evaluation_from_string(const std::string& s);

/// Strain of a P1 vector field on one element.
Sym2 element_strain(const ElementGeometry& g, const std::array<int, 3>& tri, const FieldVector& u);

/// 3x6 strain-displacement matrix (Voigt rows xx, yy, 2xy).
Eigen::Matrix<double, 3, 6> element_B(const ElementGeometry& g);

/// Effective isotropic tensor of one element for a nodal-alpha-dependent law.
template <class F>
IsoTensor element_tensor(const std::array<int, 3>& tri, const FieldVector& alpha, AlphaEvaluation eval, F&& tensor_of) {
  if (eval == AlphaEvaluation::ElementMean) return tensor_of((alpha[tri[0]] + alpha[tri[1]] + alpha[tri[2]]) / 3.0);
  IsoTensor s{0.0, 0.0};
  for (int k = 0; k < 3; ++k) s = s + tensor_of(alpha[tri[k]]) * (1.0 / 3.0);
  return s;
}

/// Vector operator sum_e area_e B_e^T T_e B_e for per-element isotropic tensors.
SparseOperator assemble_iso_operator(const Mesh2D& mesh, const std::vector<ElementGeometry>& geom,
                                     const std::vector<IsoTensor>& tensors);

SparseOperator assemble_mass(const Mesh2D& mesh, double rho, bool lumped);
/// Scalar (one dof per node) P1 mass, consistent or lumped.
SparseOperator assemble_scalar_mass(const Mesh2D& mesh, bool lumped);

SparseOperator assemble_stiffness(const Mesh2D& mesh, const FieldVector& alpha, const MaterialLaw& law,
                                  AlphaEvaluation eval = AlphaEvaluation::ElementMean);
SparseOperator assemble_viscosity(const Mesh2D& mesh, const FieldVector& alpha, const MaterialLaw& law,
                                  AlphaEvaluation eval = AlphaEvaluation::ElementMean);

/// Scalar operator sum_e area_e k_e gradN^T gradN.
SparseOperator assemble_scalar_laplacian(const Mesh2D& mesh, const std::vector<ElementGeometry>& geom,
                                         const std::vector<double>& coeff);

/// Gradient of alpha on every element.
std::vector<Eigen::Vector2d> element_gradients(const std::vector<ElementGeometry>& geom, const Mesh2D& mesh,
                                               const FieldVector& alpha);

/// p-Laplacian linearised at alpha: sum_e area kappa |grad alpha|^(p-2) gradN^T gradN.
/// For p = 2 this is kappa times the scalar stiffness.
SparseOperator assemble_damage_gradient(const Mesh2D& mesh, const FieldVector& alpha, double kappa, double p);
/// Energy  sum_e area (kappa/p) |grad alpha|^p.
double damage_gradient_energy(const Mesh2D& mesh, const FieldVector& alpha, double kappa, double p);
/// Residual vector, the derivative of damage_gradient_energy.
FieldVector damage_gradient_residual(const Mesh2D& mesh, const FieldVector& alpha, double kappa, double p);

/// Piecewise-polynomial function of time. Each piece holds a polynomial in
/// absolute time on [t_begin, t_end]; outside the covered range the nearest
/// end value is held constant.
class TimeFunction {
 public:
  struct Piece {
    double t0 = 0.0;
    double t1 = 0.0;
    Polynomial p;
  };

  TimeFunction() : TimeFunction(constant(1.0)) {}
  explicit TimeFunction(std::vector<Piece> pieces);

  static TimeFunction constant(double v);
  /// Polynomial valid for all times.
  static TimeFunction polynomial(const Polynomial& p);
  /// Piecewise-linear interpolation of (t, value) knots, t strictly increasing.
  static TimeFunction schedule(const std::vector<std::pair<double, double>>& knots);

  double operator()(double t) const;
  /// Exact mean value over [t0, t1] (t1 > t0).
  double average(double t0, double t1) const;

  const std::vector<Piece>& pieces() const { return pieces_; }
  bool is_polynomial() const { return global_; }
  /// Knots for schedule functions.
  const std::vector<std::pair<double, double>>& knots() const { return knots_; }

  bool operator==(const TimeFunction& o) const;

 private:
  double integral_to(double t) const;
  std::vector<Piece> pieces_;
  bool global_ = false;
  std::vector<std::pair<double, double>> knots_;
};

struct BodyLoad {
  Eigen::Vector2d value = Eigen::Vector2d::Zero();  // N/m^3
  TimeFunction time;
};

struct TractionLoad {
  std::string tag;
  Eigen::Vector2d value = Eigen::Vector2d::Zero();  // Pa
  TimeFunction time;
};

struct LoadProgram {
  std::vector<BodyLoad> body;
  std::vector<TractionLoad> traction;
  bool empty() const { return body.empty() && traction.empty(); }
};

/// Time-averaged consistent load vector over [t0, t1].
FieldVector assemble_loads(const Mesh2D& mesh, const LoadProgram& loads, double t0, double t1);
/// Same, at a single instant.
FieldVector assemble_loads_at(const Mesh2D& mesh, const LoadProgram& loads, double t);

}  // namespace pfd
