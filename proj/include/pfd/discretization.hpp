#pragma once

// Cached, immutable data shared by all steppers of one problem: mesh,
// constitutive law, loads, element geometry, mass matrices and the list of
// displacement dofs fixed by boundary conditions.

#include <optional>
#include <vector>

#include "pfd/assembly.hpp"
#include "pfd/material.hpp"
#include "pfd/mesh.hpp"
#include "pfd/plastic_law.hpp"
#include "pfd/state.hpp"

namespace pfd {

class Discretization {
 public:
  Discretization(Mesh2D mesh, MaterialLaw law, LoadProgram loads = {},
                 AlphaEvaluation eval = AlphaEvaluation::ElementMean, std::optional<PlasticLaw> plastic = {});

  const Mesh2D& mesh() const { return mesh_; }
  const MaterialLaw& law() const { return law_; }
  const LoadProgram& loads() const { return loads_; }
  AlphaEvaluation evaluation() const { return eval_; }
  const std::optional<PlasticLaw>& plastic() const { return plastic_; }
  const std::vector<ElementGeometry>& geometry() const { return geom_; }

  const SparseOperator& mass(bool lumped) const { return lumped ? mass_lumped_ : mass_consistent_; }
  /// Lumped scalar P1 mass without density: area/3 summed per node.
  const Eigen::VectorXd& nodal_area() const { return nodal_area_; }
  /// Scalar stiffness sum_e area gradN^T gradN.
  const SparseOperator& laplacian() const { return laplacian_; }

  /// dof -> true when the dof is eliminated (homogeneous Dirichlet).
  const std::vector<bool>& constrained() const { return constrained_; }
  const std::vector<int>& free_dofs() const { return free_dofs_; }
  int num_dofs() const { return 2 * mesh_.num_nodes(); }

  /// Zero the constrained components of a vector field.
  void apply_constraints(Eigen::VectorXd& x) const;

  Sym2 strain(int e, const Eigen::VectorXd& u) const { return element_strain(geom_[e], mesh_.triangles()[e], u); }

  /// Per-element tensor of C(alpha) or D(alpha) with the chosen alpha evaluation.
  std::vector<IsoTensor> stiffness_tensors(const Eigen::VectorXd& alpha) const;
  std::vector<IsoTensor> viscosity_tensors(const Eigen::VectorXd& alpha) const;
  SparseOperator stiffness(const Eigen::VectorXd& alpha) const;
  SparseOperator viscosity(const Eigen::VectorXd& alpha) const;

  /// Damage energy -phi integrated with the chosen alpha evaluation.
  double damage_potential_energy(const Eigen::VectorXd& alpha) const;

  /// Time-averaged load vector over [t0, t1] (zero when there are no loads).
  Eigen::VectorXd loads(double t0, double t1) const;

  /// Smallest element size (twice the inradius).
  double h_min() const;

 private:
  Mesh2D mesh_;
  MaterialLaw law_;
  LoadProgram loads_;
  AlphaEvaluation eval_;
  std::optional<PlasticLaw> plastic_;
  std::vector<ElementGeometry> geom_;
  SparseOperator mass_consistent_, mass_lumped_, laplacian_;
  Eigen::VectorXd nodal_area_;
  std::vector<bool> constrained_;
  std::vector<int> free_dofs_;
};

/// Solve A x = b on the free dofs (constrained entries of x are 0).
Eigen::VectorXd solve_constrained(const SparseOperator& A, const Eigen::VectorXd& b, const Discretization& d,
                                  const SchemeConfig& cfg);

}  // namespace pfd
