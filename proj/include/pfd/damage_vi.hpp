#pragma once

// Per-step damage variational inequality.
//
// Every scheme reduces the damage update to
//
//   minimise  1/2 x^T Q x - b^T x + sum_i w_i |x_i - c_i|   over  lower <= x <= upper
//
// with Q symmetric positive semidefinite. The l1 term carries the toughness
// part of the rate potential zeta.

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "pfd/discretization.hpp"
#include "pfd/state.hpp"

namespace pfd {

struct DamageSubproblem {
  Eigen::SparseMatrix<double> Q;
  Eigen::VectorXd b;
  Eigen::VectorXd lower;
  Eigen::VectorXd upper;
  Eigen::VectorXd l1_weight;  // may be empty (no l1 term)
  Eigen::VectorXd l1_center;
  Eigen::VectorXd start;      // optional initial guess
  double tol = 1e-12;         // KKT residual tolerance (absolute, scaled by problem size)
  int max_iter = 2000;

  double objective(const Eigen::VectorXd& x) const;
};

struct DamageSolution {
  Eigen::VectorXd alpha_new;
  /// Multiplier of the box constraint: lambda_i in N_[lower,upper](x_i)
  /// (<= 0 on the lower bound, >= 0 on the upper bound, 0 in between).
  Eigen::VectorXd bound_multiplier;
  /// Reaction r_c (nodal, integrated): the part of bound_multiplier that comes
  /// from the [0,1] box itself. Filled by the scheme-level builders.
  Eigen::VectorXd multiplier;
  int iterations = 0;
  double residual = 0.0;
};

/// Minimal-norm KKT residual (infinity norm) of a candidate point.
double kkt_residual(const DamageSubproblem& p, const Eigen::VectorXd& x);

/// Projected-gradient / active-set solver. Deterministic; throws SolverError
/// when the iteration cap is reached.
DamageSolution solve_box_qp(const DamageSubproblem& problem);

/// Per-element energy weights of the damage drive: the alpha-dependent energy
/// on element e is K(a) w[e].vol + G(a) w[e].shear - phi(a).
struct DamageDrive {
  std::vector<StrainWeights> weights;
};

/// Secant: the staggered / explicit form (secant quotients between the new and
/// the old damage, midpoint gradient). Direct: the monolithic form (true
/// energy at the new damage, implicit gradient).
enum class DriveForm { Secant, Direct };

struct DamageStepResult {
  DamageSolution solution;
  /// Dissipation of this step: sum m (gc |d| + 2 nu d^2 / tau) + lambda . d.
  double dissipated = 0.0;
  int outer_iterations = 0;
};

/// Assemble the damage subproblem around a linearisation point (alpha_lin
/// matters only for drives beyond quadratic in alpha or for p > 2).
DamageSubproblem build_damage_problem(const Discretization& d, const DamageDrive& drive,
                                      const Eigen::VectorXd& alpha_old, const Eigen::VectorXd& alpha_lin,
                                      DriveForm form, double tau, double tol);

/// Full damage update with the outer fixed-point loop when needed.
DamageStepResult solve_damage_step(const Discretization& d, const DamageDrive& drive, const Eigen::VectorXd& alpha_old,
                                   DriveForm form, double tau, double tol, int max_outer = 200);

/// Strain weights of the elastic strain on every element: e(u) - pi when pi is
/// present, C1^{-1} varsigma for the explicit scheme.
DamageDrive drive_from_displacement(const Discretization& d, const Eigen::VectorXd& u, const std::vector<Sym2>& pi);
DamageDrive drive_from_protostress(const Discretization& d, const std::vector<Sym2>& varsigma);

/// Subproblem of the given scheme for the step leading to u_new (for the
/// explicit scheme, state.varsigma must already hold the new proto-stress).
DamageSubproblem build_subproblem(const SimState& state, const Eigen::VectorXd& u_new, const Discretization& d,
                                  const SchemeConfig& cfg, SchemeKind kind);

}  // namespace pfd
