#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "pfd/tensor.hpp"

namespace pfd {

/// Raised when a linear solve, QP or inner iteration fails to converge.
class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Energy components of one mesh point. Stored and kinetic entries are
/// snapshots; dissipated_* and external_work accumulate from the start of the run.
struct EnergyLedger {
  double kinetic = 0.0;
  double stored_elastic = 0.0;
  double stored_damage = 0.0;  // -phi(alpha) plus gradient energy
  double stored_plastic = 0.0;
  double dissipated_viscous = 0.0;
  double dissipated_damage = 0.0;
  double dissipated_plastic = 0.0;
  double external_work = 0.0;

  double total_energy() const { return kinetic + stored_elastic + stored_damage + stored_plastic; }
  double total_dissipation() const { return dissipated_viscous + dissipated_damage + dissipated_plastic; }
};

struct SimState {
  double t = 0.0;
  long step = 0;
  Eigen::VectorXd u;                // interleaved nodal displacement
  Eigen::VectorXd v;                // interleaved nodal velocity
  Eigen::VectorXd alpha;            // nodal damage
  std::vector<Sym2> pi;             // per-element plastic strain (empty when unused)
  std::vector<Sym2> varsigma;       // per-element proto-stress (empty when unused)
  EnergyLedger ledger;
};

enum class SchemeKind { Monolithic, Staggered, Explicit };
enum class LinearSolverKind { Direct, CG };

const char* to_string(SchemeKind k);
SchemeKind scheme_kind_from_string(const std::string& s);
const char* to_string(LinearSolverKind k);
LinearSolverKind linear_solver_from_string(const std::string& s);

struct SchemeConfig {
  SchemeKind scheme = SchemeKind::Staggered;
  double tau = 0.0;
  double newton_tol = 1e-10;
  double qp_tol = 1e-12;
  int max_inner_iters = 200;
  double cfl_safety = 0.5;
  bool lumped = false;
  LinearSolverKind linear_solver = LinearSolverKind::Direct;
  double linear_tol = 1e-12;

  /// Throws std::invalid_argument on tau <= 0, non-positive tolerances or
  /// cfl_safety outside (0, 1].
  void validate() const;
};

}  // namespace pfd
