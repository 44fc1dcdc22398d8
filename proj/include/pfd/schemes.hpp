#pragma once

// Time steppers.
//
//   staggered:  mechanics with alpha frozen at the old value (Crank-Nicolson),
//               then the damage VI with secant quotients.
//   monolithic: critical point of the incremental potential by alternating
//               minimisation over u and alpha.
//   explicit:   velocity / proto-stress 3-step scheme with lumped mass.

#include <limits>
#include <vector>

#include "pfd/damage_vi.hpp"
#include "pfd/discretization.hpp"
#include "pfd/state.hpp"

namespace pfd {

struct StepReport {
  int inner_iterations = 0;
  std::vector<double> potential_history;  // monolithic only
  double kkt_residual = 0.0;
  int qp_iterations = 0;
  int newton_iterations = 0;              // plastic step only
  Eigen::VectorXd reaction;               // r_c of the damage step
};

/// Initial state: constrained dofs zeroed, proto-stress C1 e(u0) when
/// with_protostress, zero plastic strain when the discretisation has a
/// plastic law, ledger energies evaluated (kinetic energy with the lumped
/// mass when with_protostress or lumped_mass).
SimState make_initial_state(const Discretization& d, const Eigen::VectorXd& u0, const Eigen::VectorXd& v0,
                            const Eigen::VectorXd& alpha0, bool with_protostress = false, bool lumped_mass = false);

SimState step_staggered(const SimState& s, const Discretization& d, const SchemeConfig& cfg,
                        StepReport* report = nullptr);
SimState step_monolithic(const SimState& s, const Discretization& d, const SchemeConfig& cfg,
                         StepReport* report = nullptr);
SimState step_explicit(const SimState& s, const Discretization& d, const SchemeConfig& cfg,
                       StepReport* report = nullptr);

/// Dispatch on cfg.scheme (the plastic staggered step when d has a plastic law).
SimState step(const SimState& s, const Discretization& d, const SchemeConfig& cfg, StepReport* report = nullptr);

/// Incremental potential of the monolithic scheme at (u_trial, alpha_trial)
/// for the step starting at s; +infinity when alpha_trial violates the regime.
double incremental_potential(const Eigen::VectorXd& u_trial, const Eigen::VectorXd& alpha_trial, const SimState& s,
                             const Discretization& d, const SchemeConfig& cfg);

/// h_min / c_P with h = twice the smallest inradius and c_P = sqrt((K(1)+G(1))/rho).
double cfl_timestep(const Mesh2D& mesh, const MaterialLaw& law);

/// Displacement leapfrog (Verlet) with frozen alpha and lumped mass; a
/// reference integrator for tests, not coupled to damage.
SimState step_leapfrog_reference(const SimState& s, const Discretization& d, const SchemeConfig& cfg);

}  // namespace pfd
