#pragma once

// Deviatoric plasticity coupled to damage.
//
// The plastic strain pi is piecewise constant and trace-free. Plastic terms
// use the engineering norm |p| = sqrt(2)|p|_F (see PlasticLaw), so in
// Frobenius terms the dissipation is sqrt(2) sigma_yld |dpi|_F, the hardening
// energy H |pi|_F^2 and the Norton-Hoff rate 2 G_nh |dpi|_F^2 / tau.

#include <vector>

#include "pfd/discretization.hpp"
#include "pfd/plastic_law.hpp"
#include "pfd/schemes.hpp"

namespace pfd {

struct ReturnMapResult {
  Sym2 pi_new = Sym2::Zero();
  bool active = false;
  /// d(dpi coords)/d(trial coords), 2x2, in the orthonormal deviatoric basis.
  Eigen::Matrix2d jacobian = Eigen::Matrix2d::Zero();
};

/// Solves, for the increment dpi = pi_new - pi_old,
///
///   sqrt2 s_y Dir(dpi) + 2H (pi_old + dpi/2) + (2 G_nh / tau + coupling) dpi  ∋  trial
///
/// where s_y = sigma_yld(alpha_old) and trial is a trace-free stress. The
/// coupling term is the extra stiffness of stresses that depend on pi
/// (0 for the bare inclusion).
ReturnMapResult return_map(const Sym2& trial_dev_stress, const Sym2& pi_old, const PlasticLaw& plaw, double tau,
                           double alpha_old, double coupling = 0.0);

/// Residual of the inclusion above (Frobenius norm of the distance of the
/// left-hand side set to the trial stress).
double return_map_residual(const Sym2& trial_dev_stress, const Sym2& pi_old, const Sym2& pi_new,
                           const PlasticLaw& plaw, double tau, double alpha_old, double coupling = 0.0);

/// Extra shear-mode dissipation sigma_yld (sqrt(2 G gc) - sigma_yld) / H,
/// with G = G(1) and sigma_yld = sigma_yld(1); throws unless
/// sqrt(G gc / 2) < sigma_yld <= sqrt(2 G gc).
double mode_ii_extra_dissipation(const PlasticLaw& plaw, const MaterialLaw& law);

/// Staggered step with plasticity: (u, v, pi) from the coupled mechanical
/// system with alpha frozen, then the damage VI driven by e(u) - pi.
SimState step_staggered_plastic(const SimState& s, const Discretization& d, const SchemeConfig& cfg,
                                StepReport* report = nullptr);

/// Two-point approximation of (kappa1/2) int |grad pi|^2 over interior edges
/// (experimental, used when kappa1 > 0).
double plastic_gradient_energy(const Discretization& d, const std::vector<Sym2>& pi);

}  // namespace pfd
