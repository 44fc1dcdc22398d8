#include "pfd/point_drivers.hpp"

#include <cmath>

#include "pfd/damage_vi.hpp"
#include "pfd/plasticity.hpp"

namespace pfd {

namespace {

struct PointDamage {
  double alpha = 1.0;
  double dissipated = 0.0;
};

// One staggered damage update of a unit-volume point with fixed strain weights.
PointDamage point_damage_step(const MaterialLaw& law, const StrainWeights& w, double ao, double tau) {
  const Polynomial psi = (law.K_fun * w.vol + law.G_fun * w.shear - law.phi_fun).secant_in_first(ao).antiderivative();
  DamageSubproblem p;
  double a2 = psi.coeff(2), a1 = psi.coeff(1);
  if (psi.degree() > 2 || a2 < 0.0) {
    // Higher-degree laws: linear model at the old value (small steps only).
    a1 = psi.derivative()(ao);
    a2 = 0.0;
  }
  const double q = 2.0 * a2 + 2.0 * law.nu_visc / tau;
  Eigen::SparseMatrix<double> Q(1, 1);
  if (q != 0.0) Q.insert(0, 0) = q;
  p.Q = Q;
  p.b = Eigen::VectorXd::Constant(1, -a1 + 2.0 * law.nu_visc * ao / tau);
  p.lower = Eigen::VectorXd::Zero(1);
  p.upper = Eigen::VectorXd::Constant(1, law.regime == Regime::Unidirectional ? ao : 1.0);
  if (law.zeta_gc() > 0.0) {
    p.l1_weight = Eigen::VectorXd::Constant(1, law.zeta_gc());
    p.l1_center = Eigen::VectorXd::Constant(1, ao);
  }
  p.start = Eigen::VectorXd::Constant(1, ao);
  p.tol = 1e-14;
  const DamageSolution s = solve_box_qp(p);
  PointDamage out;
  out.alpha = s.alpha_new[0];
  const double d = out.alpha - ao;
  out.dissipated = law.zeta_gc() * std::abs(d) + 2.0 * law.nu_visc * d * d / tau + s.bound_multiplier[0] * d;
  return out;
}

Sym2 unit_direction(FractureMode mode) {
  if (mode == FractureMode::II) return from_dev_coords(Eigen::Vector2d(0.0, 1.0));
  return Sym2::Identity() / std::sqrt(2.0);
}

}  // namespace

OnsetSweepResult damage_onset_sweep(const MaterialLaw& law, FractureMode mode, double alpha0, double stress_rate,
                                    double tau, int max_steps) {
  check_alpha(alpha0);
  OnsetSweepResult r;
  double alpha = alpha0;
  const Sym2 dir = unit_direction(mode);
  for (int k = 1; k <= max_steps; ++k) {
    const double smag = stress_rate * tau * k;
    // Elastic strain carrying the stress magnitude at the current damage.
    const double modulus = mode == FractureMode::II ? 2.0 * law.G_fun(alpha) : 2.0 * law.K_fun(alpha);
    const Sym2 e = dir * (smag / modulus);
    const PointDamage pd = point_damage_step(law, damage_weights(e, law), alpha, tau);
    alpha = pd.alpha;
    r.steps = k;
    if (alpha < alpha0) {
      r.onset_stress = smag;
      r.damaged = true;
      break;
    }
  }
  return r;
}

RuptureResult rupture_0d(const MaterialLaw& law, const PlasticLaw& plaw, FractureMode mode, double strain_rate,
                         double tau, int max_steps) {
  RuptureResult r;
  const Sym2 dir = unit_direction(mode);
  double alpha = 1.0;
  Sym2 pi = Sym2::Zero();
  const double sqrt2 = std::sqrt(2.0);
  for (int k = 1; k <= max_steps; ++k) {
    const Sym2 e_old = dir * (strain_rate * tau * (k - 1));
    const Sym2 e_new = dir * (strain_rate * tau * k);
    const double Gc = law.G_fun(alpha);
    // Trial stress of the staggered plastic scheme without viscosity.
    const Sym2 trial = 2.0 * Gc * (deviator(0.5 * (e_old + e_new)) - pi);
    const ReturnMapResult rm = return_map(trial, pi, plaw, tau, alpha, Gc);
    const double dp = (rm.pi_new - pi).norm();
    r.plastic_dissipation += sqrt2 * std::max(0.0, plaw.sigma_yld_fun(alpha)) * dp + 2.0 * plaw.G_nh * dp * dp / tau;
    pi = rm.pi_new;
    r.max_plastic_strain = std::max(r.max_plastic_strain, pi.norm());

    const PointDamage pd = point_damage_step(law, damage_weights(e_new - pi, law), alpha, tau);
    r.damage_dissipation += pd.dissipated;
    alpha = pd.alpha;
    r.steps = k;
    if (alpha <= 0.0) {
      r.ruptured = true;
      break;
    }
  }
  r.final_alpha = alpha;
  return r;
}

}  // namespace pfd
