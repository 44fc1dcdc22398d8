#pragma once

// Constitutive laws of the damageable Kelvin-Voigt solid.
//
// Damage convention: alpha = 1 is intact material, alpha = 0 is fully
// damaged; damaging means alpha decreasing. All laws share the structure
//
//   phi(e, alpha) = [alpha-dependent elastic energy] - phi_dam(alpha)
//
// where phi_dam is the damage energy ("phi_fun"); for the quadratic laws the
// elastic part is 1/2 C(alpha) e:e with C(alpha) isotropic with 2-D bulk and
// shear moduli K(alpha), G(alpha) given as polynomials.

#include <optional>
#include <stdexcept>
#include <string>

#include "pfd/polynomial.hpp"
#include "pfd/tensor.hpp"

namespace pfd {

class MaterialError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class LawKind { LinearDamage, ModeSensitive, AT2, AT1 };
enum class Regime { Unidirectional, Healing };
enum class FractureMode { I, II };

const char* to_string(LawKind k);
const char* to_string(Regime r);
LawKind law_kind_from_string(const std::string& s);
Regime regime_from_string(const std::string& s);

struct MaterialLaw {
  LawKind kind = LawKind::LinearDamage;
  double rho = 1.0;          // kg/m^3
  Polynomial K_fun;          // bulk modulus K(alpha), Pa
  Polynomial G_fun;          // shear modulus G(alpha), Pa
  Polynomial phi_fun;        // damage energy phi_dam(alpha), J/m^3
  double eps_reg = 0.0;      // regularisation of the mode-sensitive law
  double gc = 0.0;           // fracture toughness, J/m^2
  double eps_pf = 0.0;       // phase-field length, m
  double eps0 = 1.0;         // reference length, m
  double kappa = 1.0;        // damage-gradient coefficient
  double p_grad = 2.0;       // gradient exponent
  double nu_visc = 0.0;      // damage rate viscosity, Pa s
  IsoTensor D0{0.0, 0.0};    // residual viscosity, Pa s
  double chi = 0.0;          // relaxation time for D(alpha) = D0 + chi C(alpha), s
  Regime regime = Regime::Unidirectional;

  /// Set for laws of the form C(alpha) = degradation(alpha) * C1.
  std::optional<IsoTensor> C1;
  Polynomial degradation;

  bool is_phase_field() const { return kind == LawKind::AT1 || kind == LawKind::AT2; }
  bool quadratic_in_strain() const { return kind != LawKind::ModeSensitive; }

  /// Toughness entering the rate potential zeta; phase-field laws carry the
  /// toughness in the stored energy instead, so this is 0 for them.
  double zeta_gc() const { return is_phase_field() ? 0.0 : gc; }

  /// Throws MaterialError listing every violated invariant.
  void validate() const;
};

/// Ambrosio-Tortorelli presets with C(alpha) = ((eps/eps0)^2 + alpha^2) C1.
///   AT2: phi_dam(alpha) = -gc (1-alpha)^2 / (2 eps),  kappa = eps gc
///   AT1: phi_dam(alpha) = -3 gc (1-alpha) / (8 eps),  kappa = 3 gc eps / 4
MaterialLaw make_phase_field_law(LawKind kind, double rho, IsoTensor C1, double gc, double eps, double eps0);

/// Degradation (polynomial c with C(alpha) = c(alpha) C1) for laws where the
/// moduli are proportional; throws for laws that do not factor this way.
std::pair<IsoTensor, Polynomial> scalar_degradation(const MaterialLaw& law);

struct StrainSplit {
  Sym2 sph_plus = Sym2::Zero();
  Sym2 sph_minus = Sym2::Zero();
  Sym2 dev = Sym2::Zero();
};

StrainSplit strain_decompose(const Sym2& e);

double stored_energy(const Sym2& e, double alpha, const MaterialLaw& law);
Sym2 stress(const Sym2& e, double alpha, const MaterialLaw& law);
/// Partial derivative of stored_energy with respect to alpha.
double driving_force(const Sym2& e, double alpha, const MaterialLaw& law);

/// Weights (w_K, w_G) such that the alpha-dependent elastic energy is
/// K(alpha) w_K + G(alpha) w_G (exact for every law, including the
/// mode-sensitive one, at fixed strain).
StrainWeights damage_weights(const Sym2& e, const MaterialLaw& law);

IsoTensor elastic_tensor(double alpha, const MaterialLaw& law);
IsoTensor elastic_tensor_derivative(double alpha, const MaterialLaw& law);
IsoTensor viscosity_tensor(double alpha, const MaterialLaw& law);

/// Secant quotients (C(a) - C(b)) / (a - b) and (phi(a) - phi(b)) / (a - b),
/// equal to the derivative when a == b.
IsoTensor secant_C(double a, double b, const MaterialLaw& law);
double secant_phi(double a, double b, const MaterialLaw& law);

/// Stress magnitude (Frobenius norm of the deviatoric or tensile spherical
/// stress) at which damage starts from alpha0 under pure shear or pure tension.
double effective_fracture_stress(FractureMode mode, double alpha0, const MaterialLaw& law);

/// alpha_dot * d zeta(alpha_dot) = gc |alpha_dot| + 2 nu alpha_dot^2.
double dissipation_rate(double alpha_dot, const MaterialLaw& law);

/// Throws MaterialError when alpha leaves [0,1] by more than 1e-9.
void check_alpha(double alpha);

}  // namespace pfd
