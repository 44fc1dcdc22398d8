#include "pfd/material.hpp"

#include <cmath>
#include <sstream>
#include <vector>

#include <Eigen/Eigenvalues>

namespace pfd {

const char* to_string(LawKind k) {
  switch (k) {
    case LawKind::LinearDamage: return "linear-damage";
    case LawKind::ModeSensitive: return "mode-sensitive";
    case LawKind::AT2: return "at2-phasefield";
    case LawKind::AT1: return "at1-phasefield";
  }
  return "linear-damage";
}

const char* to_string(Regime r) { return r == Regime::Healing ? "healing" : "unidirectional"; }

LawKind law_kind_from_string(const std::string& s) {
  if (s == "linear-damage") return LawKind::LinearDamage;
  if (s == "mode-sensitive") return LawKind::ModeSensitive;
  if (s == "at2" || s == "at2-phasefield") return LawKind::AT2;
  if (s == "at1" || s == "at1-phasefield") return LawKind::AT1;
  throw MaterialError("unknown law '" + s + "'");
}

Regime regime_from_string(const std::string& s) {
  if (s == "unidirectional") return Regime::Unidirectional;
  if (s == "healing") return Regime::Healing;
  throw MaterialError("unknown damage regime '" + s + "'");
}

void check_alpha(double alpha) {
  if (!(alpha >= -1e-9 && alpha <= 1.0 + 1e-9)) {
    std::ostringstream os;
    os << "damage variable out of range: alpha = " << alpha;
    throw MaterialError(os.str());
  }
}

namespace {

bool spd_or_zero(const IsoTensor& t) {
  if (t.K == 0.0 && t.G == 0.0) return true;
  return t.K > 0.0 && t.G > 0.0;
}

}  // namespace

void MaterialLaw::validate() const {
  std::vector<std::string> issues;
  if (!(rho > 0.0)) issues.push_back("rho must be positive");
  if (!spd_or_zero(D0)) issues.push_back("D0 must be positive definite (or zero)");
  if (chi < 0.0) issues.push_back("chi must be non-negative");
  if (nu_visc < 0.0) issues.push_back("nu_visc must be non-negative");
  if (gc < 0.0) issues.push_back("gc must be non-negative");
  if (!(kappa > 0.0)) issues.push_back("kappa must be positive");
  if (!(p_grad >= 2.0)) issues.push_back("p_grad must be at least 2");
  if (kind == LawKind::ModeSensitive && regime == Regime::Healing && !(eps_reg > 0.0))
    issues.push_back("eps_reg > 0 is required for the mode-sensitive law with healing");
  if (eps_reg < 0.0) issues.push_back("eps_reg must be non-negative");
  if (is_phase_field()) {
    if (!(eps_pf > 0.0)) issues.push_back("eps_pf must be positive");
    if (!(eps0 > 0.0)) issues.push_back("eps0 must be positive");
  }

  // Sample the moduli on [0,1].
  bool neg = false, dec = false;
  double kprev = K_fun(0.0), gprev = G_fun(0.0);
  const double scale = 1e-12 * std::max({1.0, std::abs(K_fun(1.0)), std::abs(G_fun(1.0))});
  for (int i = 0; i <= 200; ++i) {
    const double a = i / 200.0;
    const double k = K_fun(a), g = G_fun(a);
    if (k < -scale || g < -scale) neg = true;
    if (k < kprev - scale || g < gprev - scale) dec = true;
    kprev = k;
    gprev = g;
  }
  if (neg) issues.push_back("K(alpha) and G(alpha) must be non-negative on [0,1]");
  if (dec) issues.push_back("K(alpha) and G(alpha) must be non-decreasing on [0,1]");
  if (!(K_fun(1.0) > 0.0) || !(G_fun(1.0) > 0.0)) issues.push_back("undamaged moduli K(1), G(1) must be positive");

  if (!issues.empty()) {
    std::string msg = "invalid material law:";
    for (const auto& s : issues) msg += "\n  - " + s;
    throw MaterialError(msg);
  }
}

MaterialLaw make_phase_field_law(LawKind kind, double rho, IsoTensor C1, double gc, double eps, double eps0) {
  if (kind != LawKind::AT1 && kind != LawKind::AT2) throw MaterialError("phase-field preset must be at1 or at2");
  if (!(eps > 0.0) || !(eps0 > 0.0)) throw MaterialError("phase-field lengths must be positive");
  MaterialLaw law;
  law.kind = kind;
  law.rho = rho;
  law.gc = gc;
  law.eps_pf = eps;
  law.eps0 = eps0;
  const double r = eps / eps0;
  law.degradation = Polynomial({r * r, 0.0, 1.0});
  law.C1 = C1;
  law.K_fun = law.degradation * C1.K;
  law.G_fun = law.degradation * C1.G;
  if (kind == LawKind::AT2) {
    // -gc (1 - a)^2 / (2 eps)
    const double s = -gc / (2.0 * eps);
    law.phi_fun = Polynomial({s, -2.0 * s, s});
    law.kappa = eps * gc;
  } else {
    const double s = -3.0 * gc / (8.0 * eps);
    law.phi_fun = Polynomial({s, -s});
    law.kappa = 0.75 * gc * eps;
  }
  return law;
}

std::pair<IsoTensor, Polynomial> scalar_degradation(const MaterialLaw& law) {
  if (law.C1) return {*law.C1, law.degradation};
  const double K1 = law.K_fun(1.0), G1 = law.G_fun(1.0);
  if (!(K1 > 0.0) || !(G1 > 0.0)) throw MaterialError("scalar degradation needs positive undamaged moduli");
  const Polynomial c = law.K_fun * (1.0 / K1);
  const Polynomial cg = law.G_fun * (1.0 / G1);
  const std::size_t n = std::max(c.coeffs().size(), cg.coeffs().size());
  for (std::size_t i = 0; i < n; ++i)
    if (std::abs(c.coeff(i) - cg.coeff(i)) > 1e-12 * (1.0 + std::abs(c.coeff(i))))
      throw MaterialError("law does not have a scalar degradation: K(alpha) and G(alpha) are not proportional");
  return {IsoTensor{K1, G1}, c};
}

StrainSplit strain_decompose(const Sym2& e) {
  StrainSplit s;
  const double tr = e.trace();
  const Sym2 sph = 0.5 * tr * Sym2::Identity();
  if (tr > 0.0)
    s.sph_plus = sph;
  else
    s.sph_minus = sph;
  s.dev = e - sph;
  return s;
}

IsoTensor elastic_tensor(double alpha, const MaterialLaw& law) { return {law.K_fun(alpha), law.G_fun(alpha)}; }

IsoTensor elastic_tensor_derivative(double alpha, const MaterialLaw& law) {
  return {law.K_fun.derivative()(alpha), law.G_fun.derivative()(alpha)};
}

IsoTensor viscosity_tensor(double alpha, const MaterialLaw& law) {
  return law.D0 + elastic_tensor(alpha, law) * law.chi;
}

IsoTensor secant_C(double a, double b, const MaterialLaw& law) {
  return {law.K_fun.secant(a, b), law.G_fun.secant(a, b)};
}

double secant_phi(double a, double b, const MaterialLaw& law) { return law.phi_fun.secant(a, b); }

StrainWeights damage_weights(const Sym2& e, const MaterialLaw& law) {
  if (law.kind != LawKind::ModeSensitive) return strain_weights(e);
  const double t = e.trace();
  const double tp = std::max(t, 0.0);
  const Sym2 d = deviator(e);
  const double s = ddot(d, d);
  const double eps = law.eps_reg;
  return {0.5 * tp * tp / std::sqrt(1.0 + eps * t * t), s / std::sqrt(1.0 + eps * s)};
}

double stored_energy(const Sym2& e, double alpha, const MaterialLaw& law) {
  check_alpha(alpha);
  const StrainWeights w = damage_weights(e, law);
  double out = law.K_fun(alpha) * w.vol + law.G_fun(alpha) * w.shear - law.phi_fun(alpha);
  if (law.kind == LawKind::ModeSensitive) {
    const double tm = std::min(e.trace(), 0.0);
    out += 0.5 * law.K_fun(1.0) * tm * tm;
  }
  return out;
}

Sym2 stress(const Sym2& e, double alpha, const MaterialLaw& law) {
  check_alpha(alpha);
  if (law.kind != LawKind::ModeSensitive) return elastic_tensor(alpha, law).apply(e);
  const double t = e.trace();
  const double eps = law.eps_reg;
  const Sym2 d = deviator(e);
  const double s = ddot(d, d);
  double dt;  // d/dt of the spherical energy
  if (t > 0.0) {
    const double r2 = 1.0 + eps * t * t;
    dt = law.K_fun(alpha) * t * (2.0 + eps * t * t) / (2.0 * r2 * std::sqrt(r2));
  } else {
    dt = law.K_fun(1.0) * t;
  }
  const double q = 1.0 + eps * s;
  const double ds = law.G_fun(alpha) * (1.0 + 0.5 * eps * s) / (q * std::sqrt(q));
  return dt * Sym2::Identity() + 2.0 * ds * d;
}

double driving_force(const Sym2& e, double alpha, const MaterialLaw& law) {
  check_alpha(alpha);
  const StrainWeights w = damage_weights(e, law);
  return law.K_fun.derivative()(alpha) * w.vol + law.G_fun.derivative()(alpha) * w.shear -
         law.phi_fun.derivative()(alpha);
}

double effective_fracture_stress(FractureMode mode, double alpha0, const MaterialLaw& law) {
  check_alpha(alpha0);
  // Onset: K' w_K + G' w_G - phi_dam' = gc of the rate potential.
  const double gc = law.zeta_gc() + law.phi_fun.derivative()(alpha0);
  if (!(gc > 0.0)) return 0.0;
  if (mode == FractureMode::II) {
    const double dG = law.G_fun.derivative()(alpha0);
    if (!(dG > 0.0)) throw MaterialError("no damage drive in this mode");
    return law.G_fun(alpha0) * std::sqrt(4.0 * gc / dG);
  }
  const double dK = law.K_fun.derivative()(alpha0);
  if (!(dK > 0.0)) throw MaterialError("no damage drive in this mode");
  return law.K_fun(alpha0) * std::sqrt(2.0 * kDim * gc / dK);
}

double dissipation_rate(double alpha_dot, const MaterialLaw& law) {
  if (law.regime == Regime::Unidirectional && alpha_dot > 1e-12)
    throw MaterialError("healing rate in the unidirectional regime");
  return law.zeta_gc() * std::abs(alpha_dot) + 2.0 * law.nu_visc * alpha_dot * alpha_dot;
}

}  // namespace pfd
