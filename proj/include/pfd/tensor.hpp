#pragma once

// Small-strain tensor helpers for the planar (d = 2) setting.
//
// Symmetric 2x2 tensors are plain Eigen::Matrix2d. Voigt vectors use the
// engineering convention [xx, yy, 2xy] for strains and [xx, yy, xy] for
// stresses, so that stress.dot(strain) equals the double contraction.

#include <Eigen/Dense>

namespace pfd {

using Sym2 = Eigen::Matrix2d;
using Voigt = Eigen::Vector3d;

inline constexpr int kDim = 2;

inline double ddot(const Sym2& a, const Sym2& b) { return (a.array() * b.array()).sum(); }

inline Sym2 deviator(const Sym2& e) { return e - 0.5 * e.trace() * Sym2::Identity(); }

inline Voigt strain_to_voigt(const Sym2& e) { return {e(0, 0), e(1, 1), 2.0 * e(0, 1)}; }

inline Sym2 voigt_to_strain(const Voigt& v) {
  Sym2 e;
  e << v(0), 0.5 * v(2), 0.5 * v(2), v(1);
  return e;
}

inline Voigt stress_to_voigt(const Sym2& s) { return {s(0, 0), s(1, 1), s(0, 1)}; }

inline Sym2 voigt_to_stress(const Voigt& v) {
  Sym2 s;
  s << v(0), v(2), v(2), v(1);
  return s;
}

/// Coordinates of a trace-free symmetric tensor in the orthonormal basis
/// {diag(1,-1)/sqrt2, offdiag(1,1)/sqrt2}; Frobenius norms are preserved.
inline Eigen::Vector2d dev_coords(const Sym2& e) {
  constexpr double r = 0.70710678118654752440;
  return {r * (e(0, 0) - e(1, 1)), 2.0 * r * e(0, 1)};
}

inline Sym2 from_dev_coords(const Eigen::Vector2d& q) {
  constexpr double r = 0.70710678118654752440;
  Sym2 e;
  e << r * q(0), r * q(1), r * q(1), -r * q(0);
  return e;
}

/// Isotropic 4th-order tensor  C e = K tr(e) I + 2 G dev(e)  with the 2-D
/// bulk modulus K and shear modulus G, so that 1/2 C e:e = K/2 (tr e)^2 + G |dev e|^2.
struct IsoTensor {
  double K = 0.0;
  double G = 0.0;

  Sym2 apply(const Sym2& e) const { return K * e.trace() * Sym2::Identity() + 2.0 * G * deviator(e); }

  double quad(const Sym2& e) const {
    const double tr = e.trace();
    const Sym2 d = deviator(e);
    return K * tr * tr + 2.0 * G * ddot(d, d);
  }

  /// Inverse map for K, G > 0.
  Sym2 apply_inverse(const Sym2& s) const {
    return s.trace() / (4.0 * K) * Sym2::Identity() + deviator(s) / (2.0 * G);
  }

  Eigen::Matrix3d voigt() const {
    Eigen::Matrix3d m;
    m << K + G, K - G, 0.0, K - G, K + G, 0.0, 0.0, 0.0, G;
    return m;
  }

  IsoTensor operator+(const IsoTensor& o) const { return {K + o.K, G + o.G}; }
  IsoTensor operator*(double s) const { return {K * s, G * s}; }
};

/// Energy weights of a strain for an isotropic quadratic form:
/// 1/2 C e:e = K * vol + G * shear.
struct StrainWeights {
  double vol = 0.0;    // (tr e)^2 / 2
  double shear = 0.0;  // |dev e|^2
};

inline StrainWeights strain_weights(const Sym2& e) {
  const double tr = e.trace();
  const Sym2 d = deviator(e);
  return {0.5 * tr * tr, ddot(d, d)};
}

}  // namespace pfd
