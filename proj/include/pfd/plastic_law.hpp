#pragma once

#include "pfd/polynomial.hpp"

namespace pfd {

/// Parameters of the deviatoric plasticity extension. Plastic quantities use
/// the engineering strain norm |p| = sqrt(2) |p|_F, so that for simple shear
/// with engineering strain gamma, |p| = |gamma|.
struct PlasticLaw {
  double H = 0.0;             // hardening modulus, Pa
  double G_nh = 0.0;          // Norton-Hoff viscosity, Pa s
  Polynomial sigma_yld_fun;   // yield stress sigma_yld(alpha), Pa
  double kappa1 = 0.0;        // plastic-gradient coefficient (experimental)

  /// Throws std::invalid_argument unless H > 0 or G_nh > 0, sigma_yld >= 0 on
  /// [0,1], kappa1 >= 0.
  void validate() const;
};

}  // namespace pfd
