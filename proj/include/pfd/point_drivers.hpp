#pragma once

// Homogeneous (0-d) material-point drivers: one quadrature point of unit
// volume, strain or stress prescribed, damage and plastic updates identical to
// the ones used by the field schemes.

#include <vector>

#include "pfd/material.hpp"
#include "pfd/plastic_law.hpp"

namespace pfd {

struct OnsetSweepResult {
  double onset_stress = 0.0;  // first ramp stress with alpha < alpha0
  bool damaged = false;
  int steps = 0;
};

/// Quasi-static stress ramp |sigma| = rate * t in pure shear (mode II) or
/// pure spherical tension (mode I); the strain is the elastic response at the
/// current damage, the damage follows the staggered (secant) update.
OnsetSweepResult damage_onset_sweep(const MaterialLaw& law, FractureMode mode, double alpha0, double stress_rate,
                                    double tau, int max_steps);

struct RuptureResult {
  double plastic_dissipation = 0.0;
  double damage_dissipation = 0.0;
  double total() const { return plastic_dissipation + damage_dissipation; }
  double final_alpha = 1.0;
  double max_plastic_strain = 0.0;  // Frobenius norm
  bool ruptured = false;
  int steps = 0;
};

/// Strain-driven rupture: the total strain grows as rate * t along a unit
/// (Frobenius) direction, pure shear for mode II or pure dilation for mode I,
/// until alpha reaches 0. Plastic strain and damage follow the staggered
/// plastic scheme with no inertia and no viscosity.
RuptureResult rupture_0d(const MaterialLaw& law, const PlasticLaw& plaw, FractureMode mode, double strain_rate,
                         double tau, int max_steps);

}  // namespace pfd
