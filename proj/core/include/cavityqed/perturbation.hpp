#pragma once

// First-order shape perturbation of a cavity resonance by protruding coaxial
// inner conductors:
//
//   omega = omega' (1 + numerator / denominator)
//   numerator   = sum over probes of integral_dV (|H_k|^2 - eps_r |E_k|^2)
//   denominator = integral_V (|H_k|^2 + eps_r |E_k|^2) = 2
//
// Both integrals use the normalized mode functions; the physical factors
// mu0 |H|^2 and eps |E|^2 reduce to |H_k|^2 and eps_r |E_k|^2 because the
// electric and magnetic amplitudes of a standing wave carry equal energy.

#include <span>

#include "cavityqed/cavity_em.hpp"

namespace cavityqed {

struct PerturbationResult {
  double omega_unperturbed = 0.0;  // rad/s
  double omega_perturbed = 0.0;    // rad/s
  double delta_energy_numerator = 0.0;
  double total_energy_denominator = 0.0;

  double relative_shift() const { return delta_energy_numerator / total_energy_denominator; }
};

/// Midpoint grid over one probe cylinder (polar cross-section times axis).
struct ProbeQuadrature {
  int n_rho = 16;
  int n_phi = 32;
  int n_axial = 32;
};

/// Throws DomainError if two inner-conductor cylinders overlap or a probe is invalid.
void validate_probes(const CavityGeometry& geom, std::span<const CoaxProbe> probes);

/// Samples the fields at each probe tip and multiplies by the probe volume.
PerturbationResult perturbed_frequency_tip(const CavityMode& mode, std::span<const CoaxProbe> probes);

/// Integrates the unperturbed energy densities over each probe cylinder.
PerturbationResult perturbed_frequency_quadrature(const CavityMode& mode,
                                                  std::span<const CoaxProbe> probes,
                                                  const ProbeQuadrature& grid = {});

}  // namespace cavityqed
