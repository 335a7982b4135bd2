#pragma once

// Cavity-to-coax coupling and the two-port input-output response of a single
// cavity mode.

#include <complex>

#include <Eigen/Core>

#include "cavityqed/cavity_em.hpp"

namespace cavityqed {

/// Coupling of one cavity mode to the TEM continuum of one port, (rad/s)^(1/2).
struct PortCoupling {
  double g = 0.0;
  int port_id = 0;
  ModeIndex mode_index;
};

/// Uniform nodes over the coaxial aperture annulus: end-corrected trapezoid
/// weights in rho, periodic trapezoid in phi.
struct AnnulusQuadrature {
  int n_rho = 64;
  int n_phi = 64;
};

/// g = (c0 / 2) sqrt(omega_port / omega_k) * integral over the aperture of
/// H_k . (E_TEM x n), with n = -y_hat pointing into the cavity and the
/// unperturbed H_k. `omega_port` is the frequency at which the continuum is
/// sampled (the perturbed resonance under the Markov approximation); a
/// non-positive value means omega_k.
PortCoupling port_coupling(const CavityMode& mode, const CoaxProbe& probe, int port_id = 1,
                           double omega_port = 0.0, const AnnulusQuadrature& grid = {});

/// Single cavity mode coupled to two ports.
struct ScatteringResponse {
  double omega0 = 0.0;  // rad/s
  double g1 = 0.0;      // (rad/s)^(1/2)
  double g2 = 0.0;

  void validate() const;
  /// pi (g1^2 + g2^2): half the energy decay rate.
  double half_linewidth() const;
};

using Complex = std::complex<double>;

/// [[R1, T12], [T21, R2]] at omega. Throws DegenerateResponseError if g1 = g2 = 0.
Eigen::Matrix2cd transfer_functions(const ScatteringResponse& resp, double omega);

/// FWHM of |T12(omega)|^2: 2 pi (g1^2 + g2^2).
double half_power_bandwidth(const ScatteringResponse& resp);

}  // namespace cavityqed
