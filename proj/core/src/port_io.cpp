#include "cavityqed/port_io.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Geometry>

#include "cavityqed/constants.hpp"
#include "cavityqed/errors.hpp"

namespace cavityqed {

namespace {

// Extended trapezoid weights with Gregory end corrections (error O(h^4));
// plain trapezoid when there are too few nodes for the corrections.
double radial_weight(int i, int n) {
  if (n < 6) return (i == 0 || i == n - 1) ? 0.5 : 1.0;
  const int edge = std::min(i, n - 1 - i);
  switch (edge) {
    case 0: return 3.0 / 8.0;
    case 1: return 7.0 / 6.0;
    case 2: return 23.0 / 24.0;
    default: return 1.0;
  }
}

}  // namespace

PortCoupling port_coupling(const CavityMode& mode, const CoaxProbe& probe, int port_id,
                           double omega_port, const AnnulusQuadrature& grid) {
  if (grid.n_rho < 2 || grid.n_phi < 4) {
    throw DomainError("port_coupling needs n_rho >= 2 and n_phi >= 4");
  }
  const CavityGeometry& geom = mode.geometry();
  probe.validate(geom);
  if (omega_port <= 0.0) omega_port = mode.omega();

  const Vec3 normal(0.0, -1.0, 0.0);
  const double d_rho = (probe.r_outer - probe.r_inner) / (grid.n_rho - 1);
  const double d_phi = constants::two_pi / grid.n_phi;

  double integral = 0.0;
  for (int i = 0; i < grid.n_rho; ++i) {
    const double rho = i == grid.n_rho - 1 ? probe.r_outer : probe.r_inner + i * d_rho;
    const double w_rho = radial_weight(i, grid.n_rho);
    double ring = 0.0;
    for (int j = 0; j < grid.n_phi; ++j) {
      const double phi = j * d_phi;
      const Vec3 r(probe.x0 + rho * std::cos(phi), geom.b, probe.z0 + rho * std::sin(phi));
      const Vec3 e_tem = coax_tem_profile(probe, rho, phi);
      ring += mode.h_field(r).dot(e_tem.cross(normal));
    }
    integral += w_rho * ring * rho;
  }
  integral *= d_rho * d_phi;

  PortCoupling out;
  out.g = 0.5 * constants::c0 * std::sqrt(omega_port / mode.omega()) * integral;
  out.port_id = port_id;
  out.mode_index = mode.index();
  return out;
}

void ScatteringResponse::validate() const {
  if (!(omega0 > 0.0)) throw DomainError("scattering response requires omega0 > 0");
  if (!std::isfinite(g1) || !std::isfinite(g2)) {
    throw DomainError("scattering response couplings must be finite");
  }
}

double ScatteringResponse::half_linewidth() const { return constants::pi * (g1 * g1 + g2 * g2); }

Eigen::Matrix2cd transfer_functions(const ScatteringResponse& resp, double omega) {
  resp.validate();
  if (resp.g1 == 0.0 && resp.g2 == 0.0) {
    throw DegenerateResponseError("transfer functions undefined: both port couplings are zero");
  }
  const double pi = constants::pi;
  const double g1s = resp.g1 * resp.g1;
  const double g2s = resp.g2 * resp.g2;
  const Complex i_detuning(0.0, omega - resp.omega0);
  const Complex denom = pi * (g1s + g2s) - i_detuning;

  Eigen::Matrix2cd s;
  s(0, 0) = (pi * (g2s - g1s) - i_detuning) / denom;
  s(1, 1) = (pi * (g1s - g2s) - i_detuning) / denom;
  s(0, 1) = -2.0 * pi * resp.g1 * resp.g2 / denom;
  s(1, 0) = s(0, 1);
  return s;
}

double half_power_bandwidth(const ScatteringResponse& resp) {
  resp.validate();
  if (resp.g1 == 0.0 && resp.g2 == 0.0) {
    throw DegenerateResponseError("bandwidth undefined: both port couplings are zero");
  }
  return 2.0 * resp.half_linewidth();
}

}  // namespace cavityqed
