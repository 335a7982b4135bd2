#include "cavityqed/perturbation.hpp"

#include <cmath>

#include "cavityqed/constants.hpp"
#include "cavityqed/errors.hpp"

namespace cavityqed {

namespace {

// Integral of (|H|^2 + eps_r |E|^2) over the cavity for unit-normalized modes.
constexpr double kStoredEnergyIntegral = 2.0;

double energy_difference(const CavityMode& mode, const Vec3& r) {
  const ModeFields f = mode.fields(r);
  return f.h.squaredNorm() - mode.geometry().eps_r * f.e.squaredNorm();
}

PerturbationResult finish(const CavityMode& mode, double numerator) {
  PerturbationResult out;
  out.omega_unperturbed = mode.omega();
  out.delta_energy_numerator = numerator;
  out.total_energy_denominator = kStoredEnergyIntegral;
  out.omega_perturbed = mode.omega() * (1.0 + numerator / kStoredEnergyIntegral);
  return out;
}

}  // namespace

void validate_probes(const CavityGeometry& geom, std::span<const CoaxProbe> probes) {
  for (const auto& probe : probes) probe.validate(geom);
  for (std::size_t i = 0; i < probes.size(); ++i) {
    for (std::size_t j = i + 1; j < probes.size(); ++j) {
      const double dx = probes[i].x0 - probes[j].x0;
      const double dz = probes[i].z0 - probes[j].z0;
      if (std::hypot(dx, dz) < probes[i].r_inner + probes[j].r_inner) {
        throw DomainError("coax probes " + std::to_string(i) + " and " + std::to_string(j) +
                          " overlap");
      }
    }
  }
}

PerturbationResult perturbed_frequency_tip(const CavityMode& mode, std::span<const CoaxProbe> probes) {
  const CavityGeometry& geom = mode.geometry();
  validate_probes(geom, probes);
  double numerator = 0.0;
  for (const auto& probe : probes) {
    numerator += energy_difference(mode, probe.tip(geom)) * probe.volume();
  }
  return finish(mode, numerator);
}

PerturbationResult perturbed_frequency_quadrature(const CavityMode& mode,
                                                  std::span<const CoaxProbe> probes,
                                                  const ProbeQuadrature& grid) {
  if (grid.n_rho < 1 || grid.n_phi < 1 || grid.n_axial < 1) {
    throw DomainError("probe quadrature needs at least one node per direction");
  }
  const CavityGeometry& geom = mode.geometry();
  validate_probes(geom, probes);

  double numerator = 0.0;
  for (const auto& probe : probes) {
    if (probe.h == 0.0) continue;
    const double d_rho = probe.r_inner / grid.n_rho;
    const double d_phi = constants::two_pi / grid.n_phi;
    const double d_y = probe.h / grid.n_axial;
    double sum = 0.0;
    for (int k = 0; k < grid.n_axial; ++k) {
      const double y = geom.b - probe.h + (k + 0.5) * d_y;
      for (int i = 0; i < grid.n_rho; ++i) {
        const double rho = (i + 0.5) * d_rho;
        for (int j = 0; j < grid.n_phi; ++j) {
          const double phi = (j + 0.5) * d_phi;
          const Vec3 r(probe.x0 + rho * std::cos(phi), y, probe.z0 + rho * std::sin(phi));
          sum += energy_difference(mode, r) * rho;
        }
      }
    }
    numerator += sum * d_rho * d_phi * d_y;
  }
  return finish(mode, numerator);
}

}  // namespace cavityqed
