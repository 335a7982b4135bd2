#pragma once

// Transmon qubit: geometric capacitance of the dipole antenna, charging and
// Josephson energies, and the charge-basis spectrum of 4 E_C n^2 - E_J cos(phi).

#include <complex>
#include <vector>

#include "cavityqed/cavity_em.hpp"

namespace cavityqed {

/// Thin linear dipole whose two arms form the qubit pads; the junction sits in the gap.
struct DipoleSpec {
  double length = 0.0;  // m, tip to tip
  double radius = 0.0;  // m
  double gap = 0.0;     // m
  Vec3 center = Vec3::Zero();
  Vec3 orientation = Vec3::UnitY();  // unit vector along the dipole

  void validate() const;
};

/// Geometric capacitance of the dipole,
/// C = sqrt(eps_r) tan(k l / 2) / (120 omega0 (ln(l / 2r) - 1)), k = omega0 sqrt(eps_r) / c0.
/// Throws ValidityError at or beyond the pole k l / 2 = pi / 2, or when ln(l / 2r) <= 1.
double dipole_capacitance(const DipoleSpec& dipole, double omega0, double eps_r = 1.0);

struct TransmonParams {
  double e_c = 0.0;      // J
  double e_j = 0.0;      // J
  double c_ant = 0.0;    // F
  double c_load = 0.0;   // F
  double c_sigma = 0.0;  // F
  double l_j = 0.0;      // H

  static TransmonParams from_circuit(double c_ant, double c_load, double l_j);

  void validate() const;
  double ej_over_ec() const { return e_j / e_c; }
  /// False when E_J / E_C < 20, outside the transmon regime.
  bool in_transmon_regime() const { return ej_over_ec() >= 20.0; }
};

double charging_energy(double c_sigma);
double josephson_energy(double l_j);
double capacitance_from_charging_energy(double e_c);

using Complex = std::complex<double>;

struct TransmonSpectrum {
  /// Ground-referenced eigenfrequencies (rad/s); omega_j[0] = 0.
  std::vector<double> omega_j;
  /// <j| n |j+1> for j = 0 .. n_levels - 2, each of the form -i |.|.
  std::vector<Complex> n_elems;
  /// Charge cutoff N actually used (basis n = -N .. N).
  int n_charge_cutoff = 0;

  int n_levels() const { return static_cast<int>(omega_j.size()); }
  /// omega_12 - omega_01 (rad/s).
  double anharmonicity() const;
};

/// Smallest cutoff accepted for `n_levels` levels: 4 ceil((E_J / 8 E_C)^(1/4)) + n_levels.
int minimum_charge_cutoff(const TransmonParams& params, int n_levels);

/// Lowest `n_levels` levels. A cutoff of 0 picks the smallest N >= minimum that
/// converges; an explicit cutoff below the minimum is a DomainError and one that
/// fails the N vs N + 4 check (1e-10 relative) raises ConvergenceError.
TransmonSpectrum transmon_spectrum(const TransmonParams& params, int n_levels, int n_charge_cutoff = 0);

/// -i (E_J / 8 E_C)^(1/4) sqrt((j + 1) / 2).
Complex charge_matrix_element_asymptotic(double e_c, double e_j, int j);

/// Perturbative level energy -E_J + sqrt(8 E_C E_J)(j + 1/2) - (E_C / 12)(6 j^2 + 6 j + 3), in J.
double transmon_energy_asymptotic(double e_c, double e_j, int j);

}  // namespace cavityqed
