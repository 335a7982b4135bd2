#include "cavityqed/transmon.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

#include "cavityqed/constants.hpp"
#include "cavityqed/errors.hpp"

namespace cavityqed {

namespace {

constexpr double kConvergenceTol = 1e-10;
constexpr int kMaxAutoCutoff = 2000;

struct ChargeSolution {
  Eigen::VectorXd energies;   // units of E_C, ascending, not referenced
  Eigen::MatrixXd vectors;    // columns are eigenvectors in the charge basis
};

ChargeSolution solve_charge_basis(const TransmonParams& p, int cutoff, bool with_vectors) {
  // Entries are in units of the largest diagonal term, 4 E_C N^2, the scaling
  // the dense solver applies itself; the tridiagonal QL stalls on some unscaled inputs.
  const int dim = 2 * cutoff + 1;
  const double scale = 4.0 * std::max(1, cutoff * cutoff);
  Eigen::VectorXd diag(dim);
  for (int i = 0; i < dim; ++i) {
    const double n = i - cutoff;
    diag[i] = 4.0 * n * n / scale;
  }
  const Eigen::VectorXd sub = Eigen::VectorXd::Constant(dim - 1, -0.5 * p.ej_over_ec() / scale);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  solver.computeFromTridiagonal(diag, sub, with_vectors ? Eigen::ComputeEigenvectors : Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw ConvergenceError("charge-basis eigensolver failed (E_J/E_C = " + std::to_string(p.ej_over_ec()) +
                           ", cutoff " + std::to_string(cutoff) + ")");
  }
  ChargeSolution out;
  out.energies = solver.eigenvalues() * scale;
  if (with_vectors) out.vectors = solver.eigenvectors();
  return out;
}

bool converged(const Eigen::VectorXd& e_small, const Eigen::VectorXd& e_large, int n_levels) {
  const double scale = std::abs(e_small[1] - e_small[0]);
  for (int j = 0; j < n_levels; ++j) {
    const double a = e_small[j] - e_small[0];
    const double b = e_large[j] - e_large[0];
    if (std::abs(a - b) > kConvergenceTol * std::max(std::abs(b), scale)) return false;
  }
  return true;
}

}  // namespace

void DipoleSpec::validate() const {
  if (!(length > 0.0)) throw DomainError("dipole length must be positive");
  if (!(radius > 0.0)) throw DomainError("dipole radius must be positive");
  if (!(radius < 0.5 * length)) throw DomainError("dipole radius must be small against its length");
  if (!(gap >= 0.0 && gap < length)) throw DomainError("dipole gap must lie in [0, length)");
  if (!center.allFinite()) throw DomainError("dipole center must be finite");
  if (std::abs(orientation.norm() - 1.0) > 1e-9) throw DomainError("dipole orientation must be a unit vector");
}

double dipole_capacitance(const DipoleSpec& dipole, double omega0, double eps_r) {
  dipole.validate();
  if (!(omega0 > 0.0)) throw DomainError("dipole capacitance needs omega0 > 0");
  if (!(eps_r >= 1.0)) throw DomainError("relative permittivity must be >= 1");
  const double n = std::sqrt(eps_r);
  const double half_electrical = 0.5 * omega0 * n * dipole.length / constants::c0;
  if (half_electrical >= 0.5 * constants::pi) {
    throw ValidityError("dipole capacitance formula invalid: k l / 2 >= pi / 2");
  }
  const double log_term = std::log(dipole.length / (2.0 * dipole.radius)) - 1.0;
  if (!(log_term > 0.0)) {
    throw ValidityError("dipole capacitance formula invalid: ln(l / 2r) <= 1");
  }
  return n * std::tan(half_electrical) / (120.0 * omega0 * log_term);
}

double charging_energy(double c_sigma) {
  if (!(c_sigma > 0.0)) throw DomainError("total capacitance must be positive");
  return constants::e_charge * constants::e_charge / (2.0 * c_sigma);
}

double josephson_energy(double l_j) {
  if (!(l_j > 0.0)) throw DomainError("junction inductance must be positive");
  const double phi0_reduced = constants::hbar / (2.0 * constants::e_charge);
  return phi0_reduced * phi0_reduced / l_j;
}

double capacitance_from_charging_energy(double e_c) {
  if (!(e_c > 0.0)) throw DomainError("charging energy must be positive");
  return constants::e_charge * constants::e_charge / (2.0 * e_c);
}

TransmonParams TransmonParams::from_circuit(double c_ant, double c_load, double l_j) {
  if (!(c_ant >= 0.0) || !(c_load >= 0.0)) throw DomainError("capacitances must be non-negative");
  TransmonParams p;
  p.c_ant = c_ant;
  p.c_load = c_load;
  p.c_sigma = c_ant + c_load;
  p.l_j = l_j;
  p.e_c = charging_energy(p.c_sigma);
  p.e_j = josephson_energy(l_j);
  return p;
}

void TransmonParams::validate() const {
  if (!(e_c > 0.0) || !(e_j > 0.0)) throw DomainError("transmon energies must be positive");
  if (!std::isfinite(e_c) || !std::isfinite(e_j)) throw DomainError("transmon energies must be finite");
}

double TransmonSpectrum::anharmonicity() const {
  if (omega_j.size() < 3) throw DomainError("anharmonicity needs at least three levels");
  return (omega_j[2] - omega_j[1]) - (omega_j[1] - omega_j[0]);
}

int minimum_charge_cutoff(const TransmonParams& params, int n_levels) {
  params.validate();
  const double spread = std::pow(params.e_j / (8.0 * params.e_c), 0.25);
  return 4 * static_cast<int>(std::ceil(spread)) + n_levels;
}

TransmonSpectrum transmon_spectrum(const TransmonParams& params, int n_levels, int n_charge_cutoff) {
  params.validate();
  if (n_levels < 2) throw DomainError("transmon spectrum needs n_levels >= 2");
  if (n_charge_cutoff < 0) throw DomainError("charge cutoff must be non-negative");
  const int minimum = minimum_charge_cutoff(params, n_levels);

  int cutoff = n_charge_cutoff;
  if (cutoff == 0) {
    cutoff = minimum;
    while (!converged(solve_charge_basis(params, cutoff, false).energies,
                      solve_charge_basis(params, cutoff + 4, false).energies, n_levels)) {
      cutoff += 4;
      if (cutoff > kMaxAutoCutoff) throw ConvergenceError("transmon spectrum did not converge in charge cutoff");
    }
  } else {
    if (cutoff < minimum) {
      throw DomainError("charge cutoff " + std::to_string(cutoff) + " below the minimum " +
                        std::to_string(minimum));
    }
    if (!converged(solve_charge_basis(params, cutoff, false).energies,
                   solve_charge_basis(params, cutoff + 4, false).energies, n_levels)) {
      throw ConvergenceError("transmon spectrum not converged at charge cutoff " + std::to_string(cutoff));
    }
  }

  const ChargeSolution sol = solve_charge_basis(params, cutoff, true);
  TransmonSpectrum out;
  out.n_charge_cutoff = cutoff;
  out.omega_j.resize(n_levels);
  for (int j = 0; j < n_levels; ++j) {
    out.omega_j[j] = (sol.energies[j] - sol.energies[0]) * params.e_c / constants::hbar;
  }

  // Eigenvectors are real; <j|n|j+1> is real before rephasing. Give |j+1> the
  // phase that turns each element into -i |element|.
  const int dim = 2 * cutoff + 1;
  Eigen::VectorXd charge(dim);
  for (int i = 0; i < dim; ++i) charge[i] = i - cutoff;
  out.n_elems.resize(n_levels - 1);
  Complex phase_j = 1.0;
  for (int j = 0; j + 1 < n_levels; ++j) {
    const double raw = sol.vectors.col(j).dot(charge.cwiseProduct(sol.vectors.col(j + 1)));
    const Complex phase_next = phase_j * Complex(0.0, -1.0) * (raw < 0.0 ? -1.0 : 1.0);
    out.n_elems[j] = std::conj(phase_j) * phase_next * raw;
    phase_j = phase_next;
  }
  return out;
}

Complex charge_matrix_element_asymptotic(double e_c, double e_j, int j) {
  const double magnitude = std::pow(e_j / (8.0 * e_c), 0.25) * std::sqrt(0.5 * (j + 1));
  return {0.0, -magnitude};
}

double transmon_energy_asymptotic(double e_c, double e_j, int j) {
  const double jj = j;
  return -e_j + std::sqrt(8.0 * e_c * e_j) * (jj + 0.5) - (e_c / 12.0) * (6.0 * jj * jj + 6.0 * jj + 3.0);
}

}  // namespace cavityqed
