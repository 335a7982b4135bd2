#pragma once

// Qubit-cavity couplings from the receiving-antenna model, the RWA Hamiltonian
// on the truncated tensor-product basis, its labeled dressed spectrum and the
// dispersive parameters extracted from it.
//
// Basis ordering: qubit 0, qubit 1, ..., then cavity mode 0, mode 1, ... Every
// mode keeps M levels, and a label (l_0, ..., l_{N-1}) maps to the index
// sum_i l_i M^(N-1-i), so the last cavity mode varies fastest.

#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "cavityqed/cavity_em.hpp"
#include "cavityqed/transmon.hpp"

namespace cavityqed {

struct QubitInstance {
  DipoleSpec dipole;
  TransmonParams params;
  TransmonSpectrum spectrum;

  /// Diagonalizes `params` for `n_levels` levels.
  static QubitInstance make(const DipoleSpec& dipole, const TransmonParams& params, int n_levels);
  /// Recomputes the spectrum at the stored cutoff and throws DomainError on a mismatch.
  void check_consistency(double rel_tol = 1e-9) const;
};

/// V_RX = (1/2) (l_hat . E_k(r0)) l with the normalized mode field (m^-1/2).
/// Throws DomainError when either dipole end lies outside the cavity.
double receiving_voltage(const CavityMode& mode, const DipoleSpec& dipole);
/// Same, from a field sample supplied by the caller (external mode data).
double receiving_voltage(const Vec3& e_at_center, const DipoleSpec& dipole);

/// Triangular-current line integral of l_hat . E_k along the dipole with
/// `n_nodes` Gauss-Legendre nodes per arm.
double receiving_voltage_line_integral(const CavityMode& mode, const DipoleSpec& dipole, int n_nodes = 16);

/// Largest |l_hat . E(r) - l_hat . E(r0)| over the dipole, relative to max |E|
/// of the mode. Callers warn above 0.05.
double field_variation_over_dipole(const CavityMode& mode, const DipoleSpec& dipole, int n_samples = 21);

/// C_ant / (C_ant + C_L) V_RX.
double terminal_voltage(double v_rx, double c_ant, double c_load);

enum class ChargeElementModel { Exact, Asymptotic };

/// g_{k,j} = 2 e <j|n|j+1> sqrt(omega_k / (2 eps0 hbar)) V_t in rad/s, where
/// V_t follows from the mode field at the dipole center.
Complex qubit_cavity_coupling(const Vec3& e_at_center, double omega_k, const QubitInstance& qubit, int j,
                              ChargeElementModel model = ChargeElementModel::Exact);
Complex qubit_cavity_coupling(const CavityMode& mode, const QubitInstance& qubit, int j,
                              ChargeElementModel model = ChargeElementModel::Exact);

/// g[k][q][j] for cavity mode k, qubit q and transition j -> j + 1.
class CouplingMatrix {
 public:
  CouplingMatrix() = default;
  CouplingMatrix(int n_modes, int n_qubits, int n_transitions);

  int n_modes() const { return n_modes_; }
  int n_qubits() const { return n_qubits_; }
  int n_transitions() const { return n_transitions_; }
  Complex& operator()(int k, int q, int j) { return values_[offset(k, q, j)]; }
  const Complex& operator()(int k, int q, int j) const { return values_[offset(k, q, j)]; }

 private:
  std::size_t offset(int k, int q, int j) const;

  int n_modes_ = 0;
  int n_qubits_ = 0;
  int n_transitions_ = 0;
  std::vector<Complex> values_;
};

/// Couplings from field samples: `e_at_qubits[k][q]` is mode k's normalized E at qubit q.
CouplingMatrix coupling_matrix(const std::vector<std::vector<Vec3>>& e_at_qubits,
                               std::span<const double> omegas, std::span<const QubitInstance> qubits,
                               int n_transitions, ChargeElementModel model = ChargeElementModel::Exact);
CouplingMatrix coupling_matrix(std::span<const CavityMode> modes, std::span<const double> omegas,
                               std::span<const QubitInstance> qubits, int n_transitions,
                               ChargeElementModel model = ChargeElementModel::Exact);

using Label = std::vector<int>;

struct SystemBasis {
  int n_qubits = 0;
  int n_modes = 0;
  int levels = 2;  // M

  void validate() const;
  int n_subsystems() const { return n_qubits + n_modes; }
  int dimension() const;
  int index(const Label& label) const;
  Label label(int index) const;
  int excitations(int index) const;
  /// Position of cavity mode k in a label.
  int mode_slot(int k) const { return n_qubits + k; }
};

/// RWA Hamiltonian H / hbar (rad/s). Qubit q contributes levels omega_j for j < M
/// and couplings for transitions j < M - 1.
Eigen::MatrixXcd assemble_hamiltonian(const SystemBasis& basis, std::span<const QubitInstance> qubits,
                                      std::span<const double> cavity_freqs, const CouplingMatrix& couplings);

std::string format_label(const Label& label);

struct DressedEntry {
  Label label;
  double energy = 0.0;   // rad/s
  double overlap = 0.0;  // squared projection on the bare state
  bool unreliable = false;
};

struct DressedSpectrum {
  /// One entry per bare state, in basis order.
  std::vector<DressedEntry> entries;
  SystemBasis basis;
  double threshold = 0.5;

  const DressedEntry& at(const Label& label) const;
  /// Count of entries flagged unreliable.
  int n_unreliable() const;
};

/// Full eigendecomposition (block by block over the connected components of H)
/// followed by greedy max-overlap labeling; entries whose overlap is below
/// `threshold` are flagged.
DressedSpectrum dressed_spectrum(const Eigen::MatrixXcd& h, const SystemBasis& basis, double threshold = 0.5);

struct DispersiveSelection {
  int qubit = 0;
  /// Cavity mode for chi.
  std::optional<int> mode = 0;
  /// Second qubit for zeta.
  std::optional<int> partner_qubit;
};

struct DispersiveParams {
  double omega01 = 0.0;  // rad/s
  double alpha = 0.0;    // rad/s
  std::optional<double> chi;
  std::optional<double> zeta;
};

/// Energy double difference E_{1a 1b} - E_{1a} - E_{1b} + E_0 for two subsystem slots.
double pair_shift(const DressedSpectrum& spec, int slot_a, int slot_b);

/// Throws DispersiveInvalidError naming the first required state that is flagged.
DispersiveParams dispersive_params(const DressedSpectrum& spec, const DispersiveSelection& selection);

}  // namespace cavityqed
