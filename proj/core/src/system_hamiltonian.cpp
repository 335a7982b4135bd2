#include "cavityqed/system_hamiltonian.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <tuple>

#include <Eigen/Eigenvalues>

#include "cavityqed/constants.hpp"
#include "cavityqed/errors.hpp"

namespace cavityqed {

namespace {

void check_dipole_inside(const CavityGeometry& geom, const DipoleSpec& dipole) {
  const Vec3 half = 0.5 * dipole.length * dipole.orientation;
  if (!geom.contains(dipole.center)) throw DomainError("dipole center lies outside the cavity");
  if (!geom.contains(dipole.center + half) || !geom.contains(dipole.center - half)) {
    throw DomainError("dipole does not fit inside the cavity");
  }
}

// Gauss-Legendre nodes and weights on [-1, 1] from the Jacobi matrix.
void gauss_legendre(int n, Eigen::VectorXd& nodes, Eigen::VectorXd& weights) {
  Eigen::VectorXd diag = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd sub(n - 1);
  for (int k = 1; k < n; ++k) sub[k - 1] = k / std::sqrt(4.0 * k * k - 1.0);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  solver.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
  nodes = solver.eigenvalues();
  weights = 2.0 * solver.eigenvectors().row(0).transpose().array().square();
}

struct DisjointSets {
  std::vector<int> parent;
  explicit DisjointSets(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int i) {
    while (parent[i] != i) {
      parent[i] = parent[parent[i]];
      i = parent[i];
    }
    return i;
  }
  void unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
};

}  // namespace

QubitInstance QubitInstance::make(const DipoleSpec& dipole, const TransmonParams& params, int n_levels) {
  dipole.validate();
  QubitInstance q;
  q.dipole = dipole;
  q.params = params;
  q.spectrum = transmon_spectrum(params, n_levels);
  return q;
}

void QubitInstance::check_consistency(double rel_tol) const {
  const TransmonSpectrum fresh = transmon_spectrum(params, spectrum.n_levels(), spectrum.n_charge_cutoff);
  for (int j = 1; j < spectrum.n_levels(); ++j) {
    if (std::abs(fresh.omega_j[j] - spectrum.omega_j[j]) > rel_tol * std::abs(fresh.omega_j[j])) {
      throw DomainError("qubit spectrum does not match its parameters at level " + std::to_string(j));
    }
  }
}

double receiving_voltage(const Vec3& e_at_center, const DipoleSpec& dipole) {
  dipole.validate();
  return 0.5 * dipole.orientation.dot(e_at_center) * dipole.length;
}

double receiving_voltage(const CavityMode& mode, const DipoleSpec& dipole) {
  dipole.validate();
  check_dipole_inside(mode.geometry(), dipole);
  return receiving_voltage(mode.e_field(dipole.center), dipole);
}

double receiving_voltage_line_integral(const CavityMode& mode, const DipoleSpec& dipole, int n_nodes) {
  dipole.validate();
  check_dipole_inside(mode.geometry(), dipole);
  if (n_nodes < 1) throw DomainError("line integral needs at least one node");
  Eigen::VectorXd x, w;
  gauss_legendre(n_nodes, x, w);
  const double half = 0.5 * dipole.length;
  double sum = 0.0;
  for (int sign : {-1, 1}) {
    for (int i = 0; i < n_nodes; ++i) {
      const double s = 0.5 * half * (x[i] + 1.0);  // distance from the center along the arm
      const Vec3 r = dipole.center + sign * s * dipole.orientation;
      const double weight = 1.0 - s / half;
      sum += w[i] * weight * dipole.orientation.dot(mode.e_field(r));
    }
  }
  return 0.5 * half * sum;
}

double field_variation_over_dipole(const CavityMode& mode, const DipoleSpec& dipole, int n_samples) {
  dipole.validate();
  check_dipole_inside(mode.geometry(), dipole);
  if (n_samples < 2) throw DomainError("field variation needs at least two samples");
  const double center = dipole.orientation.dot(mode.e_field(dipole.center));
  double worst = 0.0;
  for (int i = 0; i < n_samples; ++i) {
    const double s = dipole.length * (static_cast<double>(i) / (n_samples - 1) - 0.5);
    const double value = dipole.orientation.dot(mode.e_field(dipole.center + s * dipole.orientation));
    worst = std::max(worst, std::abs(value - center));
  }
  return worst / mode.norm_e();
}

double terminal_voltage(double v_rx, double c_ant, double c_load) {
  const double total = c_ant + c_load;
  if (!(total > 0.0)) throw DomainError("terminal voltage needs C_ant + C_L > 0");
  return c_ant / total * v_rx;
}

Complex qubit_cavity_coupling(const Vec3& e_at_center, double omega_k, const QubitInstance& qubit, int j,
                              ChargeElementModel model) {
  if (j < 0 || j + 1 >= qubit.spectrum.n_levels()) {
    throw DomainError("transition " + std::to_string(j) + " outside the qubit spectrum");
  }
  if (!(omega_k > 0.0)) throw DomainError("cavity frequency must be positive");
  const Complex element = model == ChargeElementModel::Exact
                              ? qubit.spectrum.n_elems[j]
                              : charge_matrix_element_asymptotic(qubit.params.e_c, qubit.params.e_j, j);
  const double v_t = terminal_voltage(receiving_voltage(e_at_center, qubit.dipole), qubit.params.c_ant,
                                      qubit.params.c_load);
  const double zero_point = std::sqrt(omega_k / (2.0 * constants::eps0 * constants::hbar));
  return 2.0 * constants::e_charge * element * zero_point * v_t;
}

Complex qubit_cavity_coupling(const CavityMode& mode, const QubitInstance& qubit, int j,
                              ChargeElementModel model) {
  check_dipole_inside(mode.geometry(), qubit.dipole);
  return qubit_cavity_coupling(mode.e_field(qubit.dipole.center), mode.omega(), qubit, j, model);
}

CouplingMatrix::CouplingMatrix(int n_modes, int n_qubits, int n_transitions)
    : n_modes_(n_modes), n_qubits_(n_qubits), n_transitions_(n_transitions) {
  if (n_modes < 0 || n_qubits < 0 || n_transitions < 0) throw DomainError("coupling matrix sizes must be >= 0");
  values_.assign(static_cast<std::size_t>(n_modes) * n_qubits * n_transitions, Complex{});
}

std::size_t CouplingMatrix::offset(int k, int q, int j) const {
  if (k < 0 || k >= n_modes_ || q < 0 || q >= n_qubits_ || j < 0 || j >= n_transitions_) {
    throw DomainError("coupling index out of range");
  }
  return (static_cast<std::size_t>(k) * n_qubits_ + q) * n_transitions_ + j;
}

CouplingMatrix coupling_matrix(const std::vector<std::vector<Vec3>>& e_at_qubits,
                               std::span<const double> omegas, std::span<const QubitInstance> qubits,
                               int n_transitions, ChargeElementModel model) {
  const int n_modes = static_cast<int>(e_at_qubits.size());
  const int n_qubits = static_cast<int>(qubits.size());
  if (omegas.size() != e_at_qubits.size()) throw DomainError("one frequency per cavity mode is required");
  CouplingMatrix g(n_modes, n_qubits, n_transitions);
  for (int k = 0; k < n_modes; ++k) {
    if (static_cast<int>(e_at_qubits[k].size()) != n_qubits) {
      throw DomainError("mode " + std::to_string(k) + " needs one field sample per qubit");
    }
    for (int q = 0; q < n_qubits; ++q) {
      for (int j = 0; j < n_transitions; ++j) {
        g(k, q, j) = qubit_cavity_coupling(e_at_qubits[k][q], omegas[k], qubits[q], j, model);
      }
    }
  }
  return g;
}

CouplingMatrix coupling_matrix(std::span<const CavityMode> modes, std::span<const double> omegas,
                               std::span<const QubitInstance> qubits, int n_transitions,
                               ChargeElementModel model) {
  std::vector<std::vector<Vec3>> samples(modes.size());
  for (std::size_t k = 0; k < modes.size(); ++k) {
    for (const auto& qubit : qubits) {
      check_dipole_inside(modes[k].geometry(), qubit.dipole);
      samples[k].push_back(modes[k].e_field(qubit.dipole.center));
    }
  }
  return coupling_matrix(samples, omegas, qubits, n_transitions, model);
}

void SystemBasis::validate() const {
  if (n_qubits < 0 || n_modes < 0 || n_subsystems() < 1) throw DomainError("basis needs at least one subsystem");
  if (levels < 2) throw DomainError("basis needs M >= 2");
  double dim = std::pow(static_cast<double>(levels), n_subsystems());
  if (dim > 1 << 16) throw DomainError("basis dimension exceeds 65536");
}

int SystemBasis::dimension() const {
  validate();
  int dim = 1;
  for (int i = 0; i < n_subsystems(); ++i) dim *= levels;
  return dim;
}

int SystemBasis::index(const Label& label) const {
  if (static_cast<int>(label.size()) != n_subsystems()) throw DomainError("label length does not match the basis");
  int idx = 0;
  for (int l : label) {
    if (l < 0 || l >= levels) throw DomainError("label entry outside 0..M-1");
    idx = idx * levels + l;
  }
  return idx;
}

Label SystemBasis::label(int index) const {
  Label out(n_subsystems());
  for (int i = n_subsystems() - 1; i >= 0; --i) {
    out[i] = index % levels;
    index /= levels;
  }
  return out;
}

int SystemBasis::excitations(int index) const {
  const Label l = label(index);
  return std::accumulate(l.begin(), l.end(), 0);
}

Eigen::MatrixXcd assemble_hamiltonian(const SystemBasis& basis, std::span<const QubitInstance> qubits,
                                      std::span<const double> cavity_freqs, const CouplingMatrix& couplings) {
  const int dim = basis.dimension();
  const int m = basis.levels;
  if (static_cast<int>(qubits.size()) != basis.n_qubits) throw DomainError("qubit count does not match the basis");
  if (static_cast<int>(cavity_freqs.size()) != basis.n_modes) {
    throw DomainError("cavity frequency count does not match the basis");
  }
  if (basis.n_qubits > 0 && basis.n_modes > 0 &&
      (couplings.n_modes() != basis.n_modes || couplings.n_qubits() != basis.n_qubits ||
       couplings.n_transitions() < m - 1)) {
    throw DomainError("coupling matrix dimensions do not match the basis");
  }
  for (const auto& q : qubits) {
    if (q.spectrum.n_levels() < m) throw DomainError("qubit spectrum has fewer than M levels");
  }

  const int n_sub = basis.n_subsystems();
  std::vector<int> stride(n_sub);
  for (int i = n_sub - 1, s = 1; i >= 0; --i, s *= m) stride[i] = s;

  Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(dim, dim);
  for (int idx = 0; idx < dim; ++idx) {
    const Label l = basis.label(idx);
    double diag = 0.0;
    for (int q = 0; q < basis.n_qubits; ++q) diag += qubits[q].spectrum.omega_j[l[q]];
    for (int k = 0; k < basis.n_modes; ++k) diag += cavity_freqs[k] * l[basis.mode_slot(k)];
    h(idx, idx) = diag;

    // g a_k^dag |j><j+1|_q: one qubit quantum becomes one photon in mode k.
    for (int q = 0; q < basis.n_qubits; ++q) {
      const int level = l[q];
      if (level == 0) continue;
      for (int k = 0; k < basis.n_modes; ++k) {
        const int slot = basis.mode_slot(k);
        const int photons = l[slot];
        if (photons + 1 >= m) continue;
        const int target = idx - stride[q] + stride[slot];
        const Complex value = couplings(k, q, level - 1) * std::sqrt(photons + 1.0);
        h(target, idx) += value;
        h(idx, target) += std::conj(value);
      }
    }
  }
  return h;
}

std::string format_label(const Label& label) {
  std::string out;
  const bool wide = std::any_of(label.begin(), label.end(), [](int v) { return v > 9; });
  for (std::size_t i = 0; i < label.size(); ++i) {
    if (wide && i > 0) out += ',';
    out += std::to_string(label[i]);
  }
  return out;
}

const DressedEntry& DressedSpectrum::at(const Label& label) const { return entries.at(basis.index(label)); }

int DressedSpectrum::n_unreliable() const {
  return static_cast<int>(std::count_if(entries.begin(), entries.end(), [](const auto& e) { return e.unreliable; }));
}

DressedSpectrum dressed_spectrum(const Eigen::MatrixXcd& h, const SystemBasis& basis, double threshold) {
  const int dim = basis.dimension();
  if (h.rows() != dim || h.cols() != dim) throw DomainError("Hamiltonian size does not match the basis");
  if (!(threshold >= 0.0 && threshold <= 1.0)) throw DomainError("label threshold must lie in [0, 1]");
  const double scale = std::max(h.cwiseAbs().maxCoeff(), std::numeric_limits<double>::min());
  if ((h - h.adjoint()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
    throw DomainError("Hamiltonian is not self-adjoint");
  }

  DisjointSets sets(dim);
  for (int j = 0; j < dim; ++j) {
    for (int i = j + 1; i < dim; ++i) {
      if (h(i, j) != Complex{}) sets.unite(i, j);
    }
  }
  std::vector<std::vector<int>> blocks(dim);
  for (int i = 0; i < dim; ++i) blocks[sets.find(i)].push_back(i);

  DressedSpectrum out;
  out.basis = basis;
  out.threshold = threshold;
  out.entries.resize(dim);
  for (int i = 0; i < dim; ++i) out.entries[i].label = basis.label(i);

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver;
  for (const auto& members : blocks) {
    const int n = static_cast<int>(members.size());
    if (n == 0) continue;
    if (n == 1) {
      out.entries[members[0]].energy = h(members[0], members[0]).real();
      out.entries[members[0]].overlap = 1.0;
      continue;
    }
    Eigen::MatrixXcd sub(n, n);
    for (int a = 0; a < n; ++a) {
      for (int b = 0; b < n; ++b) sub(a, b) = h(members[a], members[b]);
    }
    const double shift = sub.diagonal().real().mean();
    sub.diagonal().array() -= shift;
    solver.compute(sub);
    if (solver.info() != Eigen::Success) throw ConvergenceError("Hermitian eigensolver failed");
    const Eigen::VectorXd energies = solver.eigenvalues().array() + shift;
    const Eigen::MatrixXcd& vectors = solver.eigenvectors();
    const Eigen::MatrixXd weights = vectors.cwiseAbs2();

    // Greedy assignment: largest overlap first, ties broken by energy then bare index.
    std::vector<std::tuple<double, double, int, int>> pairs;
    pairs.reserve(static_cast<std::size_t>(n) * n);
    for (int e = 0; e < n; ++e) {
      for (int a = 0; a < n; ++a) pairs.emplace_back(-weights(a, e), energies[e], members[a], e);
    }
    std::sort(pairs.begin(), pairs.end());
    std::vector<bool> bare_used(n, false), eig_used(n, false);
    int assigned = 0;
    for (const auto& [neg_overlap, energy, bare, e] : pairs) {
      const int a = static_cast<int>(std::lower_bound(members.begin(), members.end(), bare) - members.begin());
      if (bare_used[a] || eig_used[e]) continue;
      bare_used[a] = eig_used[e] = true;
      // Bare energy plus the Rayleigh quotient of (H - E_bare): the bare parts
      // then cancel exactly in chi and zeta.
      const double bare_energy = h(bare, bare).real();
      const Eigen::VectorXcd v = vectors.col(e);
      Eigen::MatrixXcd local = sub;
      local.diagonal().array() += shift - bare_energy;
      out.entries[bare].energy = bare_energy + (v.adjoint() * local * v).value().real() / v.squaredNorm();
      out.entries[bare].overlap = -neg_overlap;
      if (++assigned == n) break;
    }
  }
  for (auto& entry : out.entries) entry.unreliable = entry.overlap < threshold;
  return out;
}

namespace {

const DressedEntry& required(const DressedSpectrum& spec, const Label& label) {
  const DressedEntry& entry = spec.at(label);
  if (entry.unreliable) {
    throw DispersiveInvalidError(format_label(label), "dressed state |" + format_label(label) +
                                                          "> has an unreliable label (overlap " +
                                                          std::to_string(entry.overlap) + ")");
  }
  return entry;
}

Label excited(const SystemBasis& basis, std::initializer_list<std::pair<int, int>> slots) {
  Label l(basis.n_subsystems(), 0);
  for (const auto& [slot, level] : slots) {
    if (slot < 0 || slot >= basis.n_subsystems()) throw DomainError("subsystem slot out of range");
    if (level >= basis.levels) throw DomainError("state needs more than M levels");
    l[slot] = level;
  }
  return l;
}

}  // namespace

double pair_shift(const DressedSpectrum& spec, int slot_a, int slot_b) {
  if (slot_a == slot_b) throw DomainError("pair shift needs two different subsystems");
  const SystemBasis& b = spec.basis;
  return required(spec, excited(b, {{slot_a, 1}, {slot_b, 1}})).energy -
         required(spec, excited(b, {{slot_a, 1}})).energy - required(spec, excited(b, {{slot_b, 1}})).energy +
         required(spec, excited(b, {})).energy;
}

DispersiveParams dispersive_params(const DressedSpectrum& spec, const DispersiveSelection& selection) {
  const SystemBasis& b = spec.basis;
  if (selection.qubit < 0 || selection.qubit >= b.n_qubits) throw DomainError("selected qubit out of range");
  const double e0 = required(spec, excited(b, {})).energy;
  const double e1 = required(spec, excited(b, {{selection.qubit, 1}})).energy;

  DispersiveParams out;
  out.omega01 = e1 - e0;
  out.alpha = std::numeric_limits<double>::quiet_NaN();
  if (b.levels >= 3) out.alpha = required(spec, excited(b, {{selection.qubit, 2}})).energy - e1 - out.omega01;
  if (selection.mode) {
    if (*selection.mode < 0 || *selection.mode >= b.n_modes) throw DomainError("selected mode out of range");
    out.chi = pair_shift(spec, selection.qubit, b.mode_slot(*selection.mode));
  }
  if (selection.partner_qubit) {
    if (*selection.partner_qubit < 0 || *selection.partner_qubit >= b.n_qubits) {
      throw DomainError("partner qubit out of range");
    }
    out.zeta = pair_shift(spec, selection.qubit, *selection.partner_qubit);
  }
  return out;
}

}  // namespace cavityqed
