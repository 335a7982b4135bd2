#pragma once

// Experiment configuration: a JSON document validated against a fixed schema
// before anything is computed. Units at this boundary are GHz, mm, us, fF and
// nH; the structs below hold SI values.

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "cavityqed/cavity_em.hpp"
#include "cavityqed/perturbation.hpp"
#include "cavityqed/port_io.hpp"
#include "cavityqed/system_hamiltonian.hpp"
#include "cavityqed/transmon.hpp"

namespace cavityqed::app {

inline constexpr int kSchemaVersion = 1;

/// Invalid or unreadable configuration; maps to exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class PerturbationMethod { Quadrature, Tip };
enum class CapacitanceFrequency { Perturbed, Unperturbed };
enum class CenterChoice { Balanced, Resonance, Scan, Explicit };
enum class SweepType { None, Position, Inductance };

struct QubitConfig {
  DipoleSpec dipole;
  double c_load = 0.0;
  double l_j = 0.0;
  std::optional<double> c_ant;  // formula value when absent
};

struct HomConfig {
  ModeIndex mode{ModeFamily::TE, 1, 0, 1};
  int port1 = 0;  // index into probes
  int port2 = 1;
  double sigma1 = 0.0;
  double sigma2 = 0.0;
  CenterChoice center = CenterChoice::Balanced;
  double omega_in1 = 0.0;  // used with CenterChoice::Explicit
  double omega_in2 = 0.0;
  int scan_points = 201;
  std::vector<double> taus;
  int n_bins = 0;  // 0: automatic grid
  double omega_min = 0.0;
  double omega_max = 0.0;
};

struct PositionSweep {
  int qubit = 0;
  double x_min = 0.0, x_max = 0.0;
  double z_min = 0.0, z_max = 0.0;
  int nx = 11;
  int nz = 11;
};

struct InductanceSweep {
  int qubit = 0;
  double l_start = 0.0;
  double l_stop = 0.0;
  int count = 51;
};

struct DispersiveConfig {
  std::vector<ModeIndex> modes;  // cavity modes in the basis, in order
  ModeIndex chi_mode{ModeFamily::TE, 1, 0, 1};
  int fock_levels = 3;
  double label_threshold = 0.5;
  ChargeElementModel charge_elements = ChargeElementModel::Exact;
  CapacitanceFrequency capacitance_frequency = CapacitanceFrequency::Perturbed;
  int target_qubit = 0;
  SweepType sweep = SweepType::None;
  PositionSweep position;
  InductanceSweep inductance;
};

struct ExperimentConfig {
  CavityGeometry geometry;
  std::vector<CoaxProbe> probes;
  std::vector<QubitConfig> qubits;
  double f_max = 0.0;  // Hz, mode listing cut-off
  PerturbationMethod perturbation = PerturbationMethod::Quadrature;
  ProbeQuadrature probe_quadrature;
  AnnulusQuadrature annulus;
  std::optional<std::string> external_modes;  // path, resolved against the config directory
  std::optional<HomConfig> hom;
  std::optional<DispersiveConfig> dispersive;

  nlohmann::json document;  // validated document after overrides
  std::string sha256;       // of the canonical serialization of `document`
};

/// Applies "a.b.0.c=value" overrides; the value is parsed as JSON when possible
/// and kept as a string otherwise.
void apply_override(nlohmann::json& doc, const std::string& assignment);

ExperimentConfig parse_config(const nlohmann::json& doc, const std::string& base_dir = ".");
ExperimentConfig load_config(const std::string& path, const std::vector<std::string>& overrides = {});

std::string sha256_hex(const std::string& data);

}  // namespace cavityqed::app
