#pragma once

// Eigenmode data computed elsewhere (e.g. by a field solver), in the CSV layout
//
//   mode_label,f_GHz,Ex_1,Ey_1,Ez_1,...,Ex_Q,Ey_Q,Ez_Q,g_port1,g_port2
//
// with one row per mode, E in normalized-mode units (m^-3/2) at each qubit
// center and g in (rad/s)^(1/2). Lines starting with '#' are comments.

#include <string>
#include <vector>

#include "cavityqed/cavity_em.hpp"

namespace cavityqed::app {

struct ExternalModeRecord {
  std::string label;
  double omega = 0.0;  // rad/s
  std::vector<Vec3> e_at_qubits;
  double g_port1 = 0.0;
  double g_port2 = 0.0;
};

std::vector<std::string> external_mode_header(int n_qubits);

/// Throws ConfigError with "path:line: field 'name': ..." diagnostics.
std::vector<ExternalModeRecord> read_external_modes(const std::string& path, int n_qubits);

/// Picks the records matching `labels`, in that order. Throws ConfigError for a
/// missing label; unused records are reported through `ignored`.
std::vector<ExternalModeRecord> select_external_modes(const std::vector<ExternalModeRecord>& records,
                                                      const std::vector<std::string>& labels,
                                                      std::vector<std::string>& ignored);

}  // namespace cavityqed::app
