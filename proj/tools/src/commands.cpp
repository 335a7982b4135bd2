#include "cavityqed_app/commands.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <ostream>
#include <set>

#include "cavityqed/constants.hpp"
#include "cavityqed/errors.hpp"
#include "cavityqed/hom.hpp"
#include "cavityqed/system_hamiltonian.hpp"
#include "cavityqed_app/external_modes.hpp"
#include "cavityqed_app/output.hpp"
#include "cavityqed_app/parallel.hpp"

namespace cavityqed::app {

namespace {

using nlohmann::json;
namespace u = cavityqed::units;

constexpr double kFieldVariationWarning = 0.05;

struct ModeData {
  std::string label;
  std::optional<CavityMode> analytic;
  double omega_unperturbed = 0.0;  // 0 when unknown
  double omega = 0.0;              // resonance used downstream
  std::vector<Vec3> e_at_qubits;   // external data only
  double g_port1 = 0.0;
  double g_port2 = 0.0;
};

json header_json(const ExperimentConfig& cfg, const std::string& command) {
  json j;
  j["schema_version"] = kSchemaVersion;
  j["config_sha256"] = cfg.sha256;
  j["command"] = command;
  j["mode_source"] = cfg.external_modes ? "external" : "analytic";
  if (cfg.external_modes) j["external_modes_path"] = *cfg.external_modes;
  return j;
}

void warn(std::vector<std::string>& warnings, std::ostream& log, const std::string& message) {
  warnings.push_back(message);
  log << "warning: " << message << '\n';
}

double perturbed_omega(const ExperimentConfig& cfg, const CavityMode& mode) {
  if (cfg.perturbation == PerturbationMethod::Tip) {
    return perturbed_frequency_tip(mode, cfg.probes).omega_perturbed;
  }
  return perturbed_frequency_quadrature(mode, cfg.probes, cfg.probe_quadrature).omega_perturbed;
}

// Lowest resonance of the box: index 1 along its two largest dimensions.
CavityMode fundamental_mode(const CavityGeometry& geom) {
  std::vector<double> inv{1.0 / (geom.a * geom.a), 1.0 / (geom.b * geom.b), 1.0 / (geom.d * geom.d)};
  std::sort(inv.begin(), inv.end());
  const double f = constants::c0 / (2.0 * std::sqrt(geom.eps_r)) * std::sqrt(inv[0] + inv[1]);
  return mode_list(geom, f * (1.0 + 1e-9)).front();
}

std::vector<ExternalModeRecord> read_all_external(const ExperimentConfig& cfg) {
  return read_external_modes(*cfg.external_modes, static_cast<int>(cfg.qubits.size()));
}

std::vector<ModeData> load_modes(const ExperimentConfig& cfg, const std::vector<ModeIndex>& selection,
                                 std::vector<std::string>& warnings, std::ostream& log) {
  std::vector<ModeData> out;
  if (cfg.external_modes) {
    std::vector<std::string> labels;
    for (const auto& idx : selection) labels.push_back(idx.label());
    std::vector<std::string> ignored;
    const auto records = select_external_modes(read_all_external(cfg), labels, ignored);
    for (const auto& name : ignored) warn(warnings, log, "external mode '" + name + "' is not selected and was ignored");
    for (const auto& r : records) {
      ModeData m;
      m.label = r.label;
      m.omega = r.omega;
      m.e_at_qubits = r.e_at_qubits;
      m.g_port1 = r.g_port1;
      m.g_port2 = r.g_port2;
      out.push_back(std::move(m));
    }
    return out;
  }
  for (const auto& idx : selection) {
    ModeData m;
    m.analytic.emplace(idx, cfg.geometry);
    m.label = idx.label();
    m.omega_unperturbed = m.analytic->omega();
    m.omega = perturbed_omega(cfg, *m.analytic);
    out.push_back(std::move(m));
  }
  return out;
}

double capacitance_frequency(const ExperimentConfig& cfg, const DispersiveConfig& d,
                             std::vector<std::string>& warnings, std::ostream& log) {
  if (cfg.external_modes) {
    const auto records = read_all_external(cfg);
    double lowest = std::numeric_limits<double>::infinity();
    for (const auto& r : records) lowest = std::min(lowest, r.omega);
    if (d.capacitance_frequency == CapacitanceFrequency::Unperturbed) {
      warn(warnings, log, "external modes carry one frequency per mode; the capacitance uses it as given");
    }
    return lowest;
  }
  const CavityMode fundamental = fundamental_mode(cfg.geometry);
  return d.capacitance_frequency == CapacitanceFrequency::Perturbed ? perturbed_omega(cfg, fundamental)
                                                                     : fundamental.omega();
}

struct PointResult {
  std::vector<Vec3> positions;  // of every qubit
  std::vector<double> l_j;
  std::vector<double> c_ant;
  std::optional<double> omega01;
  std::optional<double> alpha;
  double omega_k = 0.0;
  std::optional<double> chi;
  std::optional<double> zeta;
  std::vector<std::string> flags;
  int n_unreliable = 0;
  std::vector<std::string> warnings;
};

PointResult evaluate_point(const ExperimentConfig& cfg, const DispersiveConfig& d,
                           const std::vector<QubitConfig>& qubit_cfgs, const std::vector<ModeData>& modes,
                           double omega_cap) {
  PointResult res;
  const int m_levels = d.fock_levels;
  const int n_q = static_cast<int>(qubit_cfgs.size());
  const int n_m = static_cast<int>(modes.size());

  std::vector<QubitInstance> qubits;
  for (const auto& qc : qubit_cfgs) {
    const double c_ant = qc.c_ant ? *qc.c_ant : dipole_capacitance(qc.dipole, omega_cap, cfg.geometry.eps_r);
    const TransmonParams params = TransmonParams::from_circuit(c_ant, qc.c_load, qc.l_j);
    qubits.push_back(QubitInstance::make(qc.dipole, params, std::max(m_levels, 2)));
    res.positions.push_back(qc.dipole.center);
    res.l_j.push_back(qc.l_j);
    res.c_ant.push_back(c_ant);
    if (!params.in_transmon_regime()) {
      res.warnings.push_back("qubit with L_J = " + format_number(qc.l_j / u::nH) +
                             " nH has E_J/E_C below 20");
    }
  }

  std::vector<std::vector<Vec3>> samples(n_m);
  std::vector<double> omegas(n_m);
  for (int k = 0; k < n_m; ++k) {
    omegas[k] = modes[k].omega;
    for (int q = 0; q < n_q; ++q) {
      if (modes[k].analytic) {
        const CavityMode& mode = *modes[k].analytic;
        receiving_voltage(mode, qubits[q].dipole);  // rejects dipoles outside the cavity
        samples[k].push_back(mode.e_field(qubits[q].dipole.center));
        const double variation = field_variation_over_dipole(mode, qubits[q].dipole);
        if (variation > kFieldVariationWarning) {
          res.warnings.push_back("field of " + modes[k].label + " varies by " + format_number(variation) +
                                 " of its peak along qubit " + std::to_string(q));
        }
      } else {
        samples[k].push_back(modes[k].e_at_qubits.at(q));
      }
    }
  }

  const CouplingMatrix g = coupling_matrix(samples, omegas, qubits, m_levels - 1, d.charge_elements);
  const SystemBasis basis{n_q, n_m, m_levels};
  const Eigen::MatrixXcd h = assemble_hamiltonian(basis, qubits, omegas, g);
  const DressedSpectrum spec = dressed_spectrum(h, basis, d.label_threshold);
  res.n_unreliable = spec.n_unreliable();

  const int chi_k = static_cast<int>(std::find(d.modes.begin(), d.modes.end(), d.chi_mode) - d.modes.begin());
  res.omega_k = omegas[chi_k];
  std::set<std::string> flagged;
  try {
    const DispersiveParams p = dispersive_params(spec, {d.target_qubit, std::nullopt, std::nullopt});
    res.omega01 = p.omega01;
    if (std::isfinite(p.alpha)) res.alpha = p.alpha;
  } catch (const DispersiveInvalidError& e) {
    flagged.insert(e.state());
  }
  try {
    res.chi = pair_shift(spec, d.target_qubit, basis.mode_slot(chi_k));
  } catch (const DispersiveInvalidError& e) {
    flagged.insert(e.state());
  }
  if (n_q >= 2) {
    const int partner = d.target_qubit == 0 ? 1 : 0;
    try {
      res.zeta = pair_shift(spec, d.target_qubit, partner);
    } catch (const DispersiveInvalidError& e) {
      flagged.insert(e.state());
    }
  }
  res.flags.assign(flagged.begin(), flagged.end());
  return res;
}

std::vector<double> linspace(double start, double stop, int count) {
  std::vector<double> out(count);
  for (int i = 0; i < count; ++i) out[i] = count == 1 ? start : start + (stop - start) * i / (count - 1);
  return out;
}

std::optional<double> mhz(const std::optional<double>& omega) {
  if (!omega) return std::nullopt;
  return u::mhz_from_omega(*omega);
}

std::optional<double> ghz(const std::optional<double>& omega) {
  if (!omega) return std::nullopt;
  return u::ghz_from_omega(*omega);
}

std::optional<double> mean_of(const std::vector<PointResult>& points,
                              const std::optional<double> PointResult::*field) {
  double sum = 0.0;
  int n = 0;
  for (const auto& p : points) {
    if (p.*field) {
      sum += *(p.*field);
      ++n;
    }
  }
  if (n == 0) return std::nullopt;
  return sum / n;
}

}  // namespace

void cmd_modes(const ExperimentConfig& cfg, const RunOptions& opts, std::ostream& log) {
  const auto modes = mode_list(cfg.geometry, cfg.f_max);
  const int n_q = static_cast<int>(cfg.qubits.size());
  int port_a = 0, port_b = 1;
  if (cfg.hom) {
    port_a = cfg.hom->port1;
    port_b = cfg.hom->port2;
  }

  struct Row {
    double omega_pert = 0.0;
    std::vector<Vec3> e;
    double g1 = 0.0, g2 = 0.0;
  };
  std::vector<Row> rows(modes.size());
  parallel_for(static_cast<int>(modes.size()), opts.threads, [&](int i) {
    const CavityMode& mode = modes[i];
    Row& r = rows[i];
    r.omega_pert = perturbed_omega(cfg, mode);
    for (const auto& q : cfg.qubits) r.e.push_back(mode.e_field(q.dipole.center));
    if (port_a < static_cast<int>(cfg.probes.size())) {
      r.g1 = port_coupling(mode, cfg.probes[port_a], 1, r.omega_pert, cfg.annulus).g;
    }
    if (port_b < static_cast<int>(cfg.probes.size())) {
      r.g2 = port_coupling(mode, cfg.probes[port_b], 2, r.omega_pert, cfg.annulus).g;
    }
  });

  CsvWriter table(cfg.sha256, {"family", "m", "n", "p", "f_unperturbed_GHz", "f_perturbed_GHz"});
  CsvWriter external(cfg.sha256, external_mode_header(n_q));
  for (std::size_t i = 0; i < modes.size(); ++i) {
    const ModeIndex& idx = modes[i].index();
    table.row({idx.family == ModeFamily::TE ? "TE" : "TM", std::to_string(idx.m), std::to_string(idx.n),
               std::to_string(idx.p), format_number(u::ghz_from_omega(modes[i].omega())),
               format_number(u::ghz_from_omega(rows[i].omega_pert))});
    std::vector<std::string> cells{idx.label(), format_number(u::ghz_from_omega(rows[i].omega_pert))};
    for (const auto& e : rows[i].e) {
      for (int c = 0; c < 3; ++c) cells.push_back(format_number(e[c]));
    }
    cells.push_back(format_number(rows[i].g1));
    cells.push_back(format_number(rows[i].g2));
    external.row(cells);
    log << idx.label() << "  " << format_number(u::ghz_from_omega(modes[i].omega())) << " GHz -> "
        << format_number(u::ghz_from_omega(rows[i].omega_pert)) << " GHz\n";
  }
  write_text_file(opts.out_dir, "modes.csv", table.str());
  write_text_file(opts.out_dir, "modes_external.csv", external.str());
}

void cmd_hom(const ExperimentConfig& cfg, const RunOptions& opts, std::ostream& log) {
  if (!cfg.hom) throw ConfigError("hom: section missing from the config");
  const HomConfig& hc = *cfg.hom;
  std::vector<std::string> warnings;

  ScatteringResponse resp;
  if (cfg.external_modes) {
    const auto modes = load_modes(cfg, {hc.mode}, warnings, log);
    resp = {modes[0].omega, modes[0].g_port1, modes[0].g_port2};
  } else {
    const CavityMode mode(hc.mode, cfg.geometry);
    resp.omega0 = perturbed_omega(cfg, mode);
    resp.g1 = port_coupling(mode, cfg.probes[hc.port1], 1, resp.omega0, cfg.annulus).g;
    resp.g2 = port_coupling(mode, cfg.probes[hc.port2], 2, resp.omega0, cfg.annulus).g;
  }
  const double fwhm = half_power_bandwidth(resp);

  double w1 = resp.omega0, w2 = resp.omega0;
  switch (hc.center) {
    case CenterChoice::Balanced:
      w1 = w2 = balanced_center_frequency(resp);
      break;
    case CenterChoice::Resonance:
      break;
    case CenterChoice::Scan: {
      const double span = 3.0 * resp.half_linewidth();
      w1 = w2 = scan_balanced_center_frequency(resp, hc.sigma1, hc.sigma2, resp.omega0 - span,
                                               resp.omega0 + span, hc.scan_points);
      break;
    }
    case CenterChoice::Explicit:
      w1 = hc.omega_in1;
      w2 = hc.omega_in2;
      break;
  }
  const PhotonWavepacket p1{w1, hc.sigma1, 1};
  const PhotonWavepacket p2{w2, hc.sigma2, 2};

  double max_tau = 0.0;
  for (double t : hc.taus) max_tau = std::max(max_tau, std::abs(t));
  FrequencyGrid grid;
  if (hc.n_bins > 0) {
    grid = {hc.omega_min, hc.omega_max, hc.n_bins};
    if (grid.period() < max_tau) {
      warn(warnings, log, "frequency grid period is shorter than the largest delay; the curve repeats");
    }
  } else {
    grid = default_frequency_grid(resp, p1, p2, max_tau);
  }

  const int n = static_cast<int>(hc.taus.size());
  std::vector<std::optional<double>> values(n);
  std::vector<char> truncated(n, 0);
  parallel_for(n, opts.threads, [&](int i) {
    const HomTerms t = hom_terms(resp, p1, p2, hc.taus[i], grid);
    truncated[i] = t.truncated;
    try {
      values[i] = t.g2();
    } catch (const UndefinedCorrelationError&) {
      values[i].reset();
    }
  });
  const bool any_truncated = std::any_of(truncated.begin(), truncated.end(), [](char c) { return c != 0; });
  if (any_truncated) warn(warnings, log, "frequency grid does not cover +-6/sigma around a photon center");

  CsvWriter csv(cfg.sha256, {"tau_s", "g2"});
  std::optional<double> min_g2;
  for (int i = 0; i < n; ++i) {
    csv.row({format_number(hc.taus[i]), format_number(values[i])});
    if (values[i] && (!min_g2 || *values[i] < *min_g2)) min_g2 = values[i];
  }

  json side = header_json(cfg, "hom");
  side["mode"] = hc.mode.label();
  side["omega0_GHz"] = u::ghz_from_omega(resp.omega0);
  side["g1"] = resp.g1;
  side["g2"] = resp.g2;
  side["fwhm_MHz"] = u::mhz_from_omega(fwhm);
  side["center_rule"] = hc.center == CenterChoice::Balanced    ? "balanced"
                        : hc.center == CenterChoice::Resonance ? "resonance"
                        : hc.center == CenterChoice::Scan      ? "scan"
                                                               : "explicit";
  side["omega_in1_GHz"] = u::ghz_from_omega(w1);
  side["omega_in2_GHz"] = u::ghz_from_omega(w2);
  side["sigma1_us"] = hc.sigma1 / u::us;
  side["sigma2_us"] = hc.sigma2 / u::us;
  side["grid"] = {{"omega_min_GHz", u::ghz_from_omega(grid.omega_min)},
                  {"omega_max_GHz", u::ghz_from_omega(grid.omega_max)},
                  {"n_bins", grid.n_bins},
                  {"period_us", grid.period() / u::us}};
  side["truncated"] = any_truncated;
  side["min_g2"] = json_number(min_g2);
  side["warnings"] = warnings;

  log << "omega0/2pi = " << format_number(u::ghz_from_omega(resp.omega0)) << " GHz, g1 = " << format_number(resp.g1)
      << ", g2 = " << format_number(resp.g2) << ", " << n << " delays, min g2 = " << format_number(min_g2) << '\n';
  write_text_file(opts.out_dir, "hom.csv", csv.str());
  write_text_file(opts.out_dir, "hom.json", side.dump(2) + "\n");
}

void cmd_dispersive(const ExperimentConfig& cfg, const RunOptions& opts, std::ostream& log) {
  if (!cfg.dispersive) throw ConfigError("dispersive: section missing from the config");
  const DispersiveConfig& d = *cfg.dispersive;
  std::vector<std::string> warnings;
  if (cfg.external_modes && d.sweep == SweepType::Position) {
    throw ConfigError("dispersive.sweep: position sweeps need analytic modes (external data holds fixed sites)");
  }

  const auto modes = load_modes(cfg, d.modes, warnings, log);
  const double omega_cap = capacitance_frequency(cfg, d, warnings, log);

  std::vector<std::vector<QubitConfig>> points;
  switch (d.sweep) {
    case SweepType::None:
      points.push_back(cfg.qubits);
      break;
    case SweepType::Position:
      for (double x : linspace(d.position.x_min, d.position.x_max, d.position.nx)) {
        for (double z : linspace(d.position.z_min, d.position.z_max, d.position.nz)) {
          auto qs = cfg.qubits;
          qs[d.position.qubit].dipole.center.x() = x;
          qs[d.position.qubit].dipole.center.z() = z;
          points.push_back(std::move(qs));
        }
      }
      break;
    case SweepType::Inductance:
      for (double l : linspace(d.inductance.l_start, d.inductance.l_stop, d.inductance.count)) {
        auto qs = cfg.qubits;
        qs[d.inductance.qubit].l_j = l;
        points.push_back(std::move(qs));
      }
      break;
  }

  std::vector<PointResult> results(points.size());
  parallel_for(static_cast<int>(points.size()), opts.threads,
               [&](int i) { results[i] = evaluate_point(cfg, d, points[i], modes, omega_cap); });

  std::set<std::string> seen;
  for (const auto& r : results) {
    for (const auto& w : r.warnings) {
      if (seen.insert(w).second) warn(warnings, log, w);
    }
  }

  const int n_q = static_cast<int>(cfg.qubits.size());
  std::vector<std::string> header{"point"};
  for (int q = 1; q <= n_q; ++q) {
    for (const std::string name : {"x_mm_", "y_mm_", "z_mm_", "L_J_nH_", "C_ant_fF_"}) {
      header.push_back(name + std::to_string(q));
    }
  }
  for (const char* name : {"omega01_GHz", "alpha_MHz", "omega_k_GHz", "chi_MHz", "zeta_MHz", "flagged", "flags"}) {
    header.push_back(name);
  }
  CsvWriter csv(cfg.sha256, header);

  json doc = header_json(cfg, "dispersive");
  json mode_rows = json::array();
  for (const auto& m : modes) {
    mode_rows.push_back({{"label", m.label},
                         {"f_unperturbed_GHz", json_number(m.omega_unperturbed > 0.0
                                                               ? std::optional(u::ghz_from_omega(m.omega_unperturbed))
                                                               : std::nullopt)},
                         {"f_GHz", u::ghz_from_omega(m.omega)}});
  }
  doc["cavity_modes"] = mode_rows;
  doc["chi_mode"] = d.chi_mode.label();
  doc["capacitance_frequency_GHz"] = u::ghz_from_omega(omega_cap);
  doc["fock_levels"] = d.fock_levels;
  doc["label_threshold"] = d.label_threshold;
  doc["charge_elements"] = d.charge_elements == ChargeElementModel::Exact ? "exact" : "asymptotic";
  doc["qubit"] = d.target_qubit;
  doc["sweep"] = d.sweep == SweepType::None ? "none" : d.sweep == SweepType::Position ? "position" : "inductance";

  json rows = json::array();
  int n_flagged = 0;
  for (std::size_t i = 0; i < results.size(); ++i) {
    const PointResult& r = results[i];
    const bool flagged = !r.flags.empty();
    n_flagged += flagged;
    std::vector<std::string> cells{std::to_string(i)};
    json qubits = json::array();
    for (int q = 0; q < n_q; ++q) {
      const Vec3 p = r.positions[q] / u::mm;
      cells.push_back(format_number(p.x()));
      cells.push_back(format_number(p.y()));
      cells.push_back(format_number(p.z()));
      cells.push_back(format_number(r.l_j[q] / u::nH));
      cells.push_back(format_number(r.c_ant[q] / u::fF));
      qubits.push_back({{"position_mm", {p.x(), p.y(), p.z()}},
                        {"L_J_nH", r.l_j[q] / u::nH},
                        {"C_ant_fF", r.c_ant[q] / u::fF}});
    }
    std::string flag_text;
    for (const auto& f : r.flags) flag_text += (flag_text.empty() ? "" : ";") + f;
    for (const auto& v : {ghz(r.omega01), mhz(r.alpha), std::optional(u::ghz_from_omega(r.omega_k)), mhz(r.chi),
                          mhz(r.zeta)}) {
      cells.push_back(format_number(v));
    }
    cells.push_back(flagged ? "1" : "0");
    cells.push_back(flag_text);
    csv.row(cells);

    rows.push_back({{"index", i},
                    {"qubits", qubits},
                    {"omega01_GHz", json_number(ghz(r.omega01))},
                    {"alpha_MHz", json_number(mhz(r.alpha))},
                    {"omega_k_GHz", u::ghz_from_omega(r.omega_k)},
                    {"chi_MHz", json_number(mhz(r.chi))},
                    {"zeta_MHz", json_number(mhz(r.zeta))},
                    {"flags", r.flags},
                    {"unreliable_labels", r.n_unreliable}});
  }
  doc["points"] = rows;
  doc["summary"] = {{"n_points", results.size()},
                    {"n_flagged", n_flagged},
                    {"mean_omega01_GHz", json_number(ghz(mean_of(results, &PointResult::omega01)))},
                    {"mean_alpha_MHz", json_number(mhz(mean_of(results, &PointResult::alpha)))},
                    {"mean_chi_MHz", json_number(mhz(mean_of(results, &PointResult::chi)))},
                    {"mean_zeta_MHz", json_number(mhz(mean_of(results, &PointResult::zeta)))}};
  doc["warnings"] = warnings;

  log << results.size() << " point(s), " << n_flagged << " flagged; mean chi/2pi = "
      << format_number(mhz(mean_of(results, &PointResult::chi))) << " MHz\n";
  write_text_file(opts.out_dir, "dispersive.json", doc.dump(2) + "\n");
  write_text_file(opts.out_dir, "dispersive.csv", csv.str());
}

void cmd_ingest_check(const ExperimentConfig& cfg, const RunOptions& opts, std::ostream& log) {
  if (!cfg.external_modes) throw ConfigError("external_modes: section missing from the config");
  const auto records = read_all_external(cfg);
  std::vector<std::string> requested;
  if (cfg.dispersive) {
    for (const auto& m : cfg.dispersive->modes) requested.push_back(m.label());
  }
  if (cfg.hom && std::find(requested.begin(), requested.end(), cfg.hom->mode.label()) == requested.end()) {
    requested.push_back(cfg.hom->mode.label());
  }
  std::vector<std::string> ignored;
  std::vector<std::string> warnings;
  select_external_modes(records, requested, ignored);
  for (const auto& name : ignored) warn(warnings, log, "external mode '" + name + "' is not selected and was ignored");

  json doc = header_json(cfg, "ingest-check");
  json rows = json::array();
  for (const auto& r : records) {
    rows.push_back({{"label", r.label}, {"f_GHz", u::ghz_from_omega(r.omega)}, {"g_port1", r.g_port1},
                    {"g_port2", r.g_port2}});
  }
  doc["records"] = rows;
  doc["n_qubit_sites"] = cfg.qubits.size();
  doc["selected"] = requested;
  doc["ignored"] = ignored;
  doc["warnings"] = warnings;
  log << records.size() << " record(s) read from " << *cfg.external_modes << ", " << requested.size()
      << " selected\n";
  write_text_file(opts.out_dir, "ingest_check.json", doc.dump(2) + "\n");
}

}  // namespace cavityqed::app
