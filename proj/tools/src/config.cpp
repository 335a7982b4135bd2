#include "cavityqed_app/config.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include <openssl/evp.h>

#include "cavityqed/constants.hpp"
#include "cavityqed/errors.hpp"

namespace cavityqed::app {

namespace {

using nlohmann::json;
namespace u = cavityqed::units;

// Reads one JSON object, remembering which keys were consumed so that
// anything left over can be reported as unknown.
class Section {
 public:
  Section(const json& node, std::string path) : node_(node), path_(std::move(path)) {
    if (!node_.is_object()) throw ConfigError(where() + ": expected an object");
  }

  bool has(const std::string& key) const { return node_.contains(key); }

  const json& raw(const std::string& key) {
    seen_.insert(key);
    if (!node_.contains(key)) throw ConfigError(where(key) + ": required field missing");
    return node_.at(key);
  }

  double number(const std::string& key) {
    const json& v = raw(key);
    if (!v.is_number()) throw ConfigError(where(key) + ": expected a number");
    const double x = v.get<double>();
    if (!std::isfinite(x)) throw ConfigError(where(key) + ": expected a finite number");
    return x;
  }
  double number(const std::string& key, double fallback) { return has(key) ? number(key) : mark(key, fallback); }

  double positive(const std::string& key) {
    const double x = number(key);
    if (!(x > 0.0)) throw ConfigError(where(key) + ": must be positive");
    return x;
  }

  int integer(const std::string& key) {
    const json& v = raw(key);
    if (!v.is_number_integer()) throw ConfigError(where(key) + ": expected an integer");
    return v.get<int>();
  }
  int integer(const std::string& key, int fallback) { return has(key) ? integer(key) : mark(key, fallback); }

  std::string text(const std::string& key) {
    const json& v = raw(key);
    if (!v.is_string()) throw ConfigError(where(key) + ": expected a string");
    return v.get<std::string>();
  }
  std::string text(const std::string& key, const std::string& fallback) {
    return has(key) ? text(key) : mark(key, fallback);
  }

  std::vector<double> numbers(const std::string& key, std::size_t count) {
    const json& v = raw(key);
    if (!v.is_array() || v.size() != count) {
      throw ConfigError(where(key) + ": expected an array of " + std::to_string(count) + " numbers");
    }
    std::vector<double> out;
    for (const auto& item : v) {
      if (!item.is_number()) throw ConfigError(where(key) + ": expected an array of numbers");
      out.push_back(item.get<double>());
    }
    return out;
  }

  Section child(const std::string& key) { return Section(raw(key), where(key)); }

  const json& array(const std::string& key) {
    const json& v = raw(key);
    if (!v.is_array()) throw ConfigError(where(key) + ": expected an array");
    return v;
  }

  std::string where(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }
  std::string where() const { return path_.empty() ? "<root>" : path_; }

  void finish() const {
    for (const auto& [key, value] : node_.items()) {
      if (!seen_.contains(key)) throw ConfigError(where(key) + ": unknown key");
    }
  }

 private:
  template <typename T>
  T mark(const std::string& key, T value) {
    seen_.insert(key);
    return value;
  }

  const json& node_;
  std::string path_;
  std::set<std::string> seen_;
};

ModeIndex mode_from(Section& s, const std::string& key) {
  const std::string label = s.text(key);
  try {
    return parse_mode_label(label);
  } catch (const Error& e) {
    throw ConfigError(s.where(key) + ": " + e.what());
  }
}

ModeIndex mode_from(const json& v, const std::string& where) {
  if (!v.is_string()) throw ConfigError(where + ": expected a mode label string");
  try {
    return parse_mode_label(v.get<std::string>());
  } catch (const Error& e) {
    throw ConfigError(where + ": " + e.what());
  }
}

CavityGeometry parse_geometry(Section s) {
  CavityGeometry g;
  g.a = s.positive("a_mm") * u::mm;
  g.b = s.positive("b_mm") * u::mm;
  g.d = s.positive("d_mm") * u::mm;
  g.eps_r = s.number("eps_r", 1.0);
  s.finish();
  return g;
}

CoaxProbe parse_probe(Section s) {
  CoaxProbe p;
  p.x0 = s.number("x_mm") * u::mm;
  p.z0 = s.number("z_mm") * u::mm;
  p.r_inner = s.positive("r_inner_mm") * u::mm;
  p.r_outer = s.positive("r_outer_mm") * u::mm;
  p.h = s.number("length_mm") * u::mm;
  s.finish();
  return p;
}

QubitConfig parse_qubit(Section s) {
  QubitConfig q;
  const auto pos = s.numbers("position_mm", 3);
  q.dipole.center = Vec3(pos[0], pos[1], pos[2]) * u::mm;
  Vec3 dir = Vec3::UnitY();
  if (s.has("orientation")) {
    const auto o = s.numbers("orientation", 3);
    dir = Vec3(o[0], o[1], o[2]);
    if (!(dir.norm() > 0.0)) throw ConfigError(s.where("orientation") + ": must be nonzero");
    dir.normalize();
  }
  q.dipole.orientation = dir;
  q.dipole.length = s.positive("length_mm") * u::mm;
  q.dipole.radius = s.positive("radius_mm") * u::mm;
  q.dipole.gap = s.number("gap_mm") * u::mm;
  q.c_load = s.number("C_L_fF") * u::fF;
  if (q.c_load < 0.0) throw ConfigError(s.where("C_L_fF") + ": must be non-negative");
  q.l_j = s.positive("L_J_nH") * u::nH;
  if (s.has("C_ant_fF")) q.c_ant = s.positive("C_ant_fF") * u::fF;
  s.finish();
  return q;
}

std::vector<double> linspace(double start, double stop, int count) {
  std::vector<double> out(count);
  for (int i = 0; i < count; ++i) out[i] = count == 1 ? start : start + (stop - start) * i / (count - 1);
  return out;
}

HomConfig parse_hom(Section s, int n_probes) {
  HomConfig h;
  if (s.has("mode")) h.mode = mode_from(s, "mode");
  if (s.has("ports")) {
    const json& ports = s.array("ports");
    if (ports.size() != 2 || !ports[0].is_number_integer() || !ports[1].is_number_integer()) {
      throw ConfigError(s.where("ports") + ": expected two probe indices");
    }
    h.port1 = ports[0].get<int>();
    h.port2 = ports[1].get<int>();
  }
  for (int p : {h.port1, h.port2}) {
    if (p < 0 || p >= n_probes) throw ConfigError(s.where("ports") + ": probe index out of range");
  }
  if (h.port1 == h.port2) throw ConfigError(s.where("ports") + ": the two ports must differ");
  h.sigma1 = s.positive("sigma1_us") * u::us;
  h.sigma2 = s.positive("sigma2_us") * u::us;

  const std::string center = s.text("center", "balanced");
  if (center == "balanced") {
    h.center = CenterChoice::Balanced;
  } else if (center == "resonance") {
    h.center = CenterChoice::Resonance;
  } else if (center == "scan") {
    h.center = CenterChoice::Scan;
  } else if (center == "explicit") {
    h.center = CenterChoice::Explicit;
    h.omega_in1 = u::omega_from_ghz(s.positive("f_in1_GHz"));
    h.omega_in2 = u::omega_from_ghz(s.positive("f_in2_GHz"));
  } else {
    throw ConfigError(s.where("center") + ": expected balanced, resonance, scan or explicit");
  }
  h.scan_points = s.integer("scan_points", 201);
  if (h.scan_points < 2) throw ConfigError(s.where("scan_points") + ": must be >= 2");

  Section tau = s.child("tau_us");
  const double start = tau.number("start");
  const double stop = tau.number("stop");
  const int count = tau.integer("count");
  if (count < 1 || count > 1000000) throw ConfigError(tau.where("count") + ": must lie in [1, 1e6]");
  tau.finish();
  for (double t : linspace(start, stop, count)) h.taus.push_back(t * u::us);

  if (s.has("grid")) {
    Section g = s.child("grid");
    h.n_bins = g.integer("n_bins");
    h.omega_min = u::omega_from_ghz(g.positive("f_min_GHz"));
    h.omega_max = u::omega_from_ghz(g.positive("f_max_GHz"));
    if (h.n_bins < 2 || !(h.omega_min < h.omega_max)) {
      throw ConfigError(g.where() + ": needs n_bins >= 2 and f_min_GHz < f_max_GHz");
    }
    g.finish();
  }
  s.finish();
  return h;
}

DispersiveConfig parse_dispersive(Section s, int n_qubits) {
  DispersiveConfig d;
  const json& modes = s.array("modes");
  if (modes.empty()) throw ConfigError(s.where("modes") + ": at least one cavity mode is required");
  for (std::size_t i = 0; i < modes.size(); ++i) {
    d.modes.push_back(mode_from(modes[i], s.where("modes") + "[" + std::to_string(i) + "]"));
  }
  d.chi_mode = s.has("chi_mode") ? mode_from(s, "chi_mode") : d.modes.front();
  if (std::find(d.modes.begin(), d.modes.end(), d.chi_mode) == d.modes.end()) {
    throw ConfigError(s.where("chi_mode") + ": must be one of the selected modes");
  }
  d.fock_levels = s.integer("fock_levels", 3);
  if (d.fock_levels < 2 || d.fock_levels > 40) throw ConfigError(s.where("fock_levels") + ": must lie in [2, 40]");
  d.label_threshold = s.number("label_threshold", 0.5);
  if (!(d.label_threshold >= 0.0 && d.label_threshold <= 1.0)) {
    throw ConfigError(s.where("label_threshold") + ": must lie in [0, 1]");
  }
  const std::string elements = s.text("charge_elements", "exact");
  if (elements == "exact") {
    d.charge_elements = ChargeElementModel::Exact;
  } else if (elements == "asymptotic") {
    d.charge_elements = ChargeElementModel::Asymptotic;
  } else {
    throw ConfigError(s.where("charge_elements") + ": expected exact or asymptotic");
  }
  const std::string cap = s.text("capacitance_frequency", "perturbed");
  if (cap == "perturbed") {
    d.capacitance_frequency = CapacitanceFrequency::Perturbed;
  } else if (cap == "unperturbed") {
    d.capacitance_frequency = CapacitanceFrequency::Unperturbed;
  } else {
    throw ConfigError(s.where("capacitance_frequency") + ": expected perturbed or unperturbed");
  }
  d.target_qubit = s.integer("qubit", 0);
  if (d.target_qubit < 0 || d.target_qubit >= n_qubits) throw ConfigError(s.where("qubit") + ": out of range");

  if (s.has("sweep")) {
    Section w = s.child("sweep");
    const std::string type = w.text("type");
    if (type == "position") {
      d.sweep = SweepType::Position;
      d.position.qubit = w.integer("qubit", d.target_qubit);
      const auto xs = w.numbers("x_mm", 2);
      const auto zs = w.numbers("z_mm", 2);
      d.position.x_min = xs[0] * u::mm;
      d.position.x_max = xs[1] * u::mm;
      d.position.z_min = zs[0] * u::mm;
      d.position.z_max = zs[1] * u::mm;
      d.position.nx = w.integer("nx", 11);
      d.position.nz = w.integer("nz", 11);
      if (d.position.nx < 1 || d.position.nz < 1) throw ConfigError(w.where() + ": nx and nz must be >= 1");
      if (d.position.qubit < 0 || d.position.qubit >= n_qubits) {
        throw ConfigError(w.where("qubit") + ": out of range");
      }
    } else if (type == "inductance") {
      d.sweep = SweepType::Inductance;
      d.inductance.qubit = w.integer("qubit", d.target_qubit);
      const auto range = w.numbers("L_J_nH", 2);
      if (!(range[0] > 0.0 && range[1] > 0.0)) throw ConfigError(w.where("L_J_nH") + ": must be positive");
      d.inductance.l_start = range[0] * u::nH;
      d.inductance.l_stop = range[1] * u::nH;
      d.inductance.count = w.integer("count", 51);
      if (d.inductance.count < 1) throw ConfigError(w.where("count") + ": must be >= 1");
      if (d.inductance.qubit < 0 || d.inductance.qubit >= n_qubits) {
        throw ConfigError(w.where("qubit") + ": out of range");
      }
    } else if (type != "none") {
      throw ConfigError(w.where("type") + ": expected none, position or inductance");
    }
    w.finish();
  }
  s.finish();
  return d;
}

}  // namespace

void apply_override(json& doc, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) {
    throw ConfigError("override '" + assignment + "': expected key=value");
  }
  const std::string path = assignment.substr(0, eq);
  const std::string text = assignment.substr(eq + 1);
  json value = json::parse(text, nullptr, false);
  if (value.is_discarded()) value = text;

  json* node = &doc;
  std::size_t start = 0;
  while (true) {
    const auto dot = path.find('.', start);
    const std::string key = path.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
    if (key.empty()) throw ConfigError("override '" + assignment + "': empty path segment");
    json* next = nullptr;
    if (node->is_array()) {
      std::size_t idx = 0;
      try {
        std::size_t used = 0;
        idx = std::stoul(key, &used);
        if (used != key.size()) throw std::invalid_argument(key);
      } catch (const std::exception&) {
        throw ConfigError("override '" + assignment + "': '" + key + "' is not an array index");
      }
      if (idx >= node->size()) throw ConfigError("override '" + assignment + "': index " + key + " out of range");
      next = &(*node)[idx];
    } else if (node->is_object()) {
      next = &(*node)[key];
    } else {
      throw ConfigError("override '" + assignment + "': cannot descend into a scalar at '" + key + "'");
    }
    if (dot == std::string::npos) {
      *next = value;
      return;
    }
    if (next->is_null()) *next = json::object();
    node = next;
    start = dot + 1;
  }
}

ExperimentConfig parse_config(const json& doc, const std::string& base_dir) {
  ExperimentConfig cfg;
  Section root(doc, "");
  const int version = root.integer("schema_version");
  if (version != kSchemaVersion) {
    throw ConfigError("schema_version: unsupported version " + std::to_string(version) + " (expected " +
                      std::to_string(kSchemaVersion) + ")");
  }
  if (root.has("description")) root.text("description");
  cfg.geometry = parse_geometry(root.child("geometry"));

  if (root.has("probes")) {
    const json& probes = root.array("probes");
    for (std::size_t i = 0; i < probes.size(); ++i) {
      cfg.probes.push_back(parse_probe(Section(probes[i], "probes[" + std::to_string(i) + "]")));
    }
  }
  if (root.has("qubits")) {
    const json& qubits = root.array("qubits");
    for (std::size_t i = 0; i < qubits.size(); ++i) {
      cfg.qubits.push_back(parse_qubit(Section(qubits[i], "qubits[" + std::to_string(i) + "]")));
    }
  }

  cfg.f_max = 10.0 * u::GHz;
  if (root.has("modes")) {
    Section m = root.child("modes");
    cfg.f_max = m.positive("f_max_GHz") * u::GHz;
    m.finish();
  }
  if (root.has("perturbation")) {
    Section p = root.child("perturbation");
    const std::string method = p.text("method", "quadrature");
    if (method == "quadrature") {
      cfg.perturbation = PerturbationMethod::Quadrature;
    } else if (method == "tip") {
      cfg.perturbation = PerturbationMethod::Tip;
    } else {
      throw ConfigError(p.where("method") + ": expected quadrature or tip");
    }
    cfg.probe_quadrature.n_rho = p.integer("n_rho", cfg.probe_quadrature.n_rho);
    cfg.probe_quadrature.n_phi = p.integer("n_phi", cfg.probe_quadrature.n_phi);
    cfg.probe_quadrature.n_axial = p.integer("n_axial", cfg.probe_quadrature.n_axial);
    p.finish();
  }
  if (root.has("port_coupling")) {
    Section p = root.child("port_coupling");
    cfg.annulus.n_rho = p.integer("n_rho", cfg.annulus.n_rho);
    cfg.annulus.n_phi = p.integer("n_phi", cfg.annulus.n_phi);
    p.finish();
  }
  if (root.has("external_modes")) {
    Section e = root.child("external_modes");
    std::filesystem::path path = e.text("path");
    if (path.is_relative()) path = std::filesystem::path(base_dir) / path;
    cfg.external_modes = path.lexically_normal().string();
    e.finish();
  }
  if (root.has("hom")) cfg.hom = parse_hom(root.child("hom"), static_cast<int>(cfg.probes.size()));
  if (root.has("dispersive")) {
    if (cfg.qubits.empty()) throw ConfigError("dispersive: at least one qubit is required");
    cfg.dispersive = parse_dispersive(root.child("dispersive"), static_cast<int>(cfg.qubits.size()));
  }
  root.finish();

  try {
    cfg.geometry.validate();
    validate_probes(cfg.geometry, cfg.probes);
    for (std::size_t i = 0; i < cfg.qubits.size(); ++i) cfg.qubits[i].dipole.validate();
  } catch (const Error& e) {
    throw ConfigError(e.what());
  }

  cfg.document = doc;
  cfg.sha256 = sha256_hex(doc.dump());
  return cfg;
}

ExperimentConfig load_config(const std::string& path, const std::vector<std::string>& overrides) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  json doc;
  try {
    doc = json::parse(buffer.str());
  } catch (const json::parse_error& e) {
    throw ConfigError(path + ": " + e.what());
  }
  for (const auto& o : overrides) apply_override(doc, o);
  const std::string base = std::filesystem::path(path).parent_path().string();
  return parse_config(doc, base.empty() ? "." : base);
}

std::string sha256_hex(const std::string& data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int length = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &length, EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("SHA-256 digest failed");
  }
  static constexpr char hex[] = "0123456789abcdef";
  std::string out;
  out.reserve(2 * length);
  for (unsigned int i = 0; i < length; ++i) {
    out += hex[digest[i] >> 4];
    out += hex[digest[i] & 0x0f];
  }
  return out;
}

}  // namespace cavityqed::app
