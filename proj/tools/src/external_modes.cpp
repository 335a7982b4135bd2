#include "cavityqed_app/external_modes.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>

#include "cavityqed/constants.hpp"
#include "cavityqed_app/config.hpp"

namespace cavityqed::app {

namespace {

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  for (char c : line) {
    if (c == ',') {
      out.push_back(cell);
      cell.clear();
    } else if (c != '\r') {
      cell += c;
    }
  }
  out.push_back(cell);
  for (auto& s : out) {
    const auto b = s.find_first_not_of(" \t");
    const auto e = s.find_last_not_of(" \t");
    s = b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
  }
  return out;
}

}  // namespace

std::vector<std::string> external_mode_header(int n_qubits) {
  std::vector<std::string> h{"mode_label", "f_GHz"};
  for (int q = 1; q <= n_qubits; ++q) {
    for (const char* axis : {"Ex_", "Ey_", "Ez_"}) h.push_back(axis + std::to_string(q));
  }
  h.push_back("g_port1");
  h.push_back("g_port2");
  return h;
}

std::vector<ExternalModeRecord> read_external_modes(const std::string& path, int n_qubits) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path + ": cannot open external mode file");

  std::string line;
  int line_no = 0;
  std::vector<std::string> header;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    header = split(line);
    break;
  }
  if (header.empty()) throw ConfigError(path + ": missing header row");

  std::map<std::string, std::size_t> column;
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (!column.emplace(header[i], i).second) {
      throw ConfigError(path + ":" + std::to_string(line_no) + ": duplicate field '" + header[i] + "'");
    }
  }
  const auto required = external_mode_header(n_qubits);
  for (const auto& name : required) {
    if (!column.contains(name)) {
      throw ConfigError(path + ":" + std::to_string(line_no) + ": missing required field '" + name + "'");
    }
  }
  for (const auto& name : header) {
    if (std::find(required.begin(), required.end(), name) == required.end()) {
      throw ConfigError(path + ":" + std::to_string(line_no) + ": unknown field '" + name + "'");
    }
  }

  std::vector<ExternalModeRecord> records;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    const auto cells = split(line);
    const std::string at = path + ":" + std::to_string(line_no);
    if (cells.size() != header.size()) {
      throw ConfigError(at + ": expected " + std::to_string(header.size()) + " fields, found " +
                        std::to_string(cells.size()));
    }
    auto number = [&](const std::string& name) {
      const std::string& text = cells[column.at(name)];
      double value = 0.0;
      const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
      if (text.empty() || ec != std::errc() || ptr != text.data() + text.size() || !std::isfinite(value)) {
        throw ConfigError(at + ": field '" + name + "': '" + text + "' is not a finite number");
      }
      return value;
    };
    ExternalModeRecord r;
    r.label = cells[column.at("mode_label")];
    if (r.label.empty()) throw ConfigError(at + ": field 'mode_label': empty");
    const double f = number("f_GHz");
    if (!(f > 0.0)) throw ConfigError(at + ": field 'f_GHz': frequency must be positive");
    r.omega = units::omega_from_ghz(f);
    for (int q = 1; q <= n_qubits; ++q) {
      const std::string s = std::to_string(q);
      r.e_at_qubits.emplace_back(number("Ex_" + s), number("Ey_" + s), number("Ez_" + s));
    }
    r.g_port1 = number("g_port1");
    r.g_port2 = number("g_port2");
    for (const auto& other : records) {
      if (other.label == r.label) throw ConfigError(at + ": field 'mode_label': duplicate '" + r.label + "'");
    }
    records.push_back(std::move(r));
  }
  if (records.empty()) throw ConfigError(path + ": no mode records");
  return records;
}

std::vector<ExternalModeRecord> select_external_modes(const std::vector<ExternalModeRecord>& records,
                                                      const std::vector<std::string>& labels,
                                                      std::vector<std::string>& ignored) {
  std::vector<ExternalModeRecord> out;
  for (const auto& label : labels) {
    auto it = std::find_if(records.begin(), records.end(), [&](const auto& r) { return r.label == label; });
    if (it == records.end()) throw ConfigError("external mode file has no record for mode '" + label + "'");
    out.push_back(*it);
  }
  ignored.clear();
  for (const auto& r : records) {
    if (std::find(labels.begin(), labels.end(), r.label) == labels.end()) ignored.push_back(r.label);
  }
  return out;
}

}  // namespace cavityqed::app
