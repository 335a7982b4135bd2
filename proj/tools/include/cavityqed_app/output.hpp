#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace cavityqed::app {

/// Shortest form that still carries 17 significant digits ("%.17g").
std::string format_number(double x);
std::string format_number(const std::optional<double>& x);

class CsvWriter {
 public:
  CsvWriter(std::string config_hash, std::vector<std::string> header);

  void row(const std::vector<std::string>& cells);
  /// Metadata comment line, then header, then rows.
  std::string str() const;

 private:
  std::string hash_;
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

/// Writes `text` to `dir/name`, creating `dir` when needed.
void write_text_file(const std::string& dir, const std::string& name, const std::string& text);

/// JSON numbers for optional values: null when absent or not finite.
nlohmann::json json_number(const std::optional<double>& x);

}  // namespace cavityqed::app
