#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "cavityqed_app/config.hpp"

namespace cavityqed::app {

enum ExitCode : int {
  kExitOk = 0,
  kExitConfig = 2,
  kExitDegenerate = 3,
  kExitNumerical = 4,
};

struct RunOptions {
  std::string out_dir = ".";
  int threads = 1;
};

/// Analytic mode table (modes.csv) and the same modes in the external-mode
/// layout (modes_external.csv).
void cmd_modes(const ExperimentConfig& cfg, const RunOptions& opts, std::ostream& log);
/// HOM curve (hom.csv) and its sidecar (hom.json).
void cmd_hom(const ExperimentConfig& cfg, const RunOptions& opts, std::ostream& log);
/// Dispersive parameters for one configuration or a sweep (dispersive.json, dispersive.csv).
void cmd_dispersive(const ExperimentConfig& cfg, const RunOptions& opts, std::ostream& log);
/// Validates the external mode file named in the config (ingest_check.json).
void cmd_ingest_check(const ExperimentConfig& cfg, const RunOptions& opts, std::ostream& log);

/// Full command line entry point; returns the process exit code.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace cavityqed::app
