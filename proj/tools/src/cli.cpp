#include <ostream>
#include <thread>

#include <CLI11.hpp>

#include "cavityqed/errors.hpp"
#include "cavityqed_app/commands.hpp"

namespace cavityqed::app {

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Analytic cavity QED calculator: cavity modes, HOM curves and dispersive parameters"};
  app.require_subcommand(1, 1);

  std::string config_path;
  std::vector<std::string> overrides;
  RunOptions opts;

  using Command = void (*)(const ExperimentConfig&, const RunOptions&, std::ostream&);
  Command selected = nullptr;
  auto add = [&](const std::string& name, const std::string& help, Command fn) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("--config", config_path, "Experiment config (JSON)")->required();
    sub->add_option("--out", opts.out_dir, "Output directory")->capture_default_str();
    sub->add_option("--threads", opts.threads, "Worker threads, 0 for all cores")->capture_default_str();
    sub->add_option("--override", overrides, "Dotted-path override key=value (repeatable)");
    sub->callback([&selected, fn] { selected = fn; });
  };
  add("modes", "List cavity modes with unperturbed and perturbed frequencies", cmd_modes);
  add("hom", "Hong-Ou-Mandel correlation curve", cmd_hom);
  add("dispersive", "Qubit frequencies, anharmonicity, chi and zeta", cmd_dispersive);
  add("ingest-check", "Validate an external eigenmode file", cmd_ingest_check);

  std::vector<const char*> argv{"cavityqed"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  }
  if (opts.threads < 0) {
    err << "error: --threads must be >= 0\n";
    return kExitConfig;
  }
  if (opts.threads == 0) opts.threads = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));

  try {
    const ExperimentConfig cfg = load_config(config_path, overrides);
    selected(cfg, opts, err);
    return kExitOk;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const DomainError& e) {
    err << "input error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const DegenerateResponseError& e) {
    err << "degenerate physics: " << e.what() << '\n';
    return kExitDegenerate;
  } catch (const UndefinedCorrelationError& e) {
    err << "degenerate physics: " << e.what() << '\n';
    return kExitDegenerate;
  } catch (const ValidityError& e) {
    err << "degenerate physics: " << e.what() << '\n';
    return kExitDegenerate;
  } catch (const std::exception& e) {
    err << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  }
}

}  // namespace cavityqed::app
