#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "cavityqed_app/commands.hpp"
#include "cavityqed_app/config.hpp"
#include "cavityqed_app/external_modes.hpp"

namespace fs = std::filesystem;
using cavityqed::app::run_cli;
using nlohmann::json;

namespace {

const std::string kConfigs = std::string(CAVITYQED_SOURCE_DIR) + "/configs/";
const std::string kData = std::string(CAVITYQED_TEST_DATA_DIR) + "/";

struct CliResult {
  int code = -1;
  std::string out, err;
};

CliResult run(std::vector<std::string> args) {
  std::ostringstream out, err;
  CliResult r;
  r.code = run_cli(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Rows of a CSV written by the tool: metadata line, header, data.
std::vector<std::vector<std::string>> csv_rows(const fs::path& p) {
  std::ifstream in(p);
  std::vector<std::vector<std::string>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    rows.push_back(cells);
  }
  return rows;
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    dir_ = fs::temp_directory_path() / (std::string("cavityqed_cli_") + info->name());
    fs::remove_all(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string out(const std::string& sub) const { return (dir_ / sub).string(); }

  fs::path dir_;
};

}  // namespace

TEST_F(CliTest, ModesTableHasReferenceRows) {
  const CliResult r = run({"modes", "--config", kConfigs + "modes.json", "--out", out("m"), "--override", "modes.f_max_GHz=10"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto rows = csv_rows(dir_ / "m" / "modes.csv");
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_EQ(rows[0], (std::vector<std::string>{"family", "m", "n", "p", "f_unperturbed_GHz", "f_perturbed_GHz"}));
  EXPECT_EQ(rows[1][0] + rows[1][1] + rows[1][2] + rows[1][3], "TE101");
  EXPECT_NEAR(std::stod(rows[1][4]), 7.55, 0.01);
  EXPECT_LT(std::stod(rows[1][5]), std::stod(rows[1][4]));
  EXPECT_EQ(rows[2][0] + rows[2][1] + rows[2][2] + rows[2][3], "TE102");
  EXPECT_NEAR(std::stod(rows[2][4]), 9.96, 0.01);
}

TEST_F(CliTest, NoProbesLeavesFrequenciesUnperturbed) {
  const CliResult r = run({"modes", "--config", kConfigs + "modes.json", "--out", out("m"), "--override", "probes=[]"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto rows = csv_rows(dir_ / "m" / "modes.csv");
  ASSERT_GT(rows.size(), 1u);
  for (std::size_t i = 1; i < rows.size(); ++i) EXPECT_EQ(rows[i][4], rows[i][5]);
}

TEST_F(CliTest, MalformedConfigWritesNothing) {
  const CliResult r = run({"modes", "--config", kData + "malformed.json", "--out", out("m")});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("config error"), std::string::npos) << r.err;
  EXPECT_FALSE(fs::exists(dir_ / "m"));
}

TEST_F(CliTest, ConfigValidation) {
  const std::string cfg = kConfigs + "table1.json";
  for (const char* bad : {"geometry.height_mm=3", "schema_version=2", "qubits.0.L_J_nH=-1", "dispersive.fock_levels=1",
                          "dispersive.chi_mode=TE999x", "qubits.0.position_mm=[11.43,5.08]"}) {
    const CliResult r = run({"dispersive", "--config", cfg, "--out", out("d"), "--override", bad});
    EXPECT_EQ(r.code, 2) << bad << ": " << r.err;
    EXPECT_FALSE(r.err.empty());
    EXPECT_FALSE(fs::exists(dir_ / "d")) << bad;
  }
  const CliResult unknown = run({"dispersive", "--config", cfg, "--out", out("d"), "--override", "geometry.height_mm=3"});
  EXPECT_NE(unknown.err.find("height_mm"), std::string::npos) << unknown.err;
  EXPECT_EQ(run({"dispersive", "--config", kConfigs + "missing.json"}).code, 2);
  EXPECT_EQ(run({"frobnicate", "--config", cfg}).code, 2);
  EXPECT_EQ(run({"dispersive"}).code, 2);
  EXPECT_EQ(run({"dispersive", "--config", cfg, "--threads", "-2"}).code, 2);
}

TEST_F(CliTest, OverridesReachTheComputation) {
  ASSERT_EQ(run({"dispersive", "--config", kConfigs + "table1.json", "--out", out("a")}).code, 0);
  ASSERT_EQ(run({"dispersive", "--config", kConfigs + "table1.json", "--out", out("b"), "--override",
                 "qubits.0.L_J_nH=8.0"})
                .code,
            0);
  const json a = json::parse(slurp(dir_ / "a" / "dispersive.json"));
  const json b = json::parse(slurp(dir_ / "b" / "dispersive.json"));
  EXPECT_GT(b["points"][0]["omega01_GHz"].get<double>(), a["points"][0]["omega01_GHz"].get<double>());
  EXPECT_NE(a["config_sha256"], b["config_sha256"]);
}

TEST_F(CliTest, ReferenceQubitParameters) {
  const CliResult r = run({"dispersive", "--config", kConfigs + "table1.json", "--out", out("d")});
  ASSERT_EQ(r.code, 0) << r.err;
  const json d = json::parse(slurp(dir_ / "d" / "dispersive.json"));
  const json& p = d["points"][0];
  EXPECT_NEAR(p["omega01_GHz"].get<double>(), 6.39, 0.01 * 6.39);
  EXPECT_NEAR(p["alpha_MHz"].get<double>(), -371.7, 0.02 * 371.7);
  EXPECT_LT(p["chi_MHz"].get<double>(), 0.0);
  EXPECT_TRUE(p["flags"].empty());
}

TEST_F(CliTest, SmallerAntennaCapacitanceRaisesQubitFrequency) {
  const std::string cfg = kConfigs + "table1.json";
  ASSERT_EQ(run({"dispersive", "--config", cfg, "--out", out("a"), "--override", "qubits.0.C_ant_fF=9.091"}).code, 0);
  ASSERT_EQ(run({"dispersive", "--config", cfg, "--out", out("b"), "--override", "qubits.0.C_ant_fF=8.035"}).code, 0);
  const double wa = json::parse(slurp(dir_ / "a" / "dispersive.json"))["points"][0]["omega01_GHz"];
  const double wb = json::parse(slurp(dir_ / "b" / "dispersive.json"))["points"][0]["omega01_GHz"];
  EXPECT_GT(wb, wa);
}

TEST_F(CliTest, HomCurveAndSidecar) {
  const CliResult r = run({"hom", "--config", kConfigs + "hom.json", "--out", out("h")});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto rows = csv_rows(dir_ / "h" / "hom.csv");
  ASSERT_EQ(rows[0], (std::vector<std::string>{"tau_s", "g2"}));
  double at_zero = -1.0;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    if (std::stod(rows[i][0]) == 0.0) at_zero = std::stod(rows[i][1]);
  }
  EXPECT_GE(at_zero, 0.0);
  EXPECT_LE(at_zero, 1e-3);
  const json side = json::parse(slurp(dir_ / "h" / "hom.json"));
  for (const char* key : {"omega0_GHz", "g1", "g2", "omega_in1_GHz", "omega_in2_GHz", "config_sha256", "schema_version"}) {
    EXPECT_TRUE(side.contains(key)) << key;
  }
}

TEST_F(CliTest, MismatchedPacketsNeverReachZero) {
  const CliResult r = run({"hom", "--config", kConfigs + "hom.json", "--out", out("h"), "--override", "hom.sigma2_us=1.0",
                     "--override", "hom.tau_us.count=41"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto rows = csv_rows(dir_ / "h" / "hom.csv");
  for (std::size_t i = 1; i < rows.size(); ++i) EXPECT_GT(std::stod(rows[i][1]), 0.0);
}

TEST_F(CliTest, RunsAreBitwiseDeterministic) {
  const std::string cfg = kConfigs + "hom.json";
  ASSERT_EQ(run({"hom", "--config", cfg, "--out", out("a"), "--override", "hom.tau_us.count=21"}).code, 0);
  ASSERT_EQ(run({"hom", "--config", cfg, "--out", out("b"), "--override", "hom.tau_us.count=21"}).code, 0);
  EXPECT_EQ(slurp(dir_ / "a" / "hom.csv"), slurp(dir_ / "b" / "hom.csv"));

  const std::string sweep = kConfigs + "chi_sweep.json";
  ASSERT_EQ(run({"dispersive", "--config", sweep, "--out", out("s1"), "--threads", "1", "--override",
                 "dispersive.sweep.count=6"})
                .code,
            0);
  ASSERT_EQ(run({"dispersive", "--config", sweep, "--out", out("s3"), "--threads", "3", "--override",
                 "dispersive.sweep.count=6"})
                .code,
            0);
  EXPECT_EQ(slurp(dir_ / "s1" / "dispersive.csv"), slurp(dir_ / "s3" / "dispersive.csv"));
  EXPECT_EQ(slurp(dir_ / "s1" / "dispersive.json"), slurp(dir_ / "s3" / "dispersive.json"));
}

TEST_F(CliTest, OutputsCarryConfigHash) {
  ASSERT_EQ(run({"modes", "--config", kConfigs + "modes.json", "--out", out("m")}).code, 0);
  ASSERT_EQ(run({"dispersive", "--config", kConfigs + "table1.json", "--out", out("d")}).code, 0);
  const cavityqed::app::ExperimentConfig cfg = cavityqed::app::load_config(kConfigs + "modes.json");
  const std::string first = slurp(dir_ / "m" / "modes.csv").substr(0, 100);
  EXPECT_EQ(first.rfind("# schema_version=1 config_sha256=" + cfg.sha256, 0), 0u) << first;
  const json d = json::parse(slurp(dir_ / "d" / "dispersive.json"));
  EXPECT_EQ(d["schema_version"], 1);
  EXPECT_EQ(d["config_sha256"].get<std::string>().size(), 64u);
  EXPECT_EQ(slurp(dir_ / "d" / "dispersive.csv").rfind("# schema_version=1 config_sha256=", 0), 0u);
}

TEST_F(CliTest, ExternalModesRoundTrip) {
  const std::string cfg = kConfigs + "table1.json";
  ASSERT_EQ(run({"modes", "--config", cfg, "--out", out("m"), "--override", "modes={\"f_max_GHz\":14}"}).code, 0);
  const std::string ext = out("m") + "/modes_external.csv";
  ASSERT_EQ(run({"dispersive", "--config", cfg, "--out", out("a")}).code, 0);
  const CliResult r = run({"dispersive", "--config", cfg, "--out", out("b"), "--override", "external_modes.path=" + ext});
  ASSERT_EQ(r.code, 0) << r.err;
  const json a = json::parse(slurp(dir_ / "a" / "dispersive.json"))["points"][0];
  const json b = json::parse(slurp(dir_ / "b" / "dispersive.json"));
  for (const char* key : {"omega01_GHz", "alpha_MHz", "chi_MHz", "omega_k_GHz"}) {
    const double x = a[key], y = b["points"][0][key];
    EXPECT_NEAR(y, x, 1e-12 * std::abs(x)) << key;
  }
  EXPECT_EQ(b["mode_source"], "external");
  // The file lists every mode below 14 GHz; the unused ones are reported.
  EXPECT_FALSE(b["warnings"].empty());
  EXPECT_NE(r.err.find("TE103"), std::string::npos) << r.err;
}

TEST_F(CliTest, IngestCheck) {
  const std::string cfg = kConfigs + "table1.json";
  ASSERT_EQ(run({"modes", "--config", cfg, "--out", out("m"), "--override", "modes={\"f_max_GHz\":14}"}).code, 0);
  const CliResult ok = run({"ingest-check", "--config", cfg, "--out", out("i"), "--override",
                      "external_modes.path=" + out("m") + "/modes_external.csv"});
  ASSERT_EQ(ok.code, 0) << ok.err;
  const json doc = json::parse(slurp(dir_ / "i" / "ingest_check.json"));
  EXPECT_FALSE(doc["ignored"].empty());

  const CliResult missing = run({"ingest-check", "--config", cfg, "--out", out("j"), "--override",
                           "external_modes.path=" + kData + "external_missing_field.csv"});
  EXPECT_EQ(missing.code, 2);
  EXPECT_NE(missing.err.find("g_port2"), std::string::npos) << missing.err;
  EXPECT_FALSE(fs::exists(dir_ / "j"));
}

TEST_F(CliTest, UncoupledCavityIsDegenerate) {
  const CliResult r = run({"hom", "--config", kConfigs + "hom.json", "--out", out("h"), "--override",
                     "external_modes.path=" + kData + "external_uncoupled.csv"});
  EXPECT_EQ(r.code, 3) << r.err;
  EXPECT_FALSE(fs::exists(dir_ / "h" / "hom.csv"));
}

TEST(ExternalModes, ReaderDiagnostics) {
  EXPECT_THROW(cavityqed::app::read_external_modes(kData + "external_missing_field.csv", 1),
               cavityqed::app::ConfigError);
  try {
    cavityqed::app::read_external_modes(kData + "external_missing_field.csv", 1);
  } catch (const cavityqed::app::ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("g_port2"), std::string::npos) << e.what();
  }
  const auto records = cavityqed::app::read_external_modes(kData + "external_uncoupled.csv", 0);
  ASSERT_EQ(records.size(), 1u);
  EXPECT_EQ(records[0].label, "TE101");
  EXPECT_EQ(records[0].g_port1, 0.0);
  std::vector<std::string> ignored;
  EXPECT_THROW(cavityqed::app::select_external_modes(records, {"TE102"}, ignored), cavityqed::app::ConfigError);
  EXPECT_EQ(cavityqed::app::external_mode_header(1),
            (std::vector<std::string>{"mode_label", "f_GHz", "Ex_1", "Ey_1", "Ez_1", "g_port1", "g_port2"}));
}

TEST(ConfigOverrides, DottedPaths) {
  json doc = json::parse(R"({"a": {"b": [1, {"c": 2}]}, "s": "x"})");
  cavityqed::app::apply_override(doc, "a.b.1.c=5.5");
  EXPECT_EQ(doc["a"]["b"][1]["c"], 5.5);
  cavityqed::app::apply_override(doc, "s=plain text");
  EXPECT_EQ(doc["s"], "plain text");
  cavityqed::app::apply_override(doc, "a.b.0=[1,2]");
  EXPECT_EQ(doc["a"]["b"][0], json::parse("[1,2]"));
  EXPECT_THROW(cavityqed::app::apply_override(doc, "no_equals_sign"), cavityqed::app::ConfigError);
  EXPECT_THROW(cavityqed::app::apply_override(doc, "a.b.7=1"), cavityqed::app::ConfigError);
  EXPECT_EQ(cavityqed::app::sha256_hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}
