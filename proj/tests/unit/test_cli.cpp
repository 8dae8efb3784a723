#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "ferrotorque/cli/commands.hpp"

namespace ferrotorque::cli {
namespace {

namespace fs = std::filesystem;

const fs::path kConfigs = FERROTORQUE_CONFIG_DIR;

class TempDir {
 public:
  TempDir() {
    std::random_device rd;
    path_ = fs::temp_directory_path() / ("ferrotorque_test_" + std::to_string(rd()) + std::to_string(rd()));
    fs::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path_, ec);
  }
  const fs::path& path() const { return path_; }

 private:
  fs::path path_;
};

struct RunResult {
  int code;
  std::string out;
  std::string err;
};

RunResult run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "ferrotorque");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

fs::path write_file(const fs::path& dir, const std::string& name, const std::string& text) {
  const fs::path p = dir / name;
  std::ofstream(p, std::ios::binary) << text;
  return p;
}

TEST(Cli, VersionAndHelp) {
  EXPECT_EQ(run_cli({"--version"}).code, kExitOk);
  EXPECT_NE(run_cli({"--version"}).out.find(kToolVersion), std::string::npos);
  EXPECT_EQ(run_cli({"--help"}).code, kExitOk);
}

TEST(Cli, UsageErrorsExitTwo) {
  EXPECT_EQ(run_cli({}).code, kExitConfig);
  EXPECT_EQ(run_cli({"derive"}).code, kExitConfig);
  EXPECT_EQ(run_cli({"--config", (kConfigs / "noise_spectrum.toml").string()}).code, kExitConfig);
  EXPECT_EQ(run_cli({"--config", (kConfigs / "noise_spectrum.toml").string(), "teleport"}).code, kExitConfig);
}

TEST(Cli, MissingConfigExitsTwo) {
  const RunResult r = run_cli({"--config", "/nonexistent/run.toml", "derive"});
  EXPECT_EQ(r.code, kExitConfig);
  EXPECT_NE(r.err.find("error:"), std::string::npos);
}

TEST(Cli, MalformedConfigReportsLine) {
  TempDir tmp;
  const fs::path cfg = write_file(tmp.path(), "bad.toml", "[sensor]\nradius_m = 1e-6\nradius_m = 2e-6\n");
  const RunResult r = run_cli({"--config", cfg.string(), "derive"});
  EXPECT_EQ(r.code, kExitConfig);
  EXPECT_NE(r.err.find("line 3"), std::string::npos);
}

TEST(Cli, UnknownMaterialExitsTwo) {
  TempDir tmp;
  const RunResult r = run_cli({"--config", (kConfigs / "noise_spectrum.toml").string(), "--out", tmp.path().string(),
                               "--set", "material.name=\"Permalloy\"", "derive"});
  EXPECT_EQ(r.code, kExitConfig);
  EXPECT_NE(r.err.find("NdFeB"), std::string::npos);
}

TEST(Cli, StepSizeViolationExitsThree) {
  TempDir tmp;
  const RunResult r = run_cli({"--config", (kConfigs / "simulate.toml").string(), "--out", tmp.path().string(),
                               "--set", "simulate.dt_s=0.5", "simulate"});
  EXPECT_EQ(r.code, kExitPhysics);
}

TEST(Cli, DeriveReportAndJson) {
  TempDir tmp;
  const RunResult r = run_cli({"--config", (kConfigs / "noise_spectrum.toml").string(), "--out", tmp.path().string(), "derive"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_NE(r.out.find("1.88000000e-01"), std::string::npos);
  const auto j = nlohmann::json::parse(slurp(tmp.path() / "derive.json"));
  EXPECT_NEAR(j.at("derived").at("f_I_Hz").get<double>(), 0.188, 1e-9);
}

TEST(Cli, SpectrumCsvLayout) {
  TempDir tmp;
  const RunResult r = run_cli({"--config", (kConfigs / "noise_spectrum.toml").string(), "--out", tmp.path().string(),
                               "--set", "grid.points=5", "spectrum"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  std::istringstream csv(slurp(tmp.path() / "spectrum.csv"));
  std::string header;
  std::getline(csv, header);
  EXPECT_EQ(header, "frequency_Hz,thermal_T2_per_Hz,sql_T2_per_Hz,erl_T2_per_Hz,spin_projection_T2_per_Hz");
  int rows = 0;
  for (std::string line; std::getline(csv, line);) ++rows;
  EXPECT_EQ(rows, 5);
  const auto meta = nlohmann::json::parse(slurp(tmp.path() / "spectrum.meta.json"));
  EXPECT_TRUE(meta.at("decisions").contains("gamma_rel_s"));
  EXPECT_EQ(slurp(tmp.path() / "spectrum.csv").find('\r'), std::string::npos);
}

TEST(Cli, FormatFlagSelectsJson) {
  TempDir tmp;
  const RunResult r = run_cli({"--config", (kConfigs / "noise_spectrum.toml").string(), "--out", tmp.path().string(),
                               "--set", "grid.points=5", "--format", "json", "spectrum"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_TRUE(fs::exists(tmp.path() / "spectrum.json"));
  EXPECT_FALSE(fs::exists(tmp.path() / "spectrum.csv"));
}

TEST(Cli, ExclusionOverlayColumn) {
  TempDir tmp;
  write_file(tmp.path(), "lab.txt", "# mass g\n1e-12 1e-16\n1e-3 1e-10\n");
  const std::string cfg = slurp(kConfigs / "exclusion.toml");
  const fs::path path = write_file(tmp.path(), "run.toml", cfg);
  const RunResult r = run_cli({"--config", path.string(), "--out", (tmp.path() / "o").string(), "--set",
                               "grid.points=4", "--set", "exclusion.overlay=\"lab.txt\"", "--set",
                               "exclusion.geometry=\"point_dipole\"", "exclusion"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  std::istringstream csv(slurp(tmp.path() / "o" / "exclusion.csv"));
  std::string header;
  std::getline(csv, header);
  EXPECT_NE(header.find("g_p2_lab"), std::string::npos);
}

TEST(Cli, MalformedOverlayExitsTwoWithLine) {
  TempDir tmp;
  write_file(tmp.path(), "lab.txt", "1e-12 1e-16\n1e-9 -2\n");
  const fs::path path = write_file(tmp.path(), "run.toml", slurp(kConfigs / "exclusion.toml"));
  const RunResult r = run_cli({"--config", path.string(), "--out", (tmp.path() / "o").string(), "--set",
                               "grid.points=2", "--set", "exclusion.overlay=\"lab.txt\"", "exclusion"});
  EXPECT_EQ(r.code, kExitConfig);
  EXPECT_NE(r.err.find("line 2"), std::string::npos) << r.err;
}

TEST(Cli, RerunsAreByteIdentical) {
  TempDir a, b;
  for (const char* cmd : {"derive", "spectrum"}) {
    ASSERT_EQ(run_cli({"--config", (kConfigs / "noise_spectrum.toml").string(), "--out", a.path().string(), cmd}).code, 0);
    ASSERT_EQ(run_cli({"--config", (kConfigs / "noise_spectrum.toml").string(), "--out", b.path().string(), cmd}).code, 0);
  }
  for (const auto& entry : fs::directory_iterator(a.path())) {
    EXPECT_EQ(slurp(entry.path()), slurp(b.path() / entry.path().filename())) << entry.path();
  }
}

}  // namespace
}  // namespace ferrotorque::cli
