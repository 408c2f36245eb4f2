#include "chaplygin/commands.hpp"
#include "chaplygin/report.hpp"
#include "chaplygin/scenario.hpp"

#include <gtest/gtest.h>
#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

using namespace chaplygin;
namespace fs = std::filesystem;

namespace {

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("chaplygin_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  fs::path scenario(const std::string& name, const std::string& body) const {
    const fs::path path = dir_ / (name + ".yaml");
    std::ofstream(path) << body;
    return path;
  }

  static std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
  }

  // Runs the CLI binary; returns its exit status and captures stderr.
  int shell(const std::string& args, std::string* err = nullptr, const std::string& env = "") const {
    const fs::path err_file = dir_ / "stderr.txt";
    const std::string cmd = env + " " CHAPLYGIN_CLI " " + args + " > /dev/null 2> " + err_file.string();
    const int status = std::system(cmd.c_str());
    if (err) *err = slurp(err_file);
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  }

  fs::path dir_;
};

const char* kHomogeneous = R"(name: homog
n: 3
inertia: identity
u0: [1.0, 0.0, 0.0]
T: 10
dt: 0.001
)";

const char* kAnisotropic = R"(name: aniso
n: 4
inertia: diagonal
inertia_values: [1.0, 1.3, 0.8, 1.7, 0.9, 1.2]
s0: [0.3, -0.2, 0.5, 0.1, 0.4, -0.6]
T: 1
dt: 0.001
seed: 5
)";

}  // namespace

TEST(Scenario, ParsesAllKeys) {
  const Scenario sc = parse_scenario(R"(name: x
n: 4
inertia: full
inertia_values: [1,0,0,0,0,0, 0,1,0,0,0,0, 0,0,1,0,0,0, 0,0,0,1,0,0, 0,0,0,0,1,0, 0,0,0,0,0,1]
s0: [0, 0, 0, 0, 0, 0]
u0: [1, 2, 3, 4, 5, 6]
T: 2.5
dt: 0.01
form: omega_tilde
reparam: true
seed: 9
)");
  EXPECT_EQ(sc.n, 4);
  EXPECT_EQ(sc.form, DynamicsForm::OmegaTilde);
  EXPECT_TRUE(sc.reparam);
  EXPECT_EQ(sc.seed, 9u);
  EXPECT_NO_THROW(validate(sc));
  EXPECT_EQ(initial_point(sc).u.coeffs()[5], 6.0);
}

TEST(Scenario, ParseErrors) {
  EXPECT_THROW(parse_scenario("n: [3"), ScenarioParseError);
  EXPECT_THROW(parse_scenario("n: three"), ScenarioParseError);
  EXPECT_THROW(parse_scenario("colour: red"), ScenarioParseError);
  EXPECT_THROW(parse_scenario("form: omega_x"), ScenarioParseError);
  EXPECT_THROW(parse_scenario("- 1\n- 2"), ScenarioParseError);
}

TEST(Scenario, ValidationErrors) {
  EXPECT_THROW(validate(parse_scenario("dt: 0")), ScenarioValidationError);
  EXPECT_THROW(validate(parse_scenario("T: -1")), ScenarioValidationError);
  EXPECT_THROW(validate(parse_scenario("n: 2")), ScenarioValidationError);
  EXPECT_THROW(validate(parse_scenario("inertia: diagonal\ninertia_values: [1, -2, 1]")), ScenarioValidationError);
  EXPECT_THROW(validate(parse_scenario("n: 4\ninertia: principal3\ninertia_values: [1, 2, 3]")),
               ScenarioValidationError);
  EXPECT_THROW(validate(parse_scenario("u0: [1, 2]")), ScenarioValidationError);
}

TEST(Scenario, MissingVelocityIsSeeded) {
  const Scenario a = parse_scenario("seed: 3"), b = parse_scenario("seed: 3"), c = parse_scenario("seed: 4");
  EXPECT_EQ(initial_point(a).u.coeffs(), initial_point(b).u.coeffs());
  EXPECT_NE(initial_point(a).u.coeffs(), initial_point(c).u.coeffs());
}

TEST_F(Cli, HomogeneousRunReportsStraightLine) {
  std::ostringstream out, err;
  ASSERT_EQ(cmd_run(scenario("homog", kHomogeneous).string(), dir_, out, err), kExitOk) << err.str();
  const auto report = nlohmann::json::parse(slurp(dir_ / "homog_report.json"));
  EXPECT_EQ(report["schema_version"], kReportSchemaVersion);
  EXPECT_TRUE(report["straight_line"]["flag"].get<bool>());
  EXPECT_LE(report["drifts"]["energy"].get<double>(), 1e-8);
  for (const auto& d : report["drifts"]["momentum"]) EXPECT_LE(d.get<double>(), 1e-8);
  EXPECT_LE(report["oracle_deviation"].get<double>(), 1e-8);
}

TEST_F(Cli, ReportHasEveryField) {
  std::ostringstream out, err;
  ASSERT_EQ(cmd_run(scenario("aniso", kAnisotropic).string(), dir_, out, err), kExitOk) << err.str();
  const auto r = nlohmann::json::parse(slurp(dir_ / "aniso_report.json"));
  for (const char* key : {"drifts", "integrator", "constraint", "oracle_deviation", "closedness", "truncation",
                          "straight_line", "relative_equilibrium"})
    EXPECT_TRUE(r.contains(key)) << key;
  for (const char* form : {"omega_nh", "omega_tilde", "f_omega_tilde"})
    for (const char* restriction : {"unrestricted", "level_set"})
      EXPECT_TRUE(r["closedness"][form][restriction].is_number()) << form << "/" << restriction;
  EXPECT_TRUE(r["integrator"]["order_estimate"]["value"].is_number());
  EXPECT_TRUE(r["truncation"]["sigma_of_xnh"].is_number());
}

TEST_F(Cli, TrajectoryTableLayout) {
  std::ostringstream out, err;
  ASSERT_EQ(cmd_run(scenario("aniso", kAnisotropic).string(), dir_, out, err), kExitOk);
  std::ifstream in(dir_ / "aniso_trajectory.csv", std::ios::binary);
  std::string header, row;
  std::getline(in, header);
  std::getline(in, row);
  // t + 16 + 6 + H_c + 3 + 3 = 30 columns for n = 4.
  EXPECT_EQ(std::count(header.begin(), header.end(), ','), 29);
  EXPECT_EQ(header.rfind("t,s_1_1,", 0), 0u);
  EXPECT_NE(header.find(",H_c,J_1,J_2,J_3,g_1,g_2,g_3"), std::string::npos);
  EXPECT_EQ(std::count(row.begin(), row.end(), ','), 29);
  EXPECT_EQ(slurp(dir_ / "aniso_trajectory.csv").find('\r'), std::string::npos);
}

TEST_F(Cli, RunsAreBitIdentical) {
  const fs::path sc = scenario("aniso", kAnisotropic);
  std::ostringstream out, err;
  ASSERT_EQ(cmd_run(sc.string(), dir_ / "a", out, err), kExitOk);
  ASSERT_EQ(cmd_run(sc.string(), dir_ / "b", out, err), kExitOk);
  EXPECT_EQ(slurp(dir_ / "a" / "aniso_trajectory.csv"), slurp(dir_ / "b" / "aniso_trajectory.csv"));
  EXPECT_EQ(slurp(dir_ / "a" / "aniso_report.json"), slurp(dir_ / "b" / "aniso_report.json"));
}

TEST_F(Cli, ExitCodes) {
  std::string err;
  EXPECT_EQ(shell(scenario("bad", "n: [3").string(), &err), kExitParse);  // no subcommand
  EXPECT_EQ(shell("run " + scenario("bad", "n: [3").string(), &err), kExitParse);
  EXPECT_EQ(nlohmann::json::parse(err)["error"], "parse");

  EXPECT_EQ(shell("run " + scenario("neg", "inertia: diagonal\ninertia_values: [1.0, -0.5, 2.0]\n").string(), &err),
            kExitValidation);
  EXPECT_EQ(nlohmann::json::parse(err)["error"], "validation");

  const std::string big = "n: 3\ninertia: principal3\ninertia_values: [1, 2, 3]\nu0: [3, -2, 4]\ndt: 0.8\n";
  EXPECT_EQ(shell("run " + scenario("big", big).string() + " --out " + dir_.string(), &err), kExitNumericalGuard);
  const auto guard = nlohmann::json::parse(err);
  EXPECT_EQ(guard["error"], "numerical_guard");
  EXPECT_NE(guard["detail"].get<std::string>().find("energy guard"), std::string::npos);

  EXPECT_EQ(shell("verify nosuch", &err), kExitParse);
  EXPECT_EQ(nlohmann::json::parse(err)["error"], "unknown_suite");
  EXPECT_EQ(std::count(err.begin(), err.end(), '\n'), 1);
}

TEST_F(Cli, OutputDirectoryPrecedence) {
  const fs::path sc = scenario("homog", kHomogeneous);
  const fs::path env_dir = dir_ / "env", flag_dir = dir_ / "flag";
  const std::string env = std::string(kOutDirEnv) + "=" + env_dir.string();
  ASSERT_EQ(shell("run " + sc.string(), nullptr, env), kExitOk);
  EXPECT_TRUE(fs::exists(env_dir / "homog_report.json"));
  ASSERT_EQ(shell("run " + sc.string() + " --out " + flag_dir.string(), nullptr, env), kExitOk);
  EXPECT_TRUE(fs::exists(flag_dir / "homog_report.json"));
}

TEST_F(Cli, VerifyWritesReport) {
  std::ostringstream out, err;
  VerifyOptions options;
  options.ns = {3};
  EXPECT_EQ(cmd_verify("algebra", options, dir_, out, err), kExitOk);
  const auto r = nlohmann::json::parse(slurp(dir_ / "verify_algebra.json"));
  EXPECT_TRUE(r["passed"].get<bool>());
  EXPECT_GT(r["checks"].size(), 3u);
  EXPECT_NE(out.str().find("PASS jacobi_residual[n=3]"), std::string::npos);
}

TEST_F(Cli, TruncationSuitePasses) {
  std::ostringstream out, err;
  EXPECT_EQ(cmd_verify("truncation", VerifyOptions{}, dir_, out, err), kExitOk) << out.str();
  EXPECT_NE(out.str().find("residual"), std::string::npos);
}

TEST_F(Cli, HamiltonizationSuitePassesForThree) {
  std::ostringstream out, err;
  VerifyOptions options;
  options.ns = {3};
  EXPECT_EQ(cmd_verify("hamiltonization", options, dir_, out, err), kExitOk) << out.str();
  EXPECT_NE(out.str().find("PASS f_omega_tilde_level_closedness[n=3]"), std::string::npos);
}

TEST_F(Cli, CorruptedStructureTensorFailsJacobi) {
  VerifyOptions options;
  options.ns = {4};
  StructureTensor corrupted = Algebra(4).structure();
  corrupted(3, 0, 1) += 0.25;
  corrupted(3, 1, 0) -= 0.25;
  options.structure_override = corrupted;
  std::ostringstream out, err;
  EXPECT_EQ(cmd_verify("all", options, dir_, out, err), kExitFailure);
  EXPECT_NE(out.str().find("FAIL jacobi_residual[n=4]"), std::string::npos);
  EXPECT_NE(out.str().find("PASS d_omega_S[n=4]"), std::string::npos);
  EXPECT_NE(err.str().find("jacobi_residual"), std::string::npos);
}
