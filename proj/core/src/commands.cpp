#include "chaplygin/commands.hpp"

#include "chaplygin/errors.hpp"
#include "chaplygin/report.hpp"
#include "chaplygin/scenario.hpp"

#include <json.hpp>

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <fstream>

namespace chaplygin {
namespace {

namespace fs = std::filesystem;

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + path.string());
  f << text;
}

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

}  // namespace

std::string error_line(const std::string& kind, const std::string& detail) {
  return nlohmann::json{{"error", kind}, {"detail", detail}}.dump();
}

fs::path resolve_output_dir(const std::optional<std::string>& flag) {
  if (flag && !flag->empty()) return *flag;
  if (const char* env = std::getenv(kOutDirEnv); env && *env) return env;
  return fs::current_path();
}

int cmd_run(const std::string& scenario_path, const fs::path& out_dir, std::ostream& out, std::ostream& err) {
  Scenario sc;
  try {
    sc = load_scenario(scenario_path);
  } catch (const ScenarioParseError& e) {
    err << error_line("parse", e.what()) << '\n';
    return kExitParse;
  }
  try {
    validate(sc);
  } catch (const ScenarioValidationError& e) {
    err << error_line("validation", e.what()) << '\n';
    return kExitValidation;
  }

  try {
    const BallModel model(sc.n, build_inertia(sc));
    IntegratorOptions options;
    options.form = sc.form;
    options.reparam = sc.reparam;
    const Trajectory traj = integrate(model, initial_point(sc), sc.T, sc.dt, options);
    const RunDiagnostics diag = diagnose_run(sc, model, traj);

    fs::create_directories(out_dir);
    const fs::path csv = out_dir / (sc.name + "_trajectory.csv");
    const fs::path json = out_dir / (sc.name + "_report.json");
    {
      std::ofstream f(csv, std::ios::binary);
      if (!f) throw std::runtime_error("cannot write " + csv.string());
      write_trajectory_csv(f, model, traj);
    }
    write_file(json, render_run_report(diag));

    out << sc.name << ": " << diag.steps << " steps, energy drift " << sci(diag.energy_drift)
        << ", oracle deviation " << sci(diag.oracle_deviation) << ", straight line "
        << (diag.straight_line ? "yes" : "no") << '\n'
        << "wrote " << csv.string() << '\n'
        << "wrote " << json.string() << '\n';
    return kExitOk;
  } catch (const NumericalGuardError& e) {
    err << error_line("numerical_guard", e.what()) << '\n';
    return kExitNumericalGuard;
  } catch (const SingularSystemError& e) {
    err << error_line("singular_system", std::string(e.what()) + " (condition " + sci(e.condition()) + ")")
        << '\n';
    return kExitNumericalGuard;
  } catch (const std::exception& e) {
    err << error_line("internal", e.what()) << '\n';
    return kExitFailure;
  }
}

int cmd_verify(const std::string& suite, const VerifyOptions& options, const fs::path& out_dir, std::ostream& out,
               std::ostream& err) {
  const auto& names = suite_names();
  if (std::find(names.begin(), names.end(), suite) == names.end()) {
    err << error_line("unknown_suite", suite) << '\n';
    return kExitParse;
  }
  if (options.ns.empty() || std::any_of(options.ns.begin(), options.ns.end(), [](int n) { return n < 3; })) {
    err << error_line("validation", "n values must be at least 3") << '\n';
    return kExitValidation;
  }
  try {
    const SuiteReport report = run_suite(suite, options);
    for (const auto& c : report.checks) {
      const auto& m = c.measurement;
      out << (c.passed ? "PASS " : "FAIL ") << m.name << "  residual " << sci(m.value)
          << (m.bound == Bound::AtMost ? "  <= " : "  >= ") << sci(m.threshold) << '\n';
    }
    fs::create_directories(out_dir);
    const fs::path json = out_dir / ("verify_" + suite + ".json");
    write_file(json, render_verify_report(report, options));
    out << (report.passed() ? "PASS" : "FAIL") << " suite " << suite << '\n';
    if (!report.passed()) {
      std::string failed;
      for (const auto& c : report.checks)
        if (!c.passed) failed += (failed.empty() ? "" : ",") + c.measurement.name;
      err << error_line("check_failed", failed) << '\n';
      return kExitFailure;
    }
    return kExitOk;
  } catch (const NumericalGuardError& e) {
    err << error_line("numerical_guard", e.what()) << '\n';
    return kExitNumericalGuard;
  } catch (const std::exception& e) {
    err << error_line("internal", e.what()) << '\n';
    return kExitFailure;
  }
}

}  // namespace chaplygin
