#pragma once

#include "chaplygin/verification.hpp"

#include <filesystem>
#include <optional>
#include <ostream>
#include <string>

namespace chaplygin {

/// Process exit codes shared by the library commands and the CLI.
enum ExitCode : int {
  kExitOk = 0,
  kExitFailure = 1,  ///< a verification check failed, or an unexpected internal error
  kExitParse = 2,    ///< unreadable scenario, bad arguments, unknown suite
  kExitValidation = 3,
  kExitNumericalGuard = 4,
};

/// Environment variable consulted when no --out is given.
inline constexpr const char* kOutDirEnv = "CHAPLYGIN_OUT_DIR";

/// --out, then $CHAPLYGIN_OUT_DIR, then the working directory.
std::filesystem::path resolve_output_dir(const std::optional<std::string>& flag);

/**
 * Runs a scenario and writes <name>_trajectory.csv and <name>_report.json.
 * Failures print a single JSON line {"error": kind, "detail": text} on err.
 */
int cmd_run(const std::string& scenario_path, const std::filesystem::path& out_dir, std::ostream& out,
            std::ostream& err);

/// Runs a suite, prints one line per check and writes verify_<suite>.json.
int cmd_verify(const std::string& suite, const VerifyOptions& options, const std::filesystem::path& out_dir,
               std::ostream& out, std::ostream& err);

/// The one-line diagnostic written on failures.
std::string error_line(const std::string& kind, const std::string& detail);

}  // namespace chaplygin
