// chaplygin run <scenario.yaml> [--out dir]
// chaplygin verify <suite> [--n 3,4] [--seed N] [--out dir]

#include "chaplygin/commands.hpp"

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char** argv) {
  using namespace chaplygin;

  CLI::App app{"Chaplygin ball on SO(n): simulation and invariant checks"};
  app.require_subcommand(1);

  std::optional<std::string> out_flag;
  std::string scenario;
  auto* run = app.add_subcommand("run", "Integrate a scenario and write trajectory and report");
  run->add_option("scenario", scenario, "YAML scenario file")->required();
  run->add_option("--out", out_flag, "Output directory");

  std::string suite;
  VerifyOptions options;
  auto* verify = app.add_subcommand("verify", "Run an invariant suite");
  verify->add_option("suite", suite, "algebra | forms | truncation | hamiltonization | oracle | all")->required();
  verify->add_option("--n", options.ns, "Dimensions to check")->delimiter(',');
  verify->add_option("--seed", options.seed, "Base random seed");
  verify->add_option("--out", out_flag, "Output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << error_line("usage", e.what()) << '\n';
    return kExitParse;
  }

  const auto out_dir = resolve_output_dir(out_flag);
  if (*run) return cmd_run(scenario, out_dir, std::cout, std::cerr);
  return cmd_verify(suite, options, out_dir, std::cout, std::cerr);
}
