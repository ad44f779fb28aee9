// SPDX-License-Identifier: Apache-2.0
//
// levyscope <subcommand> --config <path> [--seed N] [--out <dir>]
//
// Subcommands: eval-op, verify, stability, solve, compare, quadrature-report.
// Exit status: 0 success, 1 verification failure, 2 configuration error,
// 3 numerical non-convergence.

#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "levyscope/run.hpp"

int main(int argc, char** argv) {
  CLI::App app{"nonlocal-operator toolbox"};
  app.require_subcommand(1);

  std::string config_path;
  std::string outdir = ".";
  uint64_t seed = 0;

  const std::vector<std::string> names = {"eval-op",  "verify",
                                          "stability", "solve",
                                          "compare",  "quadrature-report"};
  for (const std::string& name : names) {
    CLI::App* sub = app.add_subcommand(name);
    sub->add_option("--config", config_path, "config file")->required();
    sub->add_option("--seed", seed, "seed for randomized sweeps");
    sub->add_option("--out", outdir, "output directory");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : levyscope::kExitConfigError;
  }

  const std::string sub = app.get_subcommands().front()->get_name();
  return levyscope::run_cli(sub, config_path, seed, outdir, std::cout);
}
