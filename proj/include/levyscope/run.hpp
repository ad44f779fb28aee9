// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>

#include "levyscope/config.hpp"

namespace levyscope {

/// Exit statuses of the command-line runner.
enum ExitStatus : int {
  kExitOk = 0,
  kExitVerificationFailed = 1,
  kExitConfigError = 2,
  kExitNonConvergence = 3,
};

/// Dispatches one subcommand (eval-op, verify, stability, solve, compare,
/// quadrature-report) against a parsed config; artifacts are written under
/// `outdir`, diagnostics to `log`.
int run_subcommand(const std::string& subcommand, const Config& cfg,
                   uint64_t seed, const std::string& outdir,
                   std::ostream& log);

/// File-path convenience wrapper used by the CLI binary; maps exceptions to
/// exit statuses.
int run_cli(const std::string& subcommand, const std::string& config_path,
            uint64_t seed, const std::string& outdir, std::ostream& log);

}  // namespace levyscope
