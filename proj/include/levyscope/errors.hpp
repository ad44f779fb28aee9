// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace levyscope {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ZeroPointError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct NoDensityError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct TolUnreachableError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct OutsideBoxError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct GridTooCoarseError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct InconsistentGridsError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct NotContactPointError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct CFLViolationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NonConvergenceError : std::runtime_error {
  NonConvergenceError(const std::string& what, std::vector<double> residuals)
      : std::runtime_error(what), residual_trace(std::move(residuals)) {}
  std::vector<double> residual_trace;
};

}  // namespace levyscope
