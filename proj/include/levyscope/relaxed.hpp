// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <utility>
#include <vector>

#include "levyscope/fields.hpp"

namespace levyscope {

struct RelaxedLimitReport {
  GridFunction limit;
  bool upper = true;
  std::vector<double> epsilons;           // decreasing schedule
  std::vector<double> radii;              // rho(eps) = sqrt(eps)
  std::vector<double> level_sup_change;   // sup |T_m - T_{m-1}| per level

  explicit RelaxedLimitReport(GridFunction g) : limit(std::move(g)) {}
};

/// Discrete half-relaxed limit of a family indexed by decreasing eps: level m
/// keeps the members with eps_k <= eps_m, each contributing its extremum over
/// the sqrt(eps_k)-ball around every node; the last level is returned along
/// with per-level sup-norm changes.
RelaxedLimitReport relaxed_limit(
    const std::vector<std::pair<double, GridFunction>>& family, bool upper);

}  // namespace levyscope
