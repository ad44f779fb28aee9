// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

#include "levyscope/fields.hpp"
#include "levyscope/geometry.hpp"

namespace levyscope {

/// Slope-shifted, ball-localized envelope of a grid function:
///   sup case:  W(z) = max_{|Z-z|<=1} { U(Z) - r.(Z-z) - |Z-z|^2/(2 alpha) }
///   inf case:  W(z) = -sup-case applied to (-U, -r)
/// maximized over grid nodes, ties broken by the smallest flat node index.
struct ConvolutionResult {
  GridFunction values;
  double alpha = 0.0;
  Point slope;
  bool sup_case = true;
  std::vector<Point> argmax_offset;  // per node: maximizing Z minus z

  ConvolutionResult(GridFunction v, double a, Point r, bool sup)
      : values(std::move(v)), alpha(a), slope(r), sup_case(sup) {}
};

ConvolutionResult sup_convolution(const GridFunction& U, const Point& r,
                                  double alpha);

/// Mirror of sup_convolution through the identity inf[V](.,r) =
/// -sup[-V](.,-r) (node-exact by construction).
ConvolutionResult inf_convolution(const GridFunction& V, const Point& r,
                                  double alpha);

struct SemiconvexityReport {
  double min_second_difference = 0.0;  // over interior nodes and directions,
                                       // normalized by |step|^2
  double floor = 0.0;                  // -1/alpha
  double tol = 0.0;                    // 10 h / alpha^2
  bool pass = true;
  GridIndex worst_node;
  Point worst_direction;
};

/// Scans axis and diagonal second differences of a sup-convolution result
/// against the -1/alpha semiconvexity floor.
SemiconvexityReport check_semiconvexity(const ConvolutionResult& W);

}  // namespace levyscope
