// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

#include "levyscope/geometry.hpp"
#include "levyscope/measures.hpp"

namespace levyscope {

/// Discretization of a jump measure split at radius delta.
///
/// The inner part covers {core_radius <= |z| <= delta} with annuli graded
/// geometrically toward the origin (ratio 1/2, Gauss nodes per annulus); it is
/// meant for integrands vanishing like |z|^2, so the neglected core below
/// core_radius is folded into inner_rel_err against the |z|^2-moment. The
/// outer part covers {delta < |z| <= r_max}; the measure beyond r_max is
/// reported in tail_bound (per unit of the integrand's sup-norm).
///
/// When `symmetric` is set, each stored node z stands for the pair {+z,-z},
/// both carrying the stored weight; evaluation loops fold the pair so odd
/// integrand parts cancel exactly.
struct QuadratureRule {
  int dim = 1;
  double delta = 0.0;
  double r_max = 0.0;
  double core_radius = 0.0;
  bool symmetric = false;

  std::vector<Point> inner_nodes;
  std::vector<double> inner_weights;
  std::vector<Point> outer_nodes;
  std::vector<double> outer_weights;

  double inner_moment2 = 0.0;  // sum w |z|^2 over the unfolded inner set
  double inner_rel_err = 0.0;  // relative accuracy achieved on |z|^2
  double outer_mass = 0.0;     // sum w over the unfolded outer set
  double outer_rel_err = 0.0;  // relative accuracy achieved on 1
  double tail_bound = 0.0;     // mu({|z| > r_max}), exact

  // outer nodes are emitted in increasing radius; the first
  // outer_resolved_count stored entries sit in width-capped annuli below
  // resolve_boundary (smooth-probe evaluations replace the rest by an
  // analytic tail around the probe's far value)
  size_t outer_resolved_count = 0;
  double resolve_boundary = 0.0;

  size_t node_count() const {
    return (inner_nodes.size() + outer_nodes.size()) * (symmetric ? 2 : 1);
  }
};

struct QuadratureOptions {
  int radial_order = 10;      // Gauss points per annulus
  size_t max_nodes = 4000000; // budget before TolUnreachable
  // Outer annuli grow geometrically but their width is capped at
  // resolve_width while below resolve_radius, so bounded fields varying on
  // scales >= resolve_width are integrated without aliasing out to that
  // radius; beyond it plain octaves take over. resolve_radius < 0 picks the
  // default (4e4 in d=1, 2048 in d=2); 0 disables the cap (pure octaves,
  // the cheap choice for scheme operators whose fields settle far out).
  double resolve_radius = -1.0;
  double resolve_width = 4.0;
};

/// Builds a rule whose inner part integrates z -> |z|^2 and whose outer part
/// integrates z -> 1 to relative accuracy tol, with r_max chosen so that
/// tail_mass(r_max) <= tol * tail_mass(1). All weights are nonnegative.
QuadratureRule build_quadrature(const LevyMeasure& mu, double delta, double tol,
                                const QuadratureOptions& opts = {});

}  // namespace levyscope
