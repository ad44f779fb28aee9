// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

#include "levyscope/fields.hpp"
#include "levyscope/measures.hpp"
#include "levyscope/quadrature.hpp"

namespace levyscope {

/// Grid-level discretization of the jump operator at split radius delta:
///  - the near part becomes axis second differences weighted by the truncated
///    second moments (nonnegative coefficients),
///  - the far part is direct quadrature with multilinear interpolation,
///  - a non-symmetric compensator leaves a net drift, discretized upwind.
struct SchemeOperator {
  int dim = 1;
  double delta = 0.0;
  double moment2_x = 0.0;  // int_{|z|<=delta} z_a^2 mu(dz), per axis
  double moment2_y = 0.0;
  Point drift;             // int_{delta<|z|<=1} z mu(dz) (zero when symmetric)
  std::vector<Point> jump_nodes;     // unfolded outer nodes
  std::vector<double> jump_weights;  // all nonnegative
  double jump_mass = 0.0;
  double tail_bound = 0.0;

  /// coefficient sum drained from the diagonal per unit dt (excluding
  /// viscosity and Hamiltonian terms)
  double diagonal_load(double h) const {
    const double m2 = moment2_x + (dim == 2 ? moment2_y : 0.0);
    const double dr = std::abs(drift[0]) + (dim == 2 ? std::abs(drift[1]) : 0.0);
    return m2 / (h * h) + jump_mass + dr / h;
  }
};

SchemeOperator make_scheme_operator(const LevyMeasure& mu, double delta,
                                    double quad_tol, int dim);

/// Nonlocal term of the scheme at one node.
double scheme_nonlocal(const SchemeOperator& op, const GridFunction& u,
                       const GridIndex& idx);

/// Godunov numerical Hamiltonian for |p|^2/2 (axis-separable).
double godunov_half_p2(const GridFunction& u, const GridIndex& idx);

/// max of |one-sided slope| entering the Godunov term at one node.
double local_slope(const GridFunction& u, const GridIndex& idx);

/// Five-point (three-point in 1d) Laplacian with clamped/periodic neighbors.
double laplacian(const GridFunction& u, const GridIndex& idx);

struct MonotonicityCertificate {
  bool monotone = true;
  double dt = 0.0;
  double cfl_denominator = 0.0;
  double min_diagonal_coefficient = 0.0;  // 1 - dt * (diagonal load)
  double max_slope_seen = 0.0;
  double slope_cap = 0.0;
  std::string formula;
};

}  // namespace levyscope
