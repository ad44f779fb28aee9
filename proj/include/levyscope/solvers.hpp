// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>
#include <string>
#include <vector>

#include "levyscope/fields.hpp"
#include "levyscope/measures.hpp"
#include "levyscope/scheme.hpp"

namespace levyscope {

enum class ProblemKind { ParabolicInterface, StationarySemilinear, Bellman };

struct BellmanControl {
  double sigma = 0.0;                   // 1/2 sigma^2 Laplacian
  std::function<Point(Point)> drift;    // b(x), bounded Lipschitz on the box
  std::function<double(Point)> source;  // f(x)
};

struct ProblemSpec {
  ProblemKind kind = ProblemKind::StationarySemilinear;
  LevyMeasure measure = LevyMeasure::stable_1d(0.5, 1.0, 1.0);
  double nu = 0.0;            // viscosity in front of the Laplacian
  double gamma = 1.0;         // zeroth-order coefficient (lambda for Bellman)
  bool hamiltonian = true;    // |grad u|^2 / 2 term (interface models)
  std::function<double(Point)> source;  // f (parabolic: optional forcing)
  double horizon = 0.0;       // parabolic end time
  std::vector<BellmanControl> controls;
  double slope_cap = 4.0;     // admissible one-sided slope range
  double quad_tol = 1e-4;     // scheme quadrature accuracy
};

struct GridSpec {
  int dim = 1;
  double box = 2.0;
  double h = 0.0625;
  Extension extension = Extension::ConstantClamp;
};

struct SolveStats {
  std::vector<double> residual_history;
  size_t iterations = 0;
  bool converged = true;
  double rho = 0.0;  // damping factor
  MonotonicityCertificate certificate;
};

/// Denominator-based explicit time-step bound; the exact formula used is
/// written into *formula.
double cfl_bound(const ProblemSpec& problem, const GridSpec& grid,
                 double delta, std::string* formula = nullptr);

struct Trajectory {
  std::vector<double> times;
  std::vector<GridFunction> snapshots;
  MonotonicityCertificate certificate;
};

/// Explicit monotone marching of
///   u_t + 1[hamiltonian] |grad u|^2/2 - nu Lap u - I[u] - f = 0.
/// Snapshots at the requested times (nearest step). Throws CFLViolationError
/// when dt exceeds the bound or a slope leaves the declared range.
Trajectory solve_parabolic(const ProblemSpec& problem, const GridFunction& u0,
                           double delta, const std::vector<double>& snap_times,
                           double dt = 0.0);

/// Damped fixed-point iteration on
///   gamma u + 1[hamiltonian] |grad u|^2/2 - nu Lap u - I[u] - f = 0
/// with rho chosen inside the monotonicity/contraction region. Throws
/// NonConvergenceError past the iteration budget.
GridFunction solve_stationary(const ProblemSpec& problem, const GridSpec& grid,
                              double delta, double tol,
                              SolveStats* stats = nullptr,
                              size_t max_iterations = 2000000);

struct BellmanResult {
  GridFunction value;
  std::vector<int> policy;  // per-node control index
  SolveStats stats;
  int policy_sweeps = 0;
  bool values_nonincreasing = true;  // after the first improvement
  double max_value_increase = 0.0;
};

/// Howard iteration: inexact policy evaluation (damped iteration to tol/10)
/// alternating with node-wise greedy improvement, until the policy is stable
/// and the Bellman residual is below tol.
BellmanResult solve_bellman(const ProblemSpec& problem, const GridSpec& grid,
                            double delta, double tol,
                            size_t max_sweeps = 200);

struct ComparisonWitness {
  size_t pair = 0;
  size_t step = 0;
  GridIndex node;
  double gap = 0.0;  // amount by which ordering failed
};

struct ComparisonReport {
  size_t pairs = 0;
  size_t steps_checked = 0;
  size_t violations = 0;
  double worst_gap = 0.0;
  std::vector<ComparisonWitness> witnesses;
  bool pass() const { return violations == 0; }
};

/// Runs the parabolic solver from both members of each ordered pair and
/// checks node-wise ordering at every step (tolerance 1e-12).
ComparisonReport comparison_parabolic(const ProblemSpec& problem, double delta,
                                      const std::vector<std::pair<GridFunction,
                                                                  GridFunction>>&
                                          pairs,
                                      size_t steps);

/// Runs the stationary solver with ordered source perturbations from the same
/// initial iterate and checks ordering along every sweep.
ComparisonReport comparison_stationary(
    const ProblemSpec& problem, const GridSpec& grid, double delta, double tol,
    const std::vector<std::pair<std::function<double(Point)>,
                                std::function<double(Point)>>>& source_pairs);

/// Seeded smooth random field pairs u0 <= v0 = u0 + nonnegative bump.
std::vector<std::pair<GridFunction, GridFunction>> make_random_ordered_pairs(
    uint64_t seed, size_t count, const GridSpec& grid, double amplitude);

}  // namespace levyscope
