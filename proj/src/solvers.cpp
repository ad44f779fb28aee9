// SPDX-License-Identifier: Apache-2.0
#include "levyscope/solvers.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "levyscope/errors.hpp"

namespace levyscope {

namespace {

double hamiltonian_load(const ProblemSpec& p, const GridSpec& g) {
  double load = 0.0;
  if (p.kind == ProblemKind::Bellman) {
    double bmax = 0.0, smax = 0.0;
    for (const BellmanControl& c : p.controls) {
      smax = std::max(smax, c.sigma);
      if (c.drift) {
        // sample the drift bound over the box
        for (int i = 0; i <= 16; ++i) {
          Point x = Point::zero(g.dim);
          x[0] = -g.box + 2.0 * g.box * i / 16.0;
          bmax = std::max(bmax, c.drift(x).norm());
          if (g.dim == 2) {
            x[1] = x[0];
            bmax = std::max(bmax, c.drift(x).norm());
          }
        }
      }
    }
    load += g.dim * (smax * smax) / (g.h * g.h) + g.dim * bmax / g.h;
  } else if (p.hamiltonian) {
    load += g.dim * p.slope_cap / g.h;
  }
  return load;
}

}  // namespace

double cfl_bound(const ProblemSpec& problem, const GridSpec& grid,
                 double delta, std::string* formula) {
  const SchemeOperator op =
      make_scheme_operator(problem.measure, delta, problem.quad_tol, grid.dim);
  const double h = grid.h;
  const double visc = 2.0 * grid.dim * problem.nu / (h * h);
  const double nonlocal = op.diagonal_load(h);
  const double ham = hamiltonian_load(problem, grid);
  const double denom = visc + nonlocal + ham;
  if (formula) {
    std::ostringstream os;
    os << "dt_max = 1 / (2 d nu/h^2 + C_inner/h^2 + W_outer + |drift|/h + "
          "L_H/h) = 1 / ("
       << visc << " + " << nonlocal << " + " << ham << ")";
    *formula = os.str();
  }
  if (denom == 0.0) return std::numeric_limits<double>::infinity();
  return 1.0 / denom;
}

namespace {

struct SpatialParts {
  SchemeOperator op;
  double diag_load = 0.0;  // per unit dt, with slope cap in the H term
};

SpatialParts make_parts(const ProblemSpec& p, const GridSpec& g,
                        double delta) {
  SpatialParts parts{make_scheme_operator(p.measure, delta, p.quad_tol, g.dim),
                     0.0};
  parts.diag_load = 2.0 * g.dim * p.nu / (g.h * g.h) +
                    parts.op.diagonal_load(g.h) + hamiltonian_load(p, g);
  return parts;
}

// F_h[u](x) for the scalar models (no control): gamma u + H - nu Lap - I - f
double spatial_residual(const ProblemSpec& p, const SpatialParts& parts,
                        const GridFunction& u, const GridIndex& idx,
                        const Point& x) {
  double r = p.gamma * u.at(idx);
  if (p.hamiltonian) r += godunov_half_p2(u, idx);
  if (p.nu > 0.0) r -= p.nu * laplacian(u, idx);
  r -= scheme_nonlocal(parts.op, u, idx);
  if (p.source) r -= p.source(x);
  return r;
}

}  // namespace

Trajectory solve_parabolic(const ProblemSpec& problem, const GridFunction& u0,
                           double delta,
                           const std::vector<double>& snap_times, double dt) {
  if (problem.kind == ProblemKind::Bellman)
    throw std::invalid_argument("parabolic marching has no control loop");
  GridSpec grid{u0.dim(), u0.box(), u0.h(), u0.extension()};
  SpatialParts parts = make_parts(problem, grid, delta);
  const double dt_max = parts.diag_load > 0.0 ? 1.0 / parts.diag_load
                                              : problem.horizon;
  if (dt == 0.0) dt = 0.9 * dt_max;
  if (dt > dt_max * (1.0 + 1e-12))
    throw CFLViolationError("dt exceeds the monotonicity bound");
  if (!(problem.horizon > 0.0))
    throw std::invalid_argument("parabolic horizon must be positive");

  const size_t steps =
      static_cast<size_t>(std::ceil(problem.horizon / dt - 1e-12));
  dt = problem.horizon / static_cast<double>(steps);

  Trajectory traj;
  traj.certificate.dt = dt;
  traj.certificate.cfl_denominator = parts.diag_load;
  traj.certificate.slope_cap = problem.slope_cap;
  traj.certificate.min_diagonal_coefficient = 1.0 - dt * parts.diag_load;
  cfl_bound(problem, grid, delta, &traj.certificate.formula);

  GridFunction u = u0;
  GridFunction next = u0;
  double t = 0.0;
  auto maybe_snapshot = [&](double time) {
    for (double want : snap_times)
      if (std::abs(time - want) <= 0.5 * dt + 1e-12) {
        traj.times.push_back(time);
        traj.snapshots.push_back(u);
        return;
      }
  };
  maybe_snapshot(0.0);
  for (size_t s = 0; s < steps; ++s) {
    double max_slope = 0.0;
    u.for_each_node([&](const GridIndex& idx, const Point& x) {
      if (problem.hamiltonian)
        max_slope = std::max(max_slope, local_slope(u, idx));
      double rate = scheme_nonlocal(parts.op, u, idx);
      if (problem.nu > 0.0) rate += problem.nu * laplacian(u, idx);
      if (problem.hamiltonian) rate -= godunov_half_p2(u, idx);
      if (problem.source) rate += problem.source(x);
      next.at(idx) = u.at(idx) + dt * rate;
    });
    traj.certificate.max_slope_seen =
        std::max(traj.certificate.max_slope_seen, max_slope);
    if (problem.hamiltonian && max_slope > problem.slope_cap + 1e-9)
      throw CFLViolationError(
          "slope left the declared range; monotonicity bound void");
    std::swap(u.values(), next.values());
    t += dt;
    maybe_snapshot(t);
  }
  u.refresh_sup_bound();
  if (traj.snapshots.empty() ||
      std::abs(traj.times.back() - problem.horizon) > 1e-9) {
    traj.times.push_back(t);
    traj.snapshots.push_back(u);
  }
  traj.certificate.monotone =
      traj.certificate.min_diagonal_coefficient >= -1e-12 &&
      traj.certificate.max_slope_seen <= problem.slope_cap + 1e-9;
  return traj;
}

GridFunction solve_stationary(const ProblemSpec& problem, const GridSpec& grid,
                              double delta, double tol, SolveStats* stats,
                              size_t max_iterations) {
  if (!(problem.gamma > 0.0))
    throw std::invalid_argument("stationary solve requires gamma > 0");
  SpatialParts parts = make_parts(problem, grid, delta);
  const double D = parts.diag_load;
  const double rho =
      D > 0.0 ? std::min(0.9 / D, 1.0 / (problem.gamma + D))
              : 1.0 / problem.gamma;

  GridFunction u(grid.dim, grid.box, grid.h, grid.extension, 0.0);
  GridFunction next = u;
  std::vector<double> residuals;
  double res = std::numeric_limits<double>::infinity();
  size_t it = 0;
  for (; it < max_iterations && res > tol; ++it) {
    res = 0.0;
    u.for_each_node([&](const GridIndex& idx, const Point& x) {
      const double r = spatial_residual(problem, parts, u, idx, x);
      res = std::max(res, std::abs(r));
      next.at(idx) = u.at(idx) - rho * r;
    });
    std::swap(u.values(), next.values());
    if (it < 64 || it % 64 == 0) residuals.push_back(res);
  }
  residuals.push_back(res);
  u.refresh_sup_bound();
  if (stats) {
    stats->residual_history = residuals;
    stats->iterations = it;
    stats->converged = res <= tol;
    stats->rho = rho;
    stats->certificate.dt = rho;
    stats->certificate.cfl_denominator = D;
    stats->certificate.min_diagonal_coefficient =
        1.0 - rho * (problem.gamma + D);
    stats->certificate.slope_cap = problem.slope_cap;
    stats->certificate.monotone =
        stats->certificate.min_diagonal_coefficient >= -1e-12;
    cfl_bound(problem, grid, delta, &stats->certificate.formula);
  }
  if (res > tol)
    throw NonConvergenceError("stationary iteration did not reach tolerance",
                              residuals);
  return u;
}

namespace {

// frozen-policy / per-control spatial operator value:
// L_a u = I^a[u] + (sigma_a^2/2) Lap u + b_a . grad u (upwind) + f_a
double control_rate(const BellmanControl& c, const SchemeOperator& op,
                    const GridFunction& u, const GridIndex& idx,
                    const Point& x) {
  double rate = scheme_nonlocal(op, u, idx);
  if (c.sigma != 0.0) rate += 0.5 * c.sigma * c.sigma * laplacian(u, idx);
  if (c.drift) {
    const Point b = c.drift(x);
    const double h = u.h();
    const int n = u.nodes_per_axis() - 1;
    for (int a = 0; a < u.dim(); ++a) {
      if (b[a] == 0.0) continue;
      const int di = a == 0 ? 1 : 0;
      const int dj = a == 1 ? 1 : 0;
      const auto at = [&](int i, int j) {
        if (u.extension() == Extension::Periodic) {
          i = ((i % n) + n) % n;
          j = ((j % n) + n) % n;
        } else {
          i = std::clamp(i, 0, n);
          j = std::clamp(j, 0, n);
        }
        return u.at({i, j});
      };
      const double fwd = (at(idx.i + di, idx.j + dj) - u.at(idx)) / h;
      const double bwd = (u.at(idx) - at(idx.i - di, idx.j - dj)) / h;
      rate += b[a] > 0.0 ? b[a] * fwd : b[a] * bwd;
    }
  }
  if (c.source) rate += c.source(x);
  return rate;
}

}  // namespace

BellmanResult solve_bellman(const ProblemSpec& problem, const GridSpec& grid,
                            double delta, double tol, size_t max_sweeps) {
  if (problem.controls.empty())
    throw std::invalid_argument("bellman solve needs a nonempty control list");
  if (!(problem.gamma > 0.0))
    throw std::invalid_argument("bellman solve requires lambda > 0");
  SpatialParts parts = make_parts(problem, grid, delta);
  const double D = parts.diag_load;
  const double rho =
      D > 0.0 ? std::min(0.9 / D, 1.0 / (problem.gamma + D))
              : 1.0 / problem.gamma;

  GridFunction u(grid.dim, grid.box, grid.h, grid.extension, 0.0);
  GridFunction next = u;
  std::vector<int> policy(u.node_count(), 0);
  const int n = u.nodes_per_axis() - 1;
  auto flat = [n](const GridIndex& idx) {
    return static_cast<size_t>(idx.i) +
           static_cast<size_t>(n + 1) * static_cast<size_t>(idx.j);
  };

  BellmanResult result{u, policy, {}, 0, true, 0.0};
  std::vector<double> residuals;

  auto bellman_residual = [&](const GridFunction& w, const GridIndex& idx,
                              const Point& x) {
    double best = -std::numeric_limits<double>::infinity();
    for (const BellmanControl& c : problem.controls)
      best = std::max(best, -control_rate(c, parts.op, w, idx, x));
    return problem.gamma * w.at(idx) + best;
  };

  bool first_improvement_done = false;
  for (size_t sweep = 0; sweep < max_sweeps; ++sweep) {
    // policy improvement: node-wise greedy argmax (first max wins)
    bool changed = false;
    u.for_each_node([&](const GridIndex& idx, const Point& x) {
      int best_a = 0;
      double best = -std::numeric_limits<double>::infinity();
      for (size_t a = 0; a < problem.controls.size(); ++a) {
        const double val =
            -control_rate(problem.controls[a], parts.op, u, idx, x);
        if (val > best) {
          best = val;
          best_a = static_cast<int>(a);
        }
      }
      if (policy[flat(idx)] != best_a) {
        policy[flat(idx)] = best_a;
        changed = true;
      }
    });

    // policy evaluation: damped iteration on the frozen-policy problem
    const double eval_tol = tol / 10.0;
    double res = std::numeric_limits<double>::infinity();
    size_t it = 0;
    const size_t eval_budget = 400000;
    for (; it < eval_budget && res > eval_tol; ++it) {
      res = 0.0;
      u.for_each_node([&](const GridIndex& idx, const Point& x) {
        const double r =
            problem.gamma * u.at(idx) -
            control_rate(problem.controls[static_cast<size_t>(
                             policy[flat(idx)])],
                         parts.op, u, idx, x);
        res = std::max(res, std::abs(r));
        next.at(idx) = u.at(idx) - rho * r;
      });
      std::swap(u.values(), next.values());
    }
    if (res > eval_tol)
      throw NonConvergenceError("policy evaluation stalled", {res});

    if (first_improvement_done) {
      double worst_increase = 0.0;
      for (size_t f = 0; f < u.values().size(); ++f)
        worst_increase =
            std::max(worst_increase, u.values()[f] - result.value.values()[f]);
      result.max_value_increase =
          std::max(result.max_value_increase, worst_increase);
      if (worst_increase > 1e-12) result.values_nonincreasing = false;
    }
    result.value = u;
    first_improvement_done = true;
    result.policy_sweeps = static_cast<int>(sweep) + 1;

    // Bellman residual with the current value
    double bres = 0.0;
    u.for_each_node([&](const GridIndex& idx, const Point& x) {
      bres = std::max(bres, std::abs(bellman_residual(u, idx, x)));
    });
    residuals.push_back(bres);
    if (!changed && bres <= tol) {
      result.stats.residual_history = residuals;
      result.stats.iterations = residuals.size();
      result.stats.converged = true;
      result.stats.rho = rho;
      result.stats.certificate.cfl_denominator = D;
      result.stats.certificate.min_diagonal_coefficient =
          1.0 - rho * (problem.gamma + D);
      result.stats.certificate.monotone =
          result.stats.certificate.min_diagonal_coefficient >= -1e-12;
      result.policy = policy;
      result.value.refresh_sup_bound();
      return result;
    }
  }
  throw NonConvergenceError("Howard iteration exhausted its sweep budget",
                            residuals);
}

ComparisonReport comparison_parabolic(
    const ProblemSpec& problem, double delta,
    const std::vector<std::pair<GridFunction, GridFunction>>& pairs,
    size_t steps) {
  ComparisonReport rep;
  rep.pairs = pairs.size();
  for (size_t pi = 0; pi < pairs.size(); ++pi) {
    const GridFunction& u0 = pairs[pi].first;
    const GridFunction& v0 = pairs[pi].second;
    GridSpec grid{u0.dim(), u0.box(), u0.h(), u0.extension()};
    SpatialParts parts = make_parts(problem, grid, delta);
    const double dt = 0.9 / std::max(parts.diag_load, 1e-12);

    GridFunction u = u0, v = v0, un = u0, vn = v0;
    for (size_t s = 0; s < steps; ++s) {
      u.for_each_node([&](const GridIndex& idx, const Point& x) {
        double rate = scheme_nonlocal(parts.op, u, idx);
        if (problem.nu > 0.0) rate += problem.nu * laplacian(u, idx);
        if (problem.hamiltonian) rate -= godunov_half_p2(u, idx);
        if (problem.source) rate += problem.source(x);
        un.at(idx) = u.at(idx) + dt * rate;
        double vrate = scheme_nonlocal(parts.op, v, idx);
        if (problem.nu > 0.0) vrate += problem.nu * laplacian(v, idx);
        if (problem.hamiltonian) vrate -= godunov_half_p2(v, idx);
        if (problem.source) vrate += problem.source(x);
        vn.at(idx) = v.at(idx) + dt * vrate;
      });
      std::swap(u.values(), un.values());
      std::swap(v.values(), vn.values());
      rep.steps_checked++;
      u.for_each_node([&](const GridIndex& idx, const Point&) {
        const double gap = u.at(idx) - v.at(idx);
        if (gap > 1e-12) {
          rep.violations++;
          rep.worst_gap = std::max(rep.worst_gap, gap);
          if (rep.witnesses.size() < 32)
            rep.witnesses.push_back({pi, s, idx, gap});
        }
      });
    }
  }
  return rep;
}

ComparisonReport comparison_stationary(
    const ProblemSpec& problem, const GridSpec& grid, double delta, double tol,
    const std::vector<std::pair<std::function<double(Point)>,
                                std::function<double(Point)>>>& source_pairs) {
  ComparisonReport rep;
  rep.pairs = source_pairs.size();
  SpatialParts parts = make_parts(problem, grid, delta);
  const double D = parts.diag_load;
  const double rho =
      D > 0.0 ? std::min(0.9 / D, 1.0 / (problem.gamma + D))
              : 1.0 / problem.gamma;

  for (size_t pi = 0; pi < source_pairs.size(); ++pi) {
    ProblemSpec pu = problem;
    pu.source = source_pairs[pi].first;
    ProblemSpec pv = problem;
    pv.source = source_pairs[pi].second;

    GridFunction u(grid.dim, grid.box, grid.h, grid.extension, 0.0);
    GridFunction v = u, un = u, vn = u;
    double res = std::numeric_limits<double>::infinity();
    size_t it = 0;
    const size_t budget = 500000;
    while (res > tol && it < budget) {
      res = 0.0;
      u.for_each_node([&](const GridIndex& idx, const Point& x) {
        const double ru = spatial_residual(pu, parts, u, idx, x);
        const double rv = spatial_residual(pv, parts, v, idx, x);
        res = std::max(res, std::max(std::abs(ru), std::abs(rv)));
        un.at(idx) = u.at(idx) - rho * ru;
        vn.at(idx) = v.at(idx) - rho * rv;
      });
      std::swap(u.values(), un.values());
      std::swap(v.values(), vn.values());
      ++it;
      rep.steps_checked++;
      u.for_each_node([&](const GridIndex& idx, const Point&) {
        const double gap = u.at(idx) - v.at(idx);
        if (gap > 1e-12) {
          rep.violations++;
          rep.worst_gap = std::max(rep.worst_gap, gap);
          if (rep.witnesses.size() < 32)
            rep.witnesses.push_back({pi, it, idx, gap});
        }
      });
    }
    if (res > tol)
      throw NonConvergenceError("stationary comparison run stalled", {res});
  }
  return rep;
}

std::vector<std::pair<GridFunction, GridFunction>> make_random_ordered_pairs(
    uint64_t seed, size_t count, const GridSpec& grid, double amplitude) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  std::vector<std::pair<GridFunction, GridFunction>> pairs;
  pairs.reserve(count);
  const double pi_over_L = 3.14159265358979323846 / grid.box;
  for (size_t c = 0; c < count; ++c) {
    std::array<double, 4> a{}, ph{}, b{}, phb{};
    for (int m = 0; m < 4; ++m) {
      a[static_cast<size_t>(m)] = amplitude * 0.25 * unif(rng);
      ph[static_cast<size_t>(m)] = 3.14159 * unif(rng);
      b[static_cast<size_t>(m)] = amplitude * 0.125 * unif(rng);
      phb[static_cast<size_t>(m)] = 3.14159 * unif(rng);
    }
    const double lift = 0.5 * amplitude * (0.5 + 0.5 * unif(rng));
    auto base = [=](const Point& x) {
      double s = 0.0;
      for (int m = 0; m < 4; ++m)
        s += a[static_cast<size_t>(m)] *
             std::cos((m + 1) * pi_over_L * (x[0] + x[1]) +
                      ph[static_cast<size_t>(m)]);
      return s;
    };
    auto bump = [=](const Point& x) {
      double s = 0.0;
      for (int m = 0; m < 4; ++m)
        s += b[static_cast<size_t>(m)] *
             std::cos((m + 1) * pi_over_L * (x[0] - x[1]) +
                      phb[static_cast<size_t>(m)]);
      // nonnegative lift dominating the oscillation
      double cap = 0.0;
      for (int m = 0; m < 4; ++m) cap += std::abs(b[static_cast<size_t>(m)]);
      return s + cap + lift;
    };
    GridFunction u = GridFunction::sample(base, grid.dim, grid.box, grid.h,
                                          grid.extension);
    GridFunction v = GridFunction::sample(
        [&](Point x) { return base(x) + bump(x); }, grid.dim, grid.box,
        grid.h, grid.extension);
    pairs.emplace_back(std::move(u), std::move(v));
  }
  return pairs;
}

}  // namespace levyscope
