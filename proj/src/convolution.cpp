// SPDX-License-Identifier: Apache-2.0
#include "levyscope/convolution.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "levyscope/errors.hpp"

namespace levyscope {

ConvolutionResult sup_convolution(const GridFunction& U, const Point& r,
                                  double alpha) {
  if (!(alpha > 0.0)) throw std::invalid_argument("alpha must be positive");
  if (U.h() > 0.25 + 1e-12)
    throw GridTooCoarseError("mesh must resolve the unit search ball (h <= 0.25)");

  const double h = U.h();
  const int reach = static_cast<int>(std::floor(1.0 / h + 1e-9));
  const int n = U.nodes_per_axis() - 1;

  // offsets within the closed unit ball (distance exactly 1 included)
  std::vector<GridIndex> offsets;
  const int djmax = U.dim() == 2 ? reach : 0;
  for (int dj = -djmax; dj <= djmax; ++dj)
    for (int di = -reach; di <= reach; ++di) {
      const double dist2 = (di * h) * (di * h) + (dj * h) * (dj * h);
      if (dist2 <= 1.0 + 1e-12) offsets.push_back({di, dj});
    }

  GridFunction out(U.dim(), U.box(), h, U.extension(), 0.0);
  ConvolutionResult result(std::move(out), alpha, r, true);
  result.argmax_offset.resize(U.node_count(), Point::zero(U.dim()));

  U.for_each_node([&](const GridIndex& idx, const Point&) {
    double best = -std::numeric_limits<double>::infinity();
    GridIndex best_idx = idx;
    Point best_off = Point::zero(U.dim());
    // scan order = flat node order, strict improvement keeps the first
    // (lexicographically smallest) maximizer
    for (const GridIndex& off : offsets) {
      const GridIndex cand{idx.i + off.i, idx.j + off.j};
      if (cand.i < 0 || cand.i > n) continue;
      if (U.dim() == 2 && (cand.j < 0 || cand.j > n)) continue;
      Point w = Point::zero(U.dim());
      w[0] = off.i * h;
      if (U.dim() == 2) w[1] = off.j * h;
      const double val = U.at(cand) - r.dot(w) - w.norm2() / (2.0 * alpha);
      const bool better =
          val > best ||
          (val == best && (cand.j < best_idx.j ||
                           (cand.j == best_idx.j && cand.i < best_idx.i)));
      if (better) {
        best = val;
        best_idx = cand;
        best_off = w;
      }
    }
    result.values.at(idx) = best;
    size_t flat = static_cast<size_t>(idx.i) +
                  static_cast<size_t>(n + 1) * static_cast<size_t>(idx.j);
    result.argmax_offset[flat] = best_off;
  });
  result.values.refresh_sup_bound();
  return result;
}

ConvolutionResult inf_convolution(const GridFunction& V, const Point& r,
                                  double alpha) {
  GridFunction negV = V;
  for (double& v : negV.values()) v = -v;
  ConvolutionResult sup = sup_convolution(negV, -r, alpha);
  for (double& v : sup.values.values()) v = -v;
  sup.values.refresh_sup_bound();
  sup.sup_case = false;
  sup.slope = r;
  return sup;
}

SemiconvexityReport check_semiconvexity(const ConvolutionResult& W) {
  const GridFunction& u = W.values;
  const double h = u.h();
  const int n = u.nodes_per_axis() - 1;

  std::vector<GridIndex> dirs;
  dirs.push_back({1, 0});
  if (u.dim() == 2) {
    dirs.push_back({0, 1});
    dirs.push_back({1, 1});
    dirs.push_back({1, -1});
  }

  SemiconvexityReport rep;
  rep.floor = -1.0 / W.alpha;
  rep.tol = 10.0 * h / (W.alpha * W.alpha);
  rep.min_second_difference = std::numeric_limits<double>::infinity();

  u.for_each_node([&](const GridIndex& idx, const Point&) {
    for (const GridIndex& e : dirs) {
      const GridIndex fwd{idx.i + e.i, idx.j + e.j};
      const GridIndex bwd{idx.i - e.i, idx.j - e.j};
      if (fwd.i < 0 || fwd.i > n || bwd.i < 0 || bwd.i > n) continue;
      if (u.dim() == 2 && (fwd.j < 0 || fwd.j > n || bwd.j < 0 || bwd.j > n))
        continue;
      const double step2 =
          h * h * (static_cast<double>(e.i) * e.i + static_cast<double>(e.j) * e.j);
      const double d2 = (u.at(fwd) - 2.0 * u.at(idx) + u.at(bwd)) / step2;
      if (d2 < rep.min_second_difference) {
        rep.min_second_difference = d2;
        rep.worst_node = idx;
        Point dir = Point::zero(u.dim());
        dir[0] = e.i;
        if (u.dim() == 2) dir[1] = e.j;
        rep.worst_direction = dir;
      }
    }
  });
  rep.pass = rep.min_second_difference >= rep.floor - rep.tol;
  return rep;
}

}  // namespace levyscope
