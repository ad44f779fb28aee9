// SPDX-License-Identifier: Apache-2.0
#include "levyscope/relaxed.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "levyscope/errors.hpp"

namespace levyscope {

namespace {

// extremum of u over the grid ball of radius rho around each node
GridFunction ball_extremum(const GridFunction& u, double rho, bool upper) {
  GridFunction out(u.dim(), u.box(), u.h(), u.extension(), u.sup_bound());
  const int reach = static_cast<int>(std::floor(rho / u.h() + 1e-9));
  const int n = u.nodes_per_axis() - 1;
  u.for_each_node([&](const GridIndex& idx, const Point& x) {
    double best = u.at(idx);
    const int jlo = u.dim() == 2 ? std::max(0, idx.j - reach) : 0;
    const int jhi = u.dim() == 2 ? std::min(n, idx.j + reach) : 0;
    for (int j = jlo; j <= jhi; ++j)
      for (int i = std::max(0, idx.i - reach); i <= std::min(n, idx.i + reach);
           ++i) {
        const GridIndex cand{i, j};
        if ((u.node_point(cand) - x).norm() > rho + 1e-12) continue;
        best = upper ? std::max(best, u.at(cand)) : std::min(best, u.at(cand));
      }
    out.at(idx) = best;
  });
  out.refresh_sup_bound();
  return out;
}

}  // namespace

RelaxedLimitReport relaxed_limit(
    const std::vector<std::pair<double, GridFunction>>& family, bool upper) {
  if (family.empty())
    throw std::invalid_argument("relaxed_limit: family must be nonempty");
  const GridFunction& first = family.front().second;
  for (const auto& [eps, u] : family) {
    if (!(eps > 0.0))
      throw std::invalid_argument("relaxed_limit: eps must be positive");
    if (u.dim() != first.dim() || u.box() != first.box() ||
        u.h() != first.h())
      throw InconsistentGridsError("family members must share one grid");
  }
  for (size_t k = 1; k < family.size(); ++k)
    if (!(family[k].first < family[k - 1].first))
      throw std::invalid_argument(
          "relaxed_limit: family must be sorted by strictly decreasing eps");

  // per-member localized extremum with radius sqrt(eps_k)
  std::vector<GridFunction> localized;
  localized.reserve(family.size());
  RelaxedLimitReport rep(first);
  for (const auto& [eps, u] : family) {
    const double rho = std::sqrt(eps);
    rep.epsilons.push_back(eps);
    rep.radii.push_back(rho);
    localized.push_back(ball_extremum(u, rho, upper));
  }

  // level m keeps members k >= m; suffix extremum, recorded per level
  const size_t m_count = family.size();
  GridFunction level = localized.back();
  std::vector<GridFunction> levels(m_count, level);
  for (size_t back = 1; back < m_count; ++back) {
    const GridFunction& add = localized[m_count - 1 - back];
    GridFunction& prev = levels[m_count - back];
    GridFunction cur = prev;
    for (size_t f = 0; f < cur.values().size(); ++f)
      cur.values()[f] = upper ? std::max(prev.values()[f], add.values()[f])
                              : std::min(prev.values()[f], add.values()[f]);
    levels[m_count - 1 - back] = cur;
  }
  // levels[m] = extremum over members with eps <= eps_m
  rep.level_sup_change.assign(m_count, 0.0);
  for (size_t m = 1; m < m_count; ++m) {
    double change = 0.0;
    for (size_t f = 0; f < levels[m].values().size(); ++f)
      change = std::max(change, std::abs(levels[m].values()[f] -
                                         levels[m - 1].values()[f]));
    rep.level_sup_change[m] = change;
  }
  rep.limit = levels.back();
  rep.limit.refresh_sup_bound();
  rep.upper = upper;
  return rep;
}

}  // namespace levyscope
