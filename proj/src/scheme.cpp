// SPDX-License-Identifier: Apache-2.0
#include "levyscope/scheme.hpp"

#include <algorithm>
#include <cmath>

#include "levyscope/errors.hpp"

namespace levyscope {

SchemeOperator make_scheme_operator(const LevyMeasure& mu, double delta,
                                    double quad_tol, int dim) {
  if (mu.dim() != dim)
    throw std::invalid_argument("measure dimension does not match the grid");
  QuadratureOptions opts;
  opts.resolve_radius = 0.0;  // grid fields settle far out; octaves suffice
  const QuadratureRule rule = build_quadrature(mu, delta, quad_tol, opts);
  SchemeOperator op;
  op.dim = dim;
  op.delta = delta;
  op.drift = Point::zero(dim);
  op.tail_bound = rule.tail_bound;

  double m2x = 0.0, m2y = 0.0, m2xy = 0.0;
  auto add_inner = [&](const Point& z, double w) {
    m2x += w * z[0] * z[0];
    m2y += w * z[1] * z[1];
    m2xy += w * z[0] * z[1];
  };
  for (size_t k = 0; k < rule.inner_nodes.size(); ++k) {
    add_inner(rule.inner_nodes[k], rule.inner_weights[k]);
    if (rule.symmetric) add_inner(-rule.inner_nodes[k], rule.inner_weights[k]);
  }
  if (dim == 2 && std::abs(m2xy) > 1e-10 * (m2x + m2y))
    throw std::invalid_argument(
        "scheme operator needs a diagonal truncated second moment; rotate the "
        "angular density or use d=1");
  op.moment2_x = m2x;
  op.moment2_y = m2y;

  for (size_t k = 0; k < rule.outer_nodes.size(); ++k) {
    const Point& z = rule.outer_nodes[k];
    const double w = rule.outer_weights[k];
    op.jump_nodes.push_back(z);
    op.jump_weights.push_back(w);
    op.jump_mass += w;
    if (rule.symmetric) {
      op.jump_nodes.push_back(-z);
      op.jump_weights.push_back(w);
      op.jump_mass += w;
    } else if (z.norm() <= 1.0) {
      op.drift = op.drift + z * w;
    }
  }
  return op;
}

namespace {

double clamped_at(const GridFunction& u, int i, int j) {
  const int n = u.nodes_per_axis() - 1;
  if (u.extension() == Extension::Periodic) {
    i = ((i % n) + n) % n;
    j = ((j % n) + n) % n;
  } else {
    i = std::clamp(i, 0, n);
    j = std::clamp(j, 0, n);
  }
  return u.at({i, j});
}

}  // namespace

double scheme_nonlocal(const SchemeOperator& op, const GridFunction& u,
                       const GridIndex& idx) {
  const double h = u.h();
  const double uc = u.at(idx);
  // near part: second differences weighted by the truncated second moments
  double val = 0.5 * op.moment2_x *
               (clamped_at(u, idx.i + 1, idx.j) - 2.0 * uc +
                clamped_at(u, idx.i - 1, idx.j)) /
               (h * h);
  if (op.dim == 2)
    val += 0.5 * op.moment2_y *
           (clamped_at(u, idx.i, idx.j + 1) - 2.0 * uc +
            clamped_at(u, idx.i, idx.j - 1)) /
           (h * h);
  // far part: direct quadrature of the uncompensated jumps
  const Point x = u.node_point(idx);
  for (size_t k = 0; k < op.jump_nodes.size(); ++k)
    val += op.jump_weights[k] * (u.value(x + op.jump_nodes[k]) - uc);
  // compensator drift (non-symmetric measures), upwind in the velocity
  // c = -drift of the term c . grad u added to the operator value
  for (int a = 0; a < op.dim; ++a) {
    const double c = -op.drift[a];
    if (c == 0.0) continue;
    const int di = a == 0 ? 1 : 0;
    const int dj = a == 1 ? 1 : 0;
    const double fwd =
        (clamped_at(u, idx.i + di, idx.j + dj) - uc) / h;
    const double bwd =
        (uc - clamped_at(u, idx.i - di, idx.j - dj)) / h;
    val += c > 0.0 ? c * fwd : c * bwd;
  }
  return val;
}

double godunov_half_p2(const GridFunction& u, const GridIndex& idx) {
  const double h = u.h();
  const double uc = u.at(idx);
  double H = 0.0;
  for (int a = 0; a < u.dim(); ++a) {
    const int di = a == 0 ? 1 : 0;
    const int dj = a == 1 ? 1 : 0;
    const double bwd = (uc - clamped_at(u, idx.i - di, idx.j - dj)) / h;
    const double fwd = (clamped_at(u, idx.i + di, idx.j + dj) - uc) / h;
    const double am = std::max(bwd, 0.0);
    const double bm = std::min(fwd, 0.0);
    H += 0.5 * std::max(am * am, bm * bm);
  }
  return H;
}

double local_slope(const GridFunction& u, const GridIndex& idx) {
  const double h = u.h();
  const double uc = u.at(idx);
  double s = 0.0;
  for (int a = 0; a < u.dim(); ++a) {
    const int di = a == 0 ? 1 : 0;
    const int dj = a == 1 ? 1 : 0;
    s = std::max(s, std::abs(uc - clamped_at(u, idx.i - di, idx.j - dj)) / h);
    s = std::max(s, std::abs(clamped_at(u, idx.i + di, idx.j + dj) - uc) / h);
  }
  return s;
}

double laplacian(const GridFunction& u, const GridIndex& idx) {
  const double h = u.h();
  const double uc = u.at(idx);
  double lap = (clamped_at(u, idx.i + 1, idx.j) - 2.0 * uc +
                clamped_at(u, idx.i - 1, idx.j)) /
               (h * h);
  if (u.dim() == 2)
    lap += (clamped_at(u, idx.i, idx.j + 1) - 2.0 * uc +
            clamped_at(u, idx.i, idx.j - 1)) /
           (h * h);
  return lap;
}

}  // namespace levyscope
