// SPDX-License-Identifier: Apache-2.0
#include "levyscope/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "levyscope/errors.hpp"

namespace levyscope {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Appends radial nodes on [lo,hi] for one side / one angle ray. `radial`
// yields the density times the surface Jacobian along the ray.
template <typename Density, typename Emit>
void annulus_nodes(const GaussRule& gl, double lo, double hi,
                   const Density& radial, const Emit& emit) {
  const double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
  for (size_t q = 0; q < gl.x.size(); ++q) {
    const double r = mid + half * gl.x[q];
    emit(r, gl.w[q] * half * radial(r));
  }
}

struct Ray {
  Point direction;  // unit vector
  double weight;    // angular weight (1 for d=1 sides)
};

// Rays along which radial quadrature runs. For symmetric measures only one
// of each +/- pair is listed and `folded` is set.
struct RaySet {
  std::vector<Ray> rays;
  bool folded = false;
};

RaySet make_rays(const LevyMeasure& mu) {
  RaySet rs;
  rs.folded = mu.symmetric();
  if (mu.dim() == 1) {
    rs.rays.push_back({Point(1.0), 1.0});
    if (!rs.folded) rs.rays.push_back({Point(-1.0), 1.0});
    return rs;
  }
  const size_t n = mu.angular_samples().size();
  const size_t count = rs.folded ? n / 2 : n;
  for (size_t j = 0; j < count; ++j) {
    const double th = kTwoPi * static_cast<double>(j) / static_cast<double>(n);
    rs.rays.push_back({Point(std::cos(th), std::sin(th)),
                       kTwoPi / static_cast<double>(n)});
  }
  return rs;
}

// density along a ray times the polar Jacobian (r^{d-1})
double ray_radial_density(const LevyMeasure& mu, const Ray& ray, double r) {
  const Point z = ray.direction * r;
  const double d = mu.density(z);
  return mu.dim() == 2 ? d * r : d;
}

QuadratureRule build_atomic(const LevyMeasure& mu, double delta) {
  QuadratureRule rule;
  rule.dim = mu.dim();
  rule.delta = delta;
  rule.symmetric = false;  // atoms are kept verbatim
  double rmax = 1.0;
  for (const Atom& a : mu.atoms()) {
    const double r = a.z.norm();
    rmax = std::max(rmax, r);
    if (r <= delta) {
      rule.inner_nodes.push_back(a.z);
      rule.inner_weights.push_back(a.mass);
      rule.inner_moment2 += a.mass * a.z.norm2();
    } else {
      rule.outer_nodes.push_back(a.z);
      rule.outer_weights.push_back(a.mass);
      rule.outer_mass += a.mass;
    }
  }
  rule.r_max = rmax;
  rule.core_radius = 0.0;
  rule.tail_bound = 0.0;
  rule.inner_rel_err = 0.0;
  rule.outer_rel_err = 0.0;
  rule.outer_resolved_count = rule.outer_nodes.size();  // atoms are exact
  rule.resolve_boundary = rmax;
  return rule;
}

// Closed-form bound on int_{|z| < eps} |z|^2 mu(dz).
double core_moment_bound(const LevyMeasure& mu, double eps) {
  if (mu.kind() == MeasureKind::StableAnisotropic) {
    const double p = 2.0 - mu.alpha();
    return mu.angular_total() * std::pow(eps, p) / p;
  }
  // tempered: r^2 * density <= r * (one per side)
  return eps * eps;
}

}  // namespace

QuadratureRule build_quadrature(const LevyMeasure& mu, double delta, double tol,
                                const QuadratureOptions& opts) {
  if (!(delta > 0.0 && delta <= 1.0))
    throw std::invalid_argument("build_quadrature: delta must lie in (0,1]");
  if (!(tol > 0.0)) throw std::invalid_argument("build_quadrature: tol > 0");
  if (mu.kind() == MeasureKind::BoundedTable) return build_atomic(mu, delta);

  const GaussRule gl = gauss_legendre(opts.radial_order);
  const RaySet rays = make_rays(mu);

  QuadratureRule rule;
  rule.dim = mu.dim();
  rule.delta = delta;
  rule.symmetric = rays.folded;

  // --- inner part: geometric grading toward 0, depth driven by a Richardson
  // comparison of consecutive depths plus the closed-form core bound.
  double moment_prev = -1.0;
  int depth = 6;
  for (;;) {
    rule.inner_nodes.clear();
    rule.inner_weights.clear();
    rule.inner_moment2 = 0.0;
    double hi = delta;
    for (int k = 0; k < depth; ++k) {
      const double lo = 0.5 * hi;
      for (const Ray& ray : rays.rays) {
        annulus_nodes(gl, lo, hi,
                      [&](double r) { return ray_radial_density(mu, ray, r); },
                      [&](double r, double w) {
                        rule.inner_nodes.push_back(ray.direction * r);
                        rule.inner_weights.push_back(w * ray.weight);
                        const double unfold = rays.folded ? 2.0 : 1.0;
                        rule.inner_moment2 += unfold * w * ray.weight * r * r;
                      });
      }
      hi = lo;
    }
    rule.core_radius = hi;
    const double core = core_moment_bound(mu, hi) *
                        (rays.folded ? 1.0 : 1.0);
    const double richardson =
        moment_prev < 0.0 ? rule.inner_moment2
                          : std::abs(rule.inner_moment2 - moment_prev);
    if (rule.inner_moment2 > 0.0 &&
        core <= 0.3 * tol * rule.inner_moment2 &&
        richardson <= 0.3 * tol * rule.inner_moment2) {
      rule.inner_rel_err = (core + richardson) / rule.inner_moment2 + 1e-13;
      break;
    }
    if (rule.inner_moment2 == 0.0) {  // zero measure
      rule.inner_rel_err = 0.0;
      break;
    }
    moment_prev = rule.inner_moment2;
    depth += 4;
    if (rule.node_count() > opts.max_nodes)
      throw TolUnreachableError("inner quadrature node budget exceeded");
  }

  // --- outer part: geometric growth up to r_max with
  // tail_mass(r_max) <= tol * tail_mass(1); widths capped below the resolve
  // radius so slowly varying bounded fields are not aliased.
  const double tail_target = tol * tail_mass(mu, 1.0);
  double resolve_radius = opts.resolve_radius;
  if (resolve_radius < 0.0) resolve_radius = mu.dim() == 1 ? 4e4 : 2048.0;
  double lo = delta;
  rule.resolve_boundary = delta;
  while (tail_mass(mu, lo) > tail_target) {
    double hi = 2.0 * lo;
    if (lo < resolve_radius) {
      hi = std::min(hi, lo + opts.resolve_width);
      rule.resolve_boundary = hi;
    }
    for (const Ray& ray : rays.rays) {
      annulus_nodes(gl, lo, hi,
                    [&](double r) { return ray_radial_density(mu, ray, r); },
                    [&](double r, double w) {
                      rule.outer_nodes.push_back(ray.direction * r);
                      rule.outer_weights.push_back(w * ray.weight);
                      const double unfold = rays.folded ? 2.0 : 1.0;
                      rule.outer_mass += unfold * w * ray.weight;
                    });
    }
    if (hi <= rule.resolve_boundary + 1e-12)
      rule.outer_resolved_count = rule.outer_nodes.size();
    lo = hi;
    if (rule.node_count() > opts.max_nodes)
      throw TolUnreachableError("outer quadrature node budget exceeded");
  }
  rule.r_max = lo;
  rule.tail_bound = tail_mass(mu, rule.r_max);

  const double shell = tail_mass(mu, delta) - rule.tail_bound;
  rule.outer_rel_err =
      shell > 0.0 ? std::abs(rule.outer_mass - shell) / shell + 1e-13 : 0.0;
  return rule;
}

}  // namespace levyscope
