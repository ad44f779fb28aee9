// SPDX-License-Identifier: Apache-2.0
#include "levyscope/nonlocal.hpp"

#include <algorithm>
#include <cmath>

#include "levyscope/errors.hpp"

namespace levyscope {

namespace {

void require_rule_delta(const QuadratureRule& rule, double delta) {
  if (std::abs(rule.delta - delta) > 1e-12 * std::max(1.0, delta))
    throw std::invalid_argument(
        "quadrature rule was built for a different delta");
}

// phi(x+z) - phi(x) - grad phi(x).z. Direct subtraction loses all relative
// accuracy once |z|^2 * ||D^2 phi|| sinks under the rounding noise of phi(x),
// and the graded inner weights grow like |z|^{-alpha}, so below a crossover
// radius the remainder is integrated exactly:
//   r(z) = int_0^1 (1-t) z.D^2 phi(x+tz) z dt   (2-point Gauss in t)
constexpr double kDeepRadius = 3e-4;

double second_remainder(const TestFunction& phi, const Point& x, double phix,
                        const Point& grad, const Point& z) {
  if (z.norm() >= kDeepRadius)
    return phi.value(x + z) - phix - grad.dot(z);
  constexpr double t1 = 0.5 - 0.28867513459481287;  // 1/(2 sqrt 3)
  constexpr double t2 = 0.5 + 0.28867513459481287;
  const double q1 = phi.hessian(x + z * t1).quad(z);
  const double q2 = phi.hessian(x + z * t2).quad(z);
  return 0.5 * ((1.0 - t1) * q1 + (1.0 - t2) * q2);
}

// Iterates the unfolded node set of one part of the rule; symmetric rules
// emit the mirror node right after its representative.
template <typename Fn>
void for_each_unfolded(const std::vector<Point>& nodes,
                       const std::vector<double>& weights, bool symmetric,
                       Fn&& fn) {
  for (size_t k = 0; k < nodes.size(); ++k) {
    fn(nodes[k], weights[k]);
    if (symmetric) fn(-nodes[k], weights[k]);
  }
}

double inner_error_bound(const QuadratureRule& rule, double hess_sup) {
  return 0.5 * hess_sup * rule.inner_moment2 * (rule.inner_rel_err + 1e-12);
}

double outer_error_bound(const QuadratureRule& rule, double sup_bound,
                         double p_norm) {
  const double sup_term = std::isfinite(sup_bound) ? sup_bound : 0.0;
  return 2.0 * sup_term * rule.tail_bound +
         (2.0 * sup_term + p_norm) * rule.outer_rel_err * rule.outer_mass;
}

}  // namespace

EvalResult eval_inner(const LevyMeasure& /*mu*/, const TestFunction& phi,
                      const Point& x, double delta,
                      const QuadratureRule& rule) {
  require_rule_delta(rule, delta);
  const double phix = phi.value(x);
  const Point grad = phi.gradient(x);
  double sum = 0.0;
  for_each_unfolded(rule.inner_nodes, rule.inner_weights, rule.symmetric,
                    [&](const Point& z, double w) {
                      sum += w * second_remainder(phi, x, phix, grad, z);
                    });
  return {sum, inner_error_bound(rule, phi.hessian_sup_norm()) +
                   1e-15 * (1.0 + std::abs(sum))};
}

EvalResult eval_outer(const LevyMeasure& mu, const FieldView& u,
                      const Point& x, const Point& p, double delta,
                      const QuadratureRule& rule) {
  require_rule_delta(rule, delta);
  if (u.is_grid() && !u.grid()->inside_box(x))
    throw OutsideBoxError("evaluation point lies outside the grid box");
  const double ux = u.value(x);

  // Smooth probes with known far structure: sample only the width-resolved
  // annuli and integrate the remaining measure tail analytically around the
  // probe's far value (the deviation goes into the error bound; for
  // oscillatory probes via the integration-by-parts envelope).
  size_t node_limit = rule.outer_nodes.size();
  double far_correction = 0.0;
  double far_error = 0.0;
  bool use_far = false;
  if (!u.is_grid() && mu.has_density()) {
    const TestFunction::FarBehavior fb = u.probe()->far_behavior();
    if (fb.kind != TestFunction::FarKind::None) {
      use_far = true;
      const bool fully_resolved =
          rule.outer_resolved_count == rule.outer_nodes.size();
      node_limit = rule.outer_resolved_count;
      const double rb = fully_resolved ? rule.r_max : rule.resolve_boundary;
      const double tail = tail_mass(mu, rb);
      far_correction = (fb.value - ux) * tail;
      const double dev = u.probe()->far_deviation(rb);
      if (fb.kind == TestFunction::FarKind::Localized) {
        far_error = dev * tail;
      } else {
        const double rho = mu.radial_density_total(rb);
        far_error = mu.dim() == 1
                        ? 2.0 * dev * rho / fb.wavenumber
                        : 4.0 * dev * rho * std::sqrt(rb / fb.wavenumber);
      }
      if (rb < 1.0 && !rule.symmetric)
        far_error += p.norm() * (tail - tail_mass(mu, 1.0));
    }
  }

  double sum = 0.0;
  if (rule.symmetric) {
    // fold pairs so the compensator cancels exactly
    for (size_t k = 0; k < node_limit; ++k) {
      const Point& z = rule.outer_nodes[k];
      sum += rule.outer_weights[k] *
             (u.value(x + z) + u.value(x - z) - 2.0 * ux);
    }
  } else {
    for (size_t k = 0; k < node_limit; ++k) {
      const Point& z = rule.outer_nodes[k];
      const double comp = z.norm() <= 1.0 ? p.dot(z) : 0.0;
      sum += rule.outer_weights[k] * (u.value(x + z) - ux - comp);
    }
  }
  if (use_far) {
    const double sup_term =
        std::isfinite(u.sup_bound()) ? u.sup_bound() : 0.0;
    return {sum + far_correction,
            far_error +
                (2.0 * sup_term + p.norm()) * rule.outer_rel_err *
                    rule.outer_mass +
                1e-15 * (1.0 + std::abs(sum))};
  }
  return {sum, outer_error_bound(rule, u.sup_bound(), p.norm()) +
                   1e-15 * (1.0 + std::abs(sum))};
}

EvalResult eval_levy(const LevyMeasure& mu, const TestFunction& phi,
                     const Point& x, const QuadratureRule& rule) {
  const EvalResult in = eval_inner(mu, phi, x, rule.delta, rule);
  const EvalResult out =
      eval_outer(mu, FieldView(phi), x, phi.gradient(x), rule.delta, rule);
  return {in.value + out.value, in.error_bound + out.error_bound};
}

SplitEvaluation split_evaluate(const LevyMeasure& mu, const TestFunction& phi,
                               const FieldView& u, const Point& x, double delta,
                               const QuadratureRule& rule) {
  const EvalResult in = eval_inner(mu, phi, x, delta, rule);
  const EvalResult out = eval_outer(mu, u, x, phi.gradient(x), delta, rule);
  SplitEvaluation s;
  s.inner = in.value;
  s.outer = out.value;
  s.delta = delta;
  s.error_bound = in.error_bound + out.error_bound;
  return s;
}

OuterLimit eval_outer_limit(const LevyMeasure& mu, const GridFunction& u,
                            const ContactCertificate& cert,
                            const OuterLimitOptions& opts) {
  if (!is_discrete_contact(u, cert.probe, cert.node, cert.radius, cert.kind))
    throw NotContactPointError("certificate does not hold on the grid");
  const Point x = cert.x;
  const Point p = cert.probe.gradient(x);
  const double floor = -opts.floor_scale * (1.0 + u.sup_bound());

  OuterLimit result;
  std::vector<double> v;
  double prev_extrap = 0.0;
  bool have_prev_extrap = false;
  for (int m = opts.first_level; m <= opts.max_level; ++m) {
    const double delta = std::pow(2.0, -m);
    const QuadratureRule rule = build_quadrature(mu, delta, opts.quad_tol);
    v.push_back(eval_outer(mu, u, x, p, delta, rule).value);
    result.levels_used = static_cast<int>(v.size());
    result.last_partial = v.back();
    const size_t n = v.size();
    if (n < 3) continue;
    const double d1 = v[n - 2] - v[n - 3];
    const double d2 = v[n - 1] - v[n - 2];
    // divergence: still sinking fast while already below the floor
    if (v[n - 1] < floor && d2 < 0.0 &&
        std::abs(d2) > opts.min_drop_ratio * std::abs(v[n - 1])) {
      result.finite = false;
      result.slope = std::abs(d1) > 0.0 ? std::log2(std::abs(d2 / d1)) : 0.0;
      result.value = 0.0;
      return result;
    }
    // Aitken extrapolation of the geometric tail
    const double denom = d2 - d1;
    double extrap = v[n - 1];
    if (std::abs(denom) > 1e-14 * (std::abs(d1) + std::abs(d2)) &&
        std::abs(d2) < std::abs(d1))
      extrap = v[n - 1] - d2 * d2 / denom;
    if (have_prev_extrap && std::abs(extrap - prev_extrap) <=
                                opts.stop_rel * (1.0 + std::abs(extrap))) {
      result.finite = true;
      result.value = extrap;
      result.slope = std::abs(d1) > 0.0 ? std::log2(std::abs(d2 / d1)) : 0.0;
      return result;
    }
    prev_extrap = extrap;
    have_prev_extrap = true;
  }
  result.finite = true;
  result.value = have_prev_extrap ? prev_extrap : result.last_partial;
  return result;
}

namespace {

// Composed-jump evaluation core. comp_mode selects the subtracted term:
//   0: none (already folded into the remainder)
//   1: weighted, uncompensated (add back grad.j so only the raw difference
//      phi(x+j)-phi(x) is integrated)
enum class InnerComp { Compensated, Uncompensated };

template <typename MapFn, typename WeightFn>
double composed_inner(const QuadratureRule& rule, const TestFunction& phi,
                      const Point& x, const MapFn& jm, const WeightFn& wfn,
                      InnerComp mode) {
  const double phix = phi.value(x);
  const Point grad = phi.gradient(x);
  double sum = 0.0;
  for_each_unfolded(
      rule.inner_nodes, rule.inner_weights, rule.symmetric,
      [&](const Point& z, double w) {
        const Point j = jm(z);
        double term = second_remainder(phi, x, phix, grad, j);
        if (mode == InnerComp::Uncompensated) term += grad.dot(j);
        sum += w * wfn(z) * term;
      });
  return sum;
}

}  // namespace

SplitEvaluation eval_levy_ito(const LevyMeasure& mu, const JumpMap& jmap,
                              const TestFunction& phi, const FieldView& u,
                              const Point& x, const Point& p, double delta,
                              const QuadratureRule& rule) {
  require_rule_delta(rule, delta);
  if (jmap.is_identity()) {
    const EvalResult in = eval_inner(mu, phi, x, delta, rule);
    const EvalResult out = eval_outer(mu, u, x, p, delta, rule);
    SplitEvaluation s;
    s.inner = in.value;
    s.outer = out.value;
    s.delta = delta;
    s.error_bound = in.error_bound + out.error_bound;
    return s;
  }
  SplitEvaluation s;
  s.delta = delta;
  auto jm = [&](const Point& z) { return jmap.apply(x, z); };
  s.inner = composed_inner(rule, phi, x, jm,
                           [](const Point&) { return 1.0; },
                           InnerComp::Compensated);
  const double ux = u.value(x);
  double outer = 0.0;
  for_each_unfolded(rule.outer_nodes, rule.outer_weights, rule.symmetric,
                    [&](const Point& z, double w) {
                      const Point j = jm(z);
                      const double comp = z.norm() <= 1.0 ? p.dot(j) : 0.0;
                      outer += w * (u.value(x + j) - ux - comp);
                    });
  s.outer = outer;
  const double c2 = jmap.linear_bound() * jmap.linear_bound();
  s.error_bound = inner_error_bound(rule, phi.hessian_sup_norm()) * c2 +
                  outer_error_bound(rule, u.sup_bound(),
                                    p.norm() * jmap.linear_bound());
  return s;
}

SplitEvaluation eval_levy_ito(const LevyMeasure& mu, const JumpMap& jmap,
                              const TestFunction& phi, const Point& x,
                              double delta, const QuadratureRule& rule) {
  return eval_levy_ito(mu, jmap, phi, FieldView(phi), x, phi.gradient(x),
                       delta, rule);
}

SplitEvaluation eval_K(const LevyMeasure& /*mu*/, const JumpMap& beta,
                       const TestFunction& phi, const Point& x, double delta,
                       const QuadratureRule& rule) {
  require_rule_delta(rule, delta);
  SplitEvaluation s;
  s.delta = delta;
  auto jm = [&](const Point& z) { return beta.apply(x, z); };
  auto one = [](const Point&) { return 1.0; };
  s.inner = composed_inner(rule, phi, x, jm, one, InnerComp::Compensated);
  // outer keeps the full compensator (no unit-ball cutoff)
  const double phix = phi.value(x);
  const Point grad = phi.gradient(x);
  double outer = 0.0;
  for_each_unfolded(rule.outer_nodes, rule.outer_weights, rule.symmetric,
                    [&](const Point& z, double w) {
                      const Point j = jm(z);
                      outer += w * (phi.value(x + j) - phix - grad.dot(j));
                    });
  s.outer = outer;
  const double c2 = beta.linear_bound() * beta.linear_bound();
  s.error_bound =
      inner_error_bound(rule, phi.hessian_sup_norm()) * c2 +
      outer_error_bound(rule, phi.sup_norm(), grad.norm() * beta.linear_bound());
  return s;
}

SplitEvaluation eval_B(const LevyMeasure& /*mu*/, const JumpMap& beta,
                       const GammaWeight& gamma, const TestFunction& phi,
                       const Point& x, double delta,
                       const QuadratureRule& rule) {
  require_rule_delta(rule, delta);
  SplitEvaluation s;
  s.delta = delta;
  auto jm = [&](const Point& z) { return beta.apply(x, z); };
  auto wfn = [&](const Point& z) { return gamma.value(x, z); };
  s.inner = composed_inner(rule, phi, x, jm, wfn, InnerComp::Uncompensated);
  const double phix = phi.value(x);
  double outer = 0.0;
  for_each_unfolded(rule.outer_nodes, rule.outer_weights, rule.symmetric,
                    [&](const Point& z, double w) {
                      outer += w * wfn(z) * (phi.value(x + jm(z)) - phix);
                    });
  s.outer = outer;
  const double c2 = beta.linear_bound() * beta.linear_bound();
  s.error_bound =
      gamma.sup_bound() *
      (inner_error_bound(rule, phi.hessian_sup_norm()) * c2 +
       (phi.gradient_sup_norm() * beta.linear_bound() * rule.delta + 1.0) *
           rule.inner_rel_err * rule.inner_moment2 +
       outer_error_bound(rule, phi.sup_norm(), 0.0));
  return s;
}

}  // namespace levyscope
