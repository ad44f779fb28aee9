// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "levyscope/contact.hpp"
#include "levyscope/fields.hpp"
#include "levyscope/jump_maps.hpp"
#include "levyscope/measures.hpp"
#include "levyscope/quadrature.hpp"

namespace levyscope {

struct EvalResult {
  double value = 0.0;
  double error_bound = 0.0;
};

/// Split value of a nonlocal operator at one point. When both parts are
/// finite, inner + outer reconstructs the unsplit value within
/// 2 * error_bound.
struct SplitEvaluation {
  double inner = 0.0;
  double outer = 0.0;
  bool outer_finite = true;
  double delta = 0.0;
  double error_bound = 0.0;

  double total() const { return inner + outer; }
};

/// Full compensated jump integral of a smooth probe (compensator on the unit
/// ball). For symmetric measures the nodes fold in +/- pairs, so odd parts
/// cancel exactly and the compensator drops.
EvalResult eval_levy(const LevyMeasure& mu, const TestFunction& phi,
                     const Point& x, const QuadratureRule& rule);

/// Near part over {|z| <= delta} with the full compensator (delta <= 1).
EvalResult eval_inner(const LevyMeasure& mu, const TestFunction& phi,
                      const Point& x, double delta, const QuadratureRule& rule);

/// Far part over {delta < |z| <= r_max} with slope p in the compensator on
/// the unit ball; the field may be a grid function (multilinear interpolation
/// plus its extension rule) or a smooth probe.
EvalResult eval_outer(const LevyMeasure& mu, const FieldView& u,
                      const Point& x, const Point& p, double delta,
                      const QuadratureRule& rule);

/// Both split parts of the plain jump operator: inner on the probe, outer on
/// the field with p = grad probe(x).
SplitEvaluation split_evaluate(const LevyMeasure& mu, const TestFunction& phi,
                               const FieldView& u, const Point& x, double delta,
                               const QuadratureRule& rule);

struct OuterLimitOptions {
  int first_level = 2;       // start at delta = 2^-first_level
  int max_level = 48;
  double quad_tol = 1e-6;    // tolerance of the per-level rules
  double stop_rel = 1e-5;    // extrapolated-value stabilization test
  double floor_scale = 1e6;  // divergence floor = -floor_scale*(1+sup_bound)
  double min_drop_ratio = 0.10;
};

struct OuterLimit {
  bool finite = true;
  double value = 0.0;        // extrapolated limit when finite
  double slope = 0.0;        // fitted log2 growth rate of |increments|
  int levels_used = 0;
  double last_partial = 0.0;
};

/// Limit of eval_outer along delta = 2^-m at a certified discrete contact
/// point; diverging sequences are reported as a NegInfinity certificate when
/// the partial values sink below the configured floor while still dropping by
/// more than min_drop_ratio per dyadic level.
OuterLimit eval_outer_limit(const LevyMeasure& mu, const GridFunction& u,
                            const ContactCertificate& cert,
                            const OuterLimitOptions& opts = {});

/// Compensated jump operator with state-dependent jump size j(x,z); the
/// compensator indicator stays on z. Inner part uses the smooth probe, outer
/// part the supplied field with slope p.
SplitEvaluation eval_levy_ito(const LevyMeasure& mu, const JumpMap& jmap,
                              const TestFunction& phi, const FieldView& u,
                              const Point& x, const Point& p, double delta,
                              const QuadratureRule& rule);

/// Probe-only convenience overload (outer on the probe, p = grad phi(x)).
SplitEvaluation eval_levy_ito(const LevyMeasure& mu, const JumpMap& jmap,
                              const TestFunction& phi, const Point& x,
                              double delta, const QuadratureRule& rule);

/// Fully compensated operator: integrand phi(x+beta(x,z)) - phi(x)
/// - grad phi(x) . beta(x,z) over the whole space (no unit-ball cutoff).
SplitEvaluation eval_K(const LevyMeasure& mu, const JumpMap& beta,
                       const TestFunction& phi, const Point& x, double delta,
                       const QuadratureRule& rule);

/// Weighted uncompensated operator: (phi(x+beta(x,z)) - phi(x)) gamma(x,z).
SplitEvaluation eval_B(const LevyMeasure& mu, const JumpMap& beta,
                       const GammaWeight& gamma, const TestFunction& phi,
                       const Point& x, double delta,
                       const QuadratureRule& rule);

}  // namespace levyscope
