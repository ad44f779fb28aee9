// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "levyscope/geometry.hpp"

namespace levyscope {

enum class MeasureKind { StableAnisotropic, Tempered1d, BoundedTable };

struct Atom {
  Point z;
  double mass = 0.0;
};

/// Jump measure with a possibly singular density at the origin.
///
/// Three parametric families are supported:
///  - StableAnisotropic: density g(z/|z|) / |z|^{d+alpha} on R^d, d in {1,2},
///    alpha in (0,2). For d=1 the angular density is the pair (g(+1), g(-1));
///    for d=2 it is sampled on a uniform angle grid.
///  - Tempered1d: one-sided exponentials e^{-gp z} (z>0), e^{gm z} (z<0),
///    both divided by |z|, on R.
///  - BoundedTable: a finite list of atoms away from the origin.
class LevyMeasure {
 public:
  /// d=1 stable measure with one-sided angular weights.
  static LevyMeasure stable_1d(double alpha, double g_plus, double g_minus);

  /// d=2 stable measure; g sampled at angles 2*pi*j/M, j = 0..M-1, M >= 4 even.
  static LevyMeasure stable_2d(double alpha, std::vector<double> g_samples);

  /// d=2 stable measure with constant angular density on n_angles nodes.
  static LevyMeasure stable_2d_uniform(double alpha, double g_const,
                                       int n_angles = 64);

  static LevyMeasure tempered_1d(double gamma_plus, double gamma_minus);

  static LevyMeasure bounded_table(std::vector<Atom> atoms);

  MeasureKind kind() const { return kind_; }
  int dim() const { return dim_; }
  double alpha() const { return alpha_; }
  double gamma_plus() const { return gamma_plus_; }
  double gamma_minus() const { return gamma_minus_; }
  const std::vector<Atom>& atoms() const { return atoms_; }
  const std::vector<double>& angular_samples() const { return angular_; }

  /// Lebesgue density at z != 0. Throws ZeroPointError at the origin and
  /// NoDensityError for atomic measures.
  double density(const Point& z) const;

  /// Angular density at angle theta (d=2), periodic linear interpolation of
  /// the samples; for d=1, theta >= 0 selects g(+1) and theta < 0 selects
  /// g(-1).
  double angular_density(double theta) const;

  /// Integral of the angular density over the sphere: g(+1)+g(-1) for d=1,
  /// trapezoid of the samples over [0,2*pi) for d=2.
  double angular_total() const;

  /// True when the measure is invariant under z -> -z (detected from the
  /// parameters, used to enable paired quadrature nodes).
  bool symmetric() const;

  /// Density integrated over the sphere of radius r (the radial profile of
  /// the measure); zero for atomic measures.
  double radial_density_total(double r) const;

  bool has_density() const { return kind_ != MeasureKind::BoundedTable; }

  std::string describe() const;

 private:
  LevyMeasure() = default;

  MeasureKind kind_ = MeasureKind::StableAnisotropic;
  int dim_ = 1;
  double alpha_ = 0.0;
  double g_plus_ = 0.0, g_minus_ = 0.0;
  std::vector<double> angular_;  // d=2 samples
  double gamma_plus_ = 0.0, gamma_minus_ = 0.0;
  std::vector<Atom> atoms_;
};

/// Outcome of a small-ball moment computation; the integral may diverge at
/// the origin, which is a legitimate result rather than an error.
struct Moment {
  bool divergent = false;
  double value = 0.0;

  static Moment finite(double v) { return {false, v}; }
  static Moment diverged() { return {true, 0.0}; }
};

/// int_{|z|<=delta} |z|^exponent mu(dz); closed form for the stable family,
/// graded quadrature for the tempered one, direct sum for atoms.
Moment small_ball_moment(const LevyMeasure& mu, double exponent, double delta);

/// int_{|z|>R} mu(dz), exact via antiderivatives (R >= 1 required upstream,
/// any R > 0 accepted here).
double tail_mass(const LevyMeasure& mu, double radius);

struct LevyConditionReport {
  bool finite = true;
  double estimate = 0.0;   // int min(|z|^2,1) mu(dz) when finite
  double exponent = 0.0;   // detected jump-activity exponent near 0
  double slope = 0.0;      // fitted log2 decay rate of dyadic shell moments
};

/// Numerically checks int min(|z|^2,1) mu(dz) < infinity by grading dyadic
/// shells toward the origin and regressing their second-moment contributions.
LevyConditionReport verify_levy_condition(const LevyMeasure& mu);

/// Same estimator on a raw radial density r -> f(r) (the full density on a
/// sphere of radius r, i.e. already integrated over angles), used to probe
/// synthetic densities that the measure constructors reject.
LevyConditionReport verify_levy_condition_density(
    const std::function<double(double)>& radial_density, double tail_integral);

}  // namespace levyscope
