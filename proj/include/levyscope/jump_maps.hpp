// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>

#include "levyscope/geometry.hpp"

namespace levyscope {

enum class JumpKind { Identity, LinearInZ, Shear };

/// State-dependent jump size j(x,z) from a small closed-form catalog:
///   identity:    j = z
///   linear_in_z: j = A z with A a constant matrix
///   shear:       j = z (1 + b(x) / (1+|z|^2)), b(x) = amp sin(freq sum(x_i))
/// The x-dependent part of the shear decays like 1/|z|^2 at infinity so the
/// map keeps a finite second moment against every supported measure.
class JumpMap {
 public:
  static JumpMap identity(int dim);
  static JumpMap linear_in_z(const SymMat& A);
  static JumpMap shear(int dim, double b_amp, double b_freq);

  Point apply(const Point& x, const Point& z) const;

  JumpKind kind() const { return kind_; }
  int dim() const { return dim_; }
  bool is_identity() const { return kind_ == JumpKind::Identity; }

  /// declared constant c with |j(x,z)| <= c |z|
  double linear_bound() const { return linear_bound_; }
  /// declared constant dominating both integral ratios of the x-regularity
  /// check (measure-dependent; set by the caller)
  double a1_constant() const { return a1_constant_; }
  /// Lipschitz constant of x -> b(x) (shear) or 0
  double x_lipschitz() const { return x_lipschitz_; }

  JumpMap with_declared_bounds(double linear_bound, double a1_constant) const;

  std::string describe() const;

 private:
  JumpMap() = default;

  JumpKind kind_ = JumpKind::Identity;
  int dim_ = 1;
  SymMat matrix_;
  double b_amp_ = 0.0, b_freq_ = 0.0;
  double linear_bound_ = 1.0;
  double a1_constant_ = 0.0;
  double x_lipschitz_ = 0.0;
};

/// Bounded weight map gamma(x,z): constant(c) or clipped_linear(c) = c min(|z|,1).
class GammaWeight {
 public:
  static GammaWeight constant(double c);
  static GammaWeight clipped_linear(double c);
  static GammaWeight zero() { return constant(0.0); }

  double value(const Point& x, const Point& z) const;
  double sup_bound() const { return std::abs(c_); }
  std::string describe() const;

 private:
  bool clipped_ = false;
  double c_ = 0.0;
};

}  // namespace levyscope
