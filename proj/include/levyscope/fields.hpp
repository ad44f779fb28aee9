// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>
#include <string>
#include <vector>

#include "levyscope/geometry.hpp"

namespace levyscope {

enum class ProbeForm {
  Constant,
  Affine,
  Cosine,
  Gaussian,
  Bump,
  QuadraticClamped,
  Plateau,
};

/// Smooth closed-form probe with exact value, gradient and Hessian
/// everywhere. All forms except Affine are bounded on R^d.
class TestFunction {
 public:
  TestFunction() = default;  // constant zero

  static TestFunction constant(int dim, double c);
  static TestFunction affine(const Point& slope, double c);
  /// amplitude * cos(k . x)
  static TestFunction cosine(const Point& k, double amplitude = 1.0);
  /// amplitude * exp(-|x-center|^2 / (2 width^2))
  static TestFunction gaussian(const Point& center, double width,
                               double amplitude = 1.0);
  /// amplitude * exp(1 - 1/(1 - |x-center|^2/radius^2)) inside, 0 outside
  static TestFunction bump(const Point& center, double radius,
                           double amplitude = 1.0);
  /// vertex_value + (curvature/2) * S(|x-center|^2): exactly the quadratic
  /// while |x-center|^2 <= cap/|curvature|, then a C^2 radial saturation so
  /// that sup |phi - vertex_value| = cap.
  static TestFunction quadratic_clamped(const Point& center, double curvature,
                                        double cap, double vertex_value = 0.0);
  /// 0 on |x| <= 1/beta, strictly above `level` on |x| >= 2/beta, C^2,
  /// with gradient/Hessian/nonlocal terms vanishing as beta -> 0.
  static TestFunction plateau(int dim, double level, double beta);

  double value(const Point& x) const;
  Point gradient(const Point& x) const;
  SymMat hessian(const Point& x) const;

  int dim() const { return dim_; }
  ProbeForm form() const { return form_; }
  /// Bound on |phi| over R^d (infinity for the affine form).
  double sup_norm() const { return sup_; }
  double gradient_sup_norm() const { return gsup_; }
  double hessian_sup_norm() const { return hsup_; }

  /// phi + a (same derivatives everywhere).
  TestFunction shifted(double a) const;

  /// Far-field structure of the form, used to integrate measure tails
  /// analytically instead of sampling them:
  ///  - Localized: phi settles to `value`, |phi - value| <= far_deviation(r)
  ///    outside radius r;
  ///  - Oscillatory: phi oscillates around `value` with wavenumber
  ///    `wavenumber` and amplitude far_deviation(r);
  ///  - None: no usable structure (affine form).
  enum class FarKind { Localized, Oscillatory, None };
  struct FarBehavior {
    FarKind kind = FarKind::None;
    double value = 0.0;
    double wavenumber = 0.0;
  };
  FarBehavior far_behavior() const;
  double far_deviation(double r) const;

  std::string describe() const;

 private:
  void compute_bounds();

  ProbeForm form_ = ProbeForm::Constant;
  int dim_ = 1;
  Point vec_;                    // k / center / slope
  double s1_ = 0.0, s2_ = 0.0, s3_ = 0.0;
  double shift_ = 0.0;
  double sup_ = 0.0, gsup_ = 0.0, hsup_ = 0.0;
};

enum class Extension { ConstantClamp, Periodic };

/// Function sampled on the uniform node grid of [-L,L]^d, extended to all of
/// R^d by the declared extension rule; queries interpolate multilinearly
/// (nonnegative weights).
class GridFunction {
 public:
  GridFunction(int dim, double box, double h, Extension ext,
               double sup_bound);

  static GridFunction sample(const TestFunction& f, double box, double h,
                             Extension ext);
  static GridFunction sample(const std::function<double(Point)>& f, int dim,
                             double box, double h, Extension ext);

  int dim() const { return dim_; }
  double box() const { return box_; }
  double h() const { return h_; }
  Extension extension() const { return ext_; }
  double sup_bound() const { return sup_bound_; }

  int nodes_per_axis() const { return n_ + 1; }
  size_t node_count() const { return values_.size(); }

  Point node_point(const GridIndex& idx) const;
  double& at(const GridIndex& idx) { return values_[flat(idx)]; }
  double at(const GridIndex& idx) const { return values_[flat(idx)]; }
  const std::vector<double>& values() const { return values_; }
  std::vector<double>& values() { return values_; }

  bool inside_box(const Point& x, double margin = 0.0) const;

  /// Nearest grid node to x (x must be inside the box).
  GridIndex nearest_node(const Point& x) const;

  /// Multilinear interpolation with the extension rule outside the box.
  double value(const Point& x) const;

  double max_value() const;
  double min_value() const;
  double max_abs() const;
  /// max over nodes and axes of |one-sided difference| / h.
  double max_slope() const;

  /// Re-declares the sup envelope from the current node values.
  void refresh_sup_bound();

  template <typename Fn>
  void for_each_node(Fn&& fn) const {
    GridIndex idx;
    if (dim_ == 1) {
      for (idx.i = 0; idx.i <= n_; ++idx.i) fn(idx, node_point(idx));
      return;
    }
    for (idx.j = 0; idx.j <= n_; ++idx.j)
      for (idx.i = 0; idx.i <= n_; ++idx.i) fn(idx, node_point(idx));
  }

 private:
  size_t flat(const GridIndex& idx) const {
    return static_cast<size_t>(idx.i) +
           static_cast<size_t>(n_ + 1) * static_cast<size_t>(idx.j);
  }

  int dim_ = 1;
  double box_ = 1.0;
  double h_ = 0.1;
  Extension ext_ = Extension::ConstantClamp;
  double sup_bound_ = 0.0;
  int n_ = 0;  // intervals per axis
  std::vector<double> values_;
};

/// Non-owning view of either a smooth probe or a grid function, for nonlocal
/// evaluations that only need point values and a sup bound.
class FieldView {
 public:
  FieldView(const TestFunction& f) : tf_(&f) {}  // NOLINT(runtime/explicit)
  FieldView(const GridFunction& g) : gf_(&g) {}  // NOLINT(runtime/explicit)

  double value(const Point& x) const {
    return tf_ ? tf_->value(x) : gf_->value(x);
  }
  double sup_bound() const {
    return tf_ ? tf_->sup_norm() : gf_->sup_bound();
  }
  bool is_grid() const { return gf_ != nullptr; }
  const GridFunction* grid() const { return gf_; }
  const TestFunction* probe() const { return tf_; }

 private:
  const TestFunction* tf_ = nullptr;
  const GridFunction* gf_ = nullptr;
};

}  // namespace levyscope
