// SPDX-License-Identifier: Apache-2.0
#include "levyscope/fields.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "levyscope/errors.hpp"

namespace levyscope {

namespace {

// Quintic taper: S(t) = t on [0,t0], saturates C^2-smoothly on [t0,t1] at the
// plateau t0 + (t1-t0)/2, constant beyond. S' runs 1 -> 0 via smootherstep.
struct Saturation {
  double t0, t1;

  double plateau() const { return t0 + 0.5 * (t1 - t0); }

  double eval(double t) const {
    if (t <= t0) return t;
    if (t >= t1) return plateau();
    const double xi = (t - t0) / (t1 - t0);
    const double xi2 = xi * xi;
    // integral of 1 - (6 xi^5 - 15 xi^4 + 10 xi^3)
    const double prim = xi - xi2 * xi2 * (xi2 - 3.0 * xi + 2.5);
    return t0 + (t1 - t0) * prim;
  }
  double d1(double t) const {
    if (t <= t0) return 1.0;
    if (t >= t1) return 0.0;
    const double xi = (t - t0) / (t1 - t0);
    return 1.0 - xi * xi * xi * (10.0 + xi * (6.0 * xi - 15.0));
  }
  double d2(double t) const {
    if (t <= t0 || t >= t1) return 0.0;
    const double xi = (t - t0) / (t1 - t0);
    return -30.0 * xi * xi * (xi - 1.0) * (xi - 1.0) / (t1 - t0);
  }
};

// smootherstep clamped to [0,1]
double sstep(double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  return x * x * x * (10.0 + x * (6.0 * x - 15.0));
}
double sstep_d1(double x) {
  if (x <= 0.0 || x >= 1.0) return 0.0;
  const double y = x * (x - 1.0);
  return 30.0 * y * y;
}
double sstep_d2(double x) {
  if (x <= 0.0 || x >= 1.0) return 0.0;
  return 60.0 * x * (x - 1.0) * (2.0 * x - 1.0);
}

SymMat outer_product(const Point& v, int dim) {
  if (dim == 1) return SymMat(v[0] * v[0]);
  return SymMat(v[0] * v[0], v[0] * v[1], v[1] * v[1]);
}

}  // namespace

TestFunction TestFunction::constant(int dim, double c) {
  TestFunction f;
  f.form_ = ProbeForm::Constant;
  f.dim_ = dim;
  f.s1_ = c;
  f.compute_bounds();
  return f;
}

TestFunction TestFunction::affine(const Point& slope, double c) {
  TestFunction f;
  f.form_ = ProbeForm::Affine;
  f.dim_ = slope.dim;
  f.vec_ = slope;
  f.s1_ = c;
  f.compute_bounds();
  return f;
}

TestFunction TestFunction::cosine(const Point& k, double amplitude) {
  TestFunction f;
  f.form_ = ProbeForm::Cosine;
  f.dim_ = k.dim;
  f.vec_ = k;
  f.s1_ = amplitude;
  f.compute_bounds();
  return f;
}

TestFunction TestFunction::gaussian(const Point& center, double width,
                                    double amplitude) {
  if (!(width > 0.0)) throw std::invalid_argument("gaussian: width > 0");
  TestFunction f;
  f.form_ = ProbeForm::Gaussian;
  f.dim_ = center.dim;
  f.vec_ = center;
  f.s1_ = width;
  f.s2_ = amplitude;
  f.compute_bounds();
  return f;
}

TestFunction TestFunction::bump(const Point& center, double radius,
                                double amplitude) {
  if (!(radius > 0.0)) throw std::invalid_argument("bump: radius > 0");
  TestFunction f;
  f.form_ = ProbeForm::Bump;
  f.dim_ = center.dim;
  f.vec_ = center;
  f.s1_ = radius;
  f.s2_ = amplitude;
  f.compute_bounds();
  return f;
}

TestFunction TestFunction::quadratic_clamped(const Point& center,
                                             double curvature, double cap,
                                             double vertex_value) {
  if (!(cap > 0.0)) throw std::invalid_argument("quadratic_clamped: cap > 0");
  TestFunction f;
  f.form_ = ProbeForm::QuadraticClamped;
  f.dim_ = center.dim;
  f.vec_ = center;
  f.s1_ = curvature;
  f.s2_ = cap;
  f.s3_ = vertex_value;
  f.compute_bounds();
  return f;
}

TestFunction TestFunction::plateau(int dim, double level, double beta) {
  if (!(level > 0.0 && beta > 0.0))
    throw std::invalid_argument("plateau: level > 0 and beta > 0 required");
  TestFunction f;
  f.form_ = ProbeForm::Plateau;
  f.dim_ = dim;
  f.s1_ = level;
  f.s2_ = beta;
  f.compute_bounds();
  return f;
}

double TestFunction::value(const Point& x) const {
  switch (form_) {
    case ProbeForm::Constant:
      return s1_ + shift_;
    case ProbeForm::Affine:
      return vec_.dot(x) + s1_ + shift_;
    case ProbeForm::Cosine:
      return s1_ * std::cos(vec_.dot(x)) + shift_;
    case ProbeForm::Gaussian: {
      const double rho = (x - vec_).norm2();
      return s2_ * std::exp(-rho / (2.0 * s1_ * s1_)) + shift_;
    }
    case ProbeForm::Bump: {
      const double rho = (x - vec_).norm2() / (s1_ * s1_);
      if (rho >= 1.0 - 1e-14) return shift_;
      return s2_ * std::exp(1.0 - 1.0 / (1.0 - rho)) + shift_;
    }
    case ProbeForm::QuadraticClamped: {
      const double kappa = s1_;
      if (kappa == 0.0) return s3_ + shift_;
      const Saturation sat{s2_ / std::abs(kappa), 3.0 * s2_ / std::abs(kappa)};
      return s3_ + 0.5 * kappa * sat.eval((x - vec_).norm2()) + shift_;
    }
    case ProbeForm::Plateau: {
      const double xi = (s2_ * s2_ * x.norm2() - 1.0) / 3.0;
      return 1.01 * s1_ * sstep(xi) + shift_;
    }
  }
  return 0.0;
}

Point TestFunction::gradient(const Point& x) const {
  switch (form_) {
    case ProbeForm::Constant:
      return Point::zero(dim_);
    case ProbeForm::Affine:
      return vec_;
    case ProbeForm::Cosine:
      return vec_ * (-s1_ * std::sin(vec_.dot(x)));
    case ProbeForm::Gaussian: {
      const Point d = x - vec_;
      const double w2 = s1_ * s1_;
      return d * (-s2_ * std::exp(-d.norm2() / (2.0 * w2)) / w2);
    }
    case ProbeForm::Bump: {
      const Point d = x - vec_;
      const double rho = d.norm2() / (s1_ * s1_);
      if (rho >= 1.0 - 1e-14) return Point::zero(dim_);
      const double s = std::exp(1.0 - 1.0 / (1.0 - rho));
      const double sp = -s / ((1.0 - rho) * (1.0 - rho));
      return d * (s2_ * sp * 2.0 / (s1_ * s1_));
    }
    case ProbeForm::QuadraticClamped: {
      const double kappa = s1_;
      if (kappa == 0.0) return Point::zero(dim_);
      const Saturation sat{s2_ / std::abs(kappa), 3.0 * s2_ / std::abs(kappa)};
      const Point d = x - vec_;
      return d * (kappa * sat.d1(d.norm2()));
    }
    case ProbeForm::Plateau: {
      const double b2 = s2_ * s2_;
      const double xi = (b2 * x.norm2() - 1.0) / 3.0;
      return x * (1.01 * s1_ * sstep_d1(xi) * 2.0 * b2 / 3.0);
    }
  }
  return Point::zero(dim_);
}

SymMat TestFunction::hessian(const Point& x) const {
  switch (form_) {
    case ProbeForm::Constant:
    case ProbeForm::Affine:
      return SymMat::identity(dim_, 0.0);
    case ProbeForm::Cosine: {
      const double c = -s1_ * std::cos(vec_.dot(x));
      return outer_product(vec_, dim_) * c;
    }
    case ProbeForm::Gaussian: {
      const Point d = x - vec_;
      const double w2 = s1_ * s1_;
      const double e = s2_ * std::exp(-d.norm2() / (2.0 * w2));
      return outer_product(d, dim_) * (e / (w2 * w2)) -
             SymMat::identity(dim_, e / w2);
    }
    case ProbeForm::Bump: {
      const Point d = x - vec_;
      const double R2 = s1_ * s1_;
      const double rho = d.norm2() / R2;
      if (rho >= 1.0 - 1e-14) return SymMat::identity(dim_, 0.0);
      const double s = std::exp(1.0 - 1.0 / (1.0 - rho));
      const double om = 1.0 - rho;
      const double sp = -s / (om * om);
      const double spp = s / (om * om * om * om) - 2.0 * s / (om * om * om);
      return outer_product(d, dim_) * (s2_ * spp * 4.0 / (R2 * R2)) +
             SymMat::identity(dim_, s2_ * sp * 2.0 / R2);
    }
    case ProbeForm::QuadraticClamped: {
      const double kappa = s1_;
      if (kappa == 0.0) return SymMat::identity(dim_, 0.0);
      const Saturation sat{s2_ / std::abs(kappa), 3.0 * s2_ / std::abs(kappa)};
      const Point d = x - vec_;
      const double t = d.norm2();
      return SymMat::identity(dim_, kappa * sat.d1(t)) +
             outer_product(d, dim_) * (2.0 * kappa * sat.d2(t));
    }
    case ProbeForm::Plateau: {
      const double b2 = s2_ * s2_;
      const double xi = (b2 * x.norm2() - 1.0) / 3.0;
      const double c1 = 1.01 * s1_ * 2.0 * b2 / 3.0;
      return SymMat::identity(dim_, c1 * sstep_d1(xi)) +
             outer_product(x, dim_) * (c1 * sstep_d2(xi) * 2.0 * b2 / 3.0);
    }
  }
  return SymMat::identity(dim_, 0.0);
}

void TestFunction::compute_bounds() {
  const double inf = std::numeric_limits<double>::infinity();
  switch (form_) {
    case ProbeForm::Constant:
      sup_ = std::abs(s1_);
      gsup_ = hsup_ = 0.0;
      return;
    case ProbeForm::Affine:
      sup_ = vec_.norm() > 0.0 ? inf : std::abs(s1_);
      gsup_ = vec_.norm();
      hsup_ = 0.0;
      return;
    case ProbeForm::Cosine:
      sup_ = std::abs(s1_);
      gsup_ = std::abs(s1_) * vec_.norm();
      hsup_ = std::abs(s1_) * vec_.norm2();
      return;
    case ProbeForm::Gaussian:
      sup_ = std::abs(s2_);
      gsup_ = std::abs(s2_) / s1_ * std::exp(-0.5);
      hsup_ = std::abs(s2_) / (s1_ * s1_);
      return;
    default:
      break;
  }
  // radial forms: sample the radial profile for safe bounds
  sup_ = 0.0;
  gsup_ = 0.0;
  hsup_ = 0.0;
  double rmax;
  Point center = Point::zero(dim_);
  if (form_ == ProbeForm::Bump) {
    rmax = s1_;
    center = vec_;
  } else if (form_ == ProbeForm::QuadraticClamped) {
    rmax = s1_ == 0.0 ? 1.0 : std::sqrt(3.0 * s2_ / std::abs(s1_));
    center = vec_;
  } else {  // Plateau
    rmax = 2.0 / s2_;
  }
  const int samples = 4096;
  for (int i = 0; i <= samples; ++i) {
    const double r = rmax * static_cast<double>(i) / samples;
    Point x = center;
    x[0] += r;
    sup_ = std::max(sup_, std::abs(value(x) - shift_));
    gsup_ = std::max(gsup_, gradient(x).norm());
    const SymMat H = hessian(x);
    hsup_ = std::max(hsup_, std::max(std::abs(H.min_eigenvalue()),
                                     std::abs(H.max_eigenvalue())));
  }
  // margin for the sampling
  gsup_ *= 1.05;
  hsup_ *= 1.05;
}

TestFunction::FarBehavior TestFunction::far_behavior() const {
  FarBehavior fb;
  switch (form_) {
    case ProbeForm::Constant:
      fb.kind = FarKind::Localized;
      fb.value = s1_ + shift_;
      return fb;
    case ProbeForm::Affine:
      if (vec_.norm() == 0.0) {
        fb.kind = FarKind::Localized;
        fb.value = s1_ + shift_;
      }
      return fb;
    case ProbeForm::Cosine:
      if (vec_.norm() == 0.0) {  // degenerate constant
        fb.kind = FarKind::Localized;
        fb.value = s1_ + shift_;
        return fb;
      }
      fb.kind = FarKind::Oscillatory;
      fb.value = shift_;
      fb.wavenumber = vec_.norm();
      return fb;
    case ProbeForm::Gaussian:
    case ProbeForm::Bump:
      fb.kind = FarKind::Localized;
      fb.value = shift_;
      return fb;
    case ProbeForm::QuadraticClamped: {
      fb.kind = FarKind::Localized;
      const double kappa = s1_;
      const double plateau =
          kappa == 0.0 ? 0.0 : kappa / std::abs(kappa) * s2_;  // +-cap
      fb.value = s3_ + plateau + shift_;
      return fb;
    }
    case ProbeForm::Plateau:
      fb.kind = FarKind::Localized;
      fb.value = 1.01 * s1_ + shift_;
      return fb;
  }
  return fb;
}

double TestFunction::far_deviation(double r) const {
  switch (form_) {
    case ProbeForm::Constant:
      return 0.0;
    case ProbeForm::Affine:
      return vec_.norm() == 0.0 ? 0.0
                                : std::numeric_limits<double>::infinity();
    case ProbeForm::Cosine:
      return std::abs(s1_);
    case ProbeForm::Gaussian: {
      const double d = std::max(0.0, r - vec_.norm());
      return std::abs(s2_) * std::exp(-d * d / (2.0 * s1_ * s1_));
    }
    case ProbeForm::Bump:
      return r >= vec_.norm() + s1_ ? 0.0 : std::abs(s2_);
    case ProbeForm::QuadraticClamped: {
      if (s1_ == 0.0) return 0.0;
      const double active = vec_.norm() + std::sqrt(3.0 * s2_ / std::abs(s1_));
      return r >= active ? 0.0 : 2.0 * s2_;
    }
    case ProbeForm::Plateau:
      return r >= 2.0 / s2_ ? 0.0 : 1.01 * s1_;
  }
  return 0.0;
}

TestFunction TestFunction::shifted(double a) const {
  TestFunction f = *this;
  f.shift_ += a;
  if (std::isfinite(f.sup_)) f.sup_ = f.sup_ + std::abs(f.shift_ - shift_);
  return f;
}

std::string TestFunction::describe() const {
  std::ostringstream os;
  switch (form_) {
    case ProbeForm::Constant:
      os << "constant(" << s1_ + shift_ << ")";
      return os.str();
    case ProbeForm::Affine:
      os << "affine(p=" << vec_[0];
      if (dim_ == 2) os << "," << vec_[1];
      os << ", c=" << s1_ + shift_ << ")";
      return os.str();
    case ProbeForm::Cosine:
      os << "cosine(k=" << vec_[0];
      if (dim_ == 2) os << "," << vec_[1];
      os << ", amp=" << s1_ << ")";
      break;
    case ProbeForm::Gaussian:
      os << "gaussian(center=" << vec_[0];
      if (dim_ == 2) os << "," << vec_[1];
      os << ", width=" << s1_ << ", amp=" << s2_ << ")";
      break;
    case ProbeForm::Bump:
      os << "bump(center=" << vec_[0];
      if (dim_ == 2) os << "," << vec_[1];
      os << ", radius=" << s1_ << ", amp=" << s2_ << ")";
      break;
    case ProbeForm::QuadraticClamped:
      os << "quadratic_clamped(center=" << vec_[0];
      if (dim_ == 2) os << "," << vec_[1];
      os << ", curvature=" << s1_ << ", cap=" << s2_ << ", vertex=" << s3_
         << ")";
      break;
    case ProbeForm::Plateau:
      os << "plateau(level=" << s1_ << ", beta=" << s2_ << ")";
      break;
  }
  if (shift_ != 0.0) os << "+" << shift_;
  return os.str();
}

// ---------------------------------------------------------------------------

GridFunction::GridFunction(int dim, double box, double h, Extension ext,
                           double sup_bound)
    : dim_(dim), box_(box), h_(h), ext_(ext), sup_bound_(sup_bound) {
  if (dim != 1 && dim != 2)
    throw std::invalid_argument("grid dimension must be 1 or 2");
  if (!(box > 0.0 && h > 0.0))
    throw std::invalid_argument("grid box and mesh must be positive");
  const double ratio = 2.0 * box / h;
  n_ = static_cast<int>(std::lround(ratio));
  if (n_ < 2 || std::abs(ratio - static_cast<double>(n_)) > 1e-9)
    throw std::invalid_argument("mesh h must divide the box [-L,L]");
  values_.assign(dim == 1 ? static_cast<size_t>(n_ + 1)
                          : static_cast<size_t>(n_ + 1) *
                                static_cast<size_t>(n_ + 1),
                 0.0);
}

GridFunction GridFunction::sample(const TestFunction& f, double box, double h,
                                  Extension ext) {
  GridFunction g(f.dim(), box, h, ext, 0.0);
  g.for_each_node(
      [&g, &f](const GridIndex& idx, const Point& x) { g.at(idx) = f.value(x); });
  g.refresh_sup_bound();
  return g;
}

GridFunction GridFunction::sample(const std::function<double(Point)>& f,
                                  int dim, double box, double h,
                                  Extension ext) {
  GridFunction g(dim, box, h, ext, 0.0);
  g.for_each_node(
      [&g, &f](const GridIndex& idx, const Point& x) { g.at(idx) = f(x); });
  g.refresh_sup_bound();
  return g;
}

Point GridFunction::node_point(const GridIndex& idx) const {
  Point p = Point::zero(dim_);
  p[0] = -box_ + h_ * idx.i;
  if (dim_ == 2) p[1] = -box_ + h_ * idx.j;
  return p;
}

bool GridFunction::inside_box(const Point& x, double margin) const {
  for (int a = 0; a < dim_; ++a)
    if (std::abs(x[a]) > box_ - margin + 1e-12) return false;
  return true;
}

GridIndex GridFunction::nearest_node(const Point& x) const {
  GridIndex idx;
  idx.i = std::clamp(static_cast<int>(std::lround((x[0] + box_) / h_)), 0, n_);
  if (dim_ == 2)
    idx.j =
        std::clamp(static_cast<int>(std::lround((x[1] + box_) / h_)), 0, n_);
  return idx;
}

namespace {
// axis coordinate -> (left index, fraction) under the extension rule
struct AxisPos {
  int i0;
  double frac;
};
AxisPos axis_position(double coord, double box, double h, int n,
                      Extension ext) {
  double t = (coord + box) / h;
  if (ext == Extension::Periodic) {
    t = std::fmod(t, static_cast<double>(n));
    if (t < 0.0) t += static_cast<double>(n);
  } else {
    t = std::clamp(t, 0.0, static_cast<double>(n));
  }
  int i0 = static_cast<int>(t);
  if (i0 >= n) i0 = n - 1;
  const double frac = std::clamp(t - static_cast<double>(i0), 0.0, 1.0);
  return {i0, frac};
}
}  // namespace

double GridFunction::value(const Point& x) const {
  const AxisPos ax = axis_position(x[0], box_, h_, n_, ext_);
  if (dim_ == 1) {
    const double v0 = values_[static_cast<size_t>(ax.i0)];
    const double v1 = values_[static_cast<size_t>(ax.i0 + 1)];
    return (1.0 - ax.frac) * v0 + ax.frac * v1;
  }
  const AxisPos ay = axis_position(x[1], box_, h_, n_, ext_);
  const auto v = [&](int i, int j) {
    return values_[static_cast<size_t>(i) +
                   static_cast<size_t>(n_ + 1) * static_cast<size_t>(j)];
  };
  const double fx = ax.frac, fy = ay.frac;
  return (1.0 - fx) * (1.0 - fy) * v(ax.i0, ay.i0) +
         fx * (1.0 - fy) * v(ax.i0 + 1, ay.i0) +
         (1.0 - fx) * fy * v(ax.i0, ay.i0 + 1) +
         fx * fy * v(ax.i0 + 1, ay.i0 + 1);
}

double GridFunction::max_value() const {
  return *std::max_element(values_.begin(), values_.end());
}
double GridFunction::min_value() const {
  return *std::min_element(values_.begin(), values_.end());
}
double GridFunction::max_abs() const {
  return std::max(std::abs(max_value()), std::abs(min_value()));
}

double GridFunction::max_slope() const {
  double s = 0.0;
  const auto v = [&](int i, int j) {
    return values_[static_cast<size_t>(i) +
                   static_cast<size_t>(n_ + 1) * static_cast<size_t>(j)];
  };
  const int jmax = dim_ == 2 ? n_ : 0;
  for (int j = 0; j <= jmax; ++j)
    for (int i = 0; i < n_; ++i)
      s = std::max(s, std::abs(v(i + 1, j) - v(i, j)) / h_);
  if (dim_ == 2)
    for (int j = 0; j < n_; ++j)
      for (int i = 0; i <= n_; ++i)
        s = std::max(s, std::abs(v(i, j + 1) - v(i, j)) / h_);
  return s;
}

void GridFunction::refresh_sup_bound() { sup_bound_ = max_abs(); }

}  // namespace levyscope
