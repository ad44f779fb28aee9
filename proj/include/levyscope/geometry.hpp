// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace levyscope {

/// Point in R^d with d in {1,2}. Components beyond dim are kept at zero so
/// arithmetic can loop over the full array unconditionally.
struct Point {
  int dim = 1;
  std::array<double, 2> c{0.0, 0.0};

  Point() = default;
  explicit Point(double x) : dim(1), c{x, 0.0} {}
  Point(double x, double y) : dim(2), c{x, y} {}

  double& operator[](int i) { return c[static_cast<size_t>(i)]; }
  double operator[](int i) const { return c[static_cast<size_t>(i)]; }

  Point operator+(const Point& o) const {
    Point r = *this;
    r.c[0] += o.c[0];
    r.c[1] += o.c[1];
    return r;
  }
  Point operator-(const Point& o) const {
    Point r = *this;
    r.c[0] -= o.c[0];
    r.c[1] -= o.c[1];
    return r;
  }
  Point operator-() const {
    Point r = *this;
    r.c[0] = -r.c[0];
    r.c[1] = -r.c[1];
    return r;
  }
  Point operator*(double s) const {
    Point r = *this;
    r.c[0] *= s;
    r.c[1] *= s;
    return r;
  }
  double dot(const Point& o) const { return c[0] * o.c[0] + c[1] * o.c[1]; }
  double norm2() const { return dot(*this); }
  double norm() const { return std::sqrt(norm2()); }

  static Point zero(int dim) {
    Point p;
    p.dim = dim;
    return p;
  }
};

inline Point operator*(double s, const Point& p) { return p * s; }

/// Symmetric d x d matrix, d in {1,2}; for d = 1 only xx is used.
struct SymMat {
  int dim = 1;
  double xx = 0.0, xy = 0.0, yy = 0.0;

  SymMat() = default;
  explicit SymMat(double a) : dim(1), xx(a) {}
  SymMat(double a, double b, double c) : dim(2), xx(a), xy(b), yy(c) {}

  static SymMat identity(int dim, double s = 1.0) {
    SymMat m;
    m.dim = dim;
    m.xx = s;
    m.yy = (dim == 2) ? s : 0.0;
    return m;
  }

  double trace() const { return dim == 1 ? xx : xx + yy; }

  /// v . (M v)
  double quad(const Point& v) const {
    if (dim == 1) return xx * v[0] * v[0];
    return xx * v[0] * v[0] + 2.0 * xy * v[0] * v[1] + yy * v[1] * v[1];
  }

  Point apply(const Point& v) const {
    if (dim == 1) return Point(xx * v[0]);
    return Point(xx * v[0] + xy * v[1], xy * v[0] + yy * v[1]);
  }

  SymMat operator+(const SymMat& o) const {
    SymMat r = *this;
    r.xx += o.xx;
    r.xy += o.xy;
    r.yy += o.yy;
    return r;
  }
  SymMat operator-(const SymMat& o) const {
    SymMat r = *this;
    r.xx -= o.xx;
    r.xy -= o.xy;
    r.yy -= o.yy;
    return r;
  }
  SymMat operator*(double s) const {
    SymMat r = *this;
    r.xx *= s;
    r.xy *= s;
    r.yy *= s;
    return r;
  }

  double min_eigenvalue() const {
    if (dim == 1) return xx;
    const double m = 0.5 * (xx + yy);
    const double d = std::sqrt(0.25 * (xx - yy) * (xx - yy) + xy * xy);
    return m - d;
  }
  double max_eigenvalue() const {
    if (dim == 1) return xx;
    const double m = 0.5 * (xx + yy);
    const double d = std::sqrt(0.25 * (xx - yy) * (xx - yy) + xy * xy);
    return m + d;
  }

  /// Semidefinite order: *this >= other up to tolerance on the smallest
  /// eigenvalue of the difference.
  bool dominates(const SymMat& o, double tol = 0.0) const {
    return (*this - o).min_eigenvalue() >= -tol;
  }
};

/// Nodes and weights of an n-point Gauss-Legendre rule on [-1,1].
struct GaussRule {
  std::vector<double> x;
  std::vector<double> w;
};

GaussRule gauss_legendre(int n);

/// Multi-index over the node lattice of a [-L,L]^d grid.
struct GridIndex {
  int i = 0;
  int j = 0;
};

}  // namespace levyscope
