// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>
#include <string>
#include <vector>

#include "levyscope/geometry.hpp"

namespace levyscope {

struct BellmanControlForm {
  double sigma = 0.0;                           // 1/2 sigma^2 tr X diffusion
  std::function<Point(Point)> drift;            // b(x)
  std::function<double(Point)> source;          // f(x)
};

/// Scalar map F(x,u,p,X,l), nonincreasing in X (semidefinite order) and in l.
/// Catalog:
///   stationary_semilinear:  gamma u + |p|^2/2 - nu tr X - l - f(x)
///   parabolic_interface:    |p|^2/2 - nu tr X - l           (spatial part)
///   bellman:                lambda u + max_a { -l - sigma_a^2/2 tr X
///                                              - b_a(x).p - f_a(x) }
class Nonlinearity {
 public:
  using EvalFn =
      std::function<double(const Point&, double, const Point&, const SymMat&,
                           double)>;

  static Nonlinearity stationary_semilinear(
      double gamma, double nu, std::function<double(Point)> source);
  static Nonlinearity parabolic_interface(double nu = 0.0);
  static Nonlinearity bellman(double lambda,
                              std::vector<BellmanControlForm> controls);
  /// Free-form map with declared constants (used for constructed
  /// counterexamples in the audits).
  static Nonlinearity custom(EvalFn fn, double gamma, double l_lipschitz,
                             double nu, std::string name,
                             bool a3_catalog = false);

  double eval(const Point& x, double u, const Point& p, const SymMat& X,
              double l) const {
    return fn_(x, u, p, X, l);
  }

  /// declared zeroth-order monotonicity constant
  double gamma() const { return gamma_; }
  /// declared Lipschitz constant in the nonlocal slot
  double l_lipschitz() const { return l_lipschitz_; }
  double nu() const { return nu_; }
  const std::string& describe() const { return name_; }
  /// true for the shipped forms whose coefficient fields are bounded
  /// Lipschitz, which is what the x-regularity catalog attestation records
  bool a3_catalog_member() const { return a3_catalog_; }

 private:
  EvalFn fn_;
  double gamma_ = 0.0;
  double l_lipschitz_ = 1.0;
  double nu_ = 0.0;
  std::string name_;
  bool a3_catalog_ = false;
};

}  // namespace levyscope
