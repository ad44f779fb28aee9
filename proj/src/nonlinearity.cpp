// SPDX-License-Identifier: Apache-2.0
#include "levyscope/nonlinearity.hpp"

#include <algorithm>
#include <limits>
#include <memory>
#include <sstream>

namespace levyscope {

Nonlinearity Nonlinearity::stationary_semilinear(
    double gamma, double nu, std::function<double(Point)> source) {
  if (!(gamma > 0.0))
    throw std::invalid_argument("stationary form requires gamma > 0");
  if (nu < 0.0) throw std::invalid_argument("nu must be >= 0");
  Nonlinearity F;
  F.gamma_ = gamma;
  F.l_lipschitz_ = 1.0;
  F.nu_ = nu;
  auto f = source ? std::move(source) : [](Point) { return 0.0; };
  F.fn_ = [gamma, nu, f](const Point& x, double u, const Point& p,
                         const SymMat& X, double l) {
    return gamma * u + 0.5 * p.norm2() - nu * X.trace() - l - f(x);
  };
  std::ostringstream os;
  os << "stationary_semilinear(gamma=" << gamma << ", nu=" << nu << ")";
  F.name_ = os.str();
  F.a3_catalog_ = true;
  return F;
}

Nonlinearity Nonlinearity::parabolic_interface(double nu) {
  Nonlinearity F;
  F.gamma_ = 0.0;
  F.l_lipschitz_ = 1.0;
  F.nu_ = nu;
  F.fn_ = [nu](const Point&, double, const Point& p, const SymMat& X,
               double l) { return 0.5 * p.norm2() - nu * X.trace() - l; };
  F.name_ = "parabolic_interface";
  F.a3_catalog_ = true;
  return F;
}

Nonlinearity Nonlinearity::bellman(double lambda,
                                   std::vector<BellmanControlForm> controls) {
  if (!(lambda > 0.0)) throw std::invalid_argument("bellman: lambda > 0");
  if (controls.empty())
    throw std::invalid_argument("bellman: control list must be nonempty");
  Nonlinearity F;
  F.gamma_ = lambda;
  F.l_lipschitz_ = 1.0;
  F.nu_ = 0.0;
  auto ctl = std::make_shared<std::vector<BellmanControlForm>>(
      std::move(controls));
  F.fn_ = [lambda, ctl](const Point& x, double u, const Point& p,
                        const SymMat& X, double l) {
    double best = -std::numeric_limits<double>::infinity();
    for (const BellmanControlForm& c : *ctl) {
      const Point b = c.drift ? c.drift(x) : Point::zero(x.dim);
      const double f = c.source ? c.source(x) : 0.0;
      best = std::max(best,
                      -l - 0.5 * c.sigma * c.sigma * X.trace() - b.dot(p) - f);
    }
    return lambda * u + best;
  };
  std::ostringstream os;
  os << "bellman(lambda=" << lambda << ", controls=" << ctl->size() << ")";
  F.name_ = os.str();
  F.a3_catalog_ = true;
  return F;
}

Nonlinearity Nonlinearity::custom(EvalFn fn, double gamma, double l_lipschitz,
                                  double nu, std::string name,
                                  bool a3_catalog) {
  Nonlinearity F;
  F.fn_ = std::move(fn);
  F.gamma_ = gamma;
  F.l_lipschitz_ = l_lipschitz;
  F.nu_ = nu;
  F.name_ = std::move(name);
  F.a3_catalog_ = a3_catalog;
  return F;
}

}  // namespace levyscope
