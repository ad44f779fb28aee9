// SPDX-License-Identifier: Apache-2.0
#include "levyscope/geometry.hpp"

#include <cmath>
#include <numbers>

namespace levyscope {

GaussRule gauss_legendre(int n) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: n >= 1 required");
  GaussRule rule;
  rule.x.resize(static_cast<size_t>(n));
  rule.w.resize(static_cast<size_t>(n));
  const int m = (n + 1) / 2;
  for (int i = 0; i < m; ++i) {
    // Newton iteration from the Chebyshev-angle initial guess
    double x = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) /
                        (static_cast<double>(n) + 0.5));
    double pp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = 0.0;
      for (int j = 0; j < n; ++j) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j + 1.0) * x * p1 - static_cast<double>(j) * p2) /
             (static_cast<double>(j) + 1.0);
      }
      pp = static_cast<double>(n) * (x * p0 - p1) / (x * x - 1.0);
      const double dx = p0 / pp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    const double w = 2.0 / ((1.0 - x * x) * pp * pp);
    rule.x[static_cast<size_t>(i)] = -x;
    rule.w[static_cast<size_t>(i)] = w;
    rule.x[static_cast<size_t>(n - 1 - i)] = x;
    rule.w[static_cast<size_t>(n - 1 - i)] = w;
  }
  return rule;
}

}  // namespace levyscope
