// SPDX-License-Identifier: Apache-2.0
#include "levyscope/jets.hpp"

#include <array>
#include <cmath>

#include "levyscope/errors.hpp"

namespace levyscope {

SemiJet jet_probe(const TestFunction& phi, const Point& x) {
  return {phi.gradient(x), phi.hessian(x)};
}

namespace {

// Gaussian elimination with partial pivoting on a small dense system.
template <int N>
std::array<double, N> solve_small(std::array<std::array<double, N>, N> A,
                                  std::array<double, N> b) {
  for (int col = 0; col < N; ++col) {
    int piv = col;
    for (int r = col + 1; r < N; ++r)
      if (std::abs(A[r][col]) > std::abs(A[piv][col])) piv = r;
    std::swap(A[piv], A[col]);
    std::swap(b[piv], b[col]);
    for (int r = col + 1; r < N; ++r) {
      const double f = A[r][col] / A[col][col];
      for (int c = col; c < N; ++c) A[r][c] -= f * A[col][c];
      b[r] -= f * b[col];
    }
  }
  std::array<double, N> x{};
  for (int r = N - 1; r >= 0; --r) {
    double s = b[r];
    for (int c = r + 1; c < N; ++c) s -= A[r][c] * x[c];
    x[r] = s / A[r][r];
  }
  return x;
}

}  // namespace

SemiJet jet_probe(const GridFunction& u, const Point& x) {
  const GridIndex c = u.nearest_node(x);
  const int n = u.nodes_per_axis() - 1;
  const int jreach = u.dim() == 2 ? 2 : 0;
  if (c.i < 2 || c.i > n - 2 ||
      (u.dim() == 2 && (c.j < 2 || c.j > n - 2)))
    throw std::invalid_argument("jet_probe: 2-ring stencil must fit the box");

  const double h = u.h();
  const Point xc = u.node_point(c);

  if (u.dim() == 1) {
    // fit a + b t + (c/2) t^2 by least squares over t = -2h..2h
    std::array<std::array<double, 3>, 3> M{};
    std::array<double, 3> rhs{};
    for (int di = -2; di <= 2; ++di) {
      const double t = di * h;
      const std::array<double, 3> row{1.0, t, 0.5 * t * t};
      const double v = u.at({c.i + di, 0});
      for (int a = 0; a < 3; ++a) {
        rhs[a] += row[a] * v;
        for (int b = 0; b < 3; ++b) M[a][b] += row[a] * row[b];
      }
    }
    const auto sol = solve_small<3>(M, rhs);
    SemiJet jet;
    jet.p = Point(sol[1]);
    jet.X = SymMat(sol[2]);
    (void)xc;
    return jet;
  }

  // d=2: fit a + p.t + 1/2 t.X t (6 parameters) over the 5x5 stencil
  std::array<std::array<double, 6>, 6> M{};
  std::array<double, 6> rhs{};
  for (int dj = -jreach; dj <= jreach; ++dj)
    for (int di = -2; di <= 2; ++di) {
      const double tx = di * h, ty = dj * h;
      const std::array<double, 6> row{1.0,          tx, ty, 0.5 * tx * tx,
                                      0.5 * ty * ty, tx * ty};
      const double v = u.at({c.i + di, c.j + dj});
      for (int a = 0; a < 6; ++a) {
        rhs[a] += row[a] * v;
        for (int b = 0; b < 6; ++b) M[a][b] += row[a] * row[b];
      }
    }
  const auto sol = solve_small<6>(M, rhs);
  SemiJet jet;
  jet.p = Point(sol[1], sol[2]);
  jet.X = SymMat(sol[3], sol[5], sol[4]);
  return jet;
}

}  // namespace levyscope
