// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "levyscope/convolution.hpp"
#include "levyscope/errors.hpp"
#include "levyscope/jets.hpp"
#include "levyscope/relaxed.hpp"

using namespace levyscope;

namespace {

GridFunction random_bounded(uint64_t seed, double amp, double box, double h) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(-amp, amp);
  GridFunction g(1, box, h, Extension::ConstantClamp, amp);
  for (double& v : g.values()) v = unif(rng);
  return g;
}

}  // namespace

TEST_CASE("slope-shifted envelope of the zero function") {
  const GridFunction U = GridFunction::sample(TestFunction::constant(1, 0.0),
                                              2.0, 0.05,
                                              Extension::ConstantClamp);
  const ConvolutionResult R = sup_convolution(U, Point(2.0), 0.1);
  // maximizer of -r w - w^2/(2 alpha) is w = -alpha r, value alpha r^2 / 2
  U.for_each_node([&](const GridIndex& idx, const Point& x) {
    if (std::abs(x[0]) > 1.0) return;  // keep the search ball interior
    CHECK(R.values.at(idx) == doctest::Approx(0.2).epsilon(1e-12));
    const size_t flat = static_cast<size_t>(idx.i);
    CHECK(R.argmax_offset[flat][0] == doctest::Approx(-0.2).epsilon(1e-12));
  });
}

TEST_CASE("constant functions are fixed points at zero slope") {
  const GridFunction U = GridFunction::sample(TestFunction::constant(1, 1.7),
                                              2.0, 0.1,
                                              Extension::ConstantClamp);
  const ConvolutionResult R = sup_convolution(U, Point::zero(1), 0.2);
  U.for_each_node([&](const GridIndex& idx, const Point&) {
    CHECK(R.values.at(idx) == 1.7);
  });
  const ConvolutionResult I = inf_convolution(U, Point::zero(1), 0.2);
  U.for_each_node([&](const GridIndex& idx, const Point&) {
    CHECK(I.values.at(idx) == 1.7);
  });
}

TEST_CASE("domination and duality are node-exact") {
  const GridFunction U = random_bounded(7, 1.0, 2.0, 0.1);
  const Point r(0.4);
  const ConvolutionResult R = sup_convolution(U, r, 0.15);
  const ConvolutionResult I = inf_convolution(U, r, 0.15);
  GridFunction negU = U;
  for (double& v : negU.values()) v = -v;
  const ConvolutionResult D = sup_convolution(negU, Point(-r[0]), 0.15);
  U.for_each_node([&](const GridIndex& idx, const Point&) {
    CHECK(R.values.at(idx) >= U.at(idx));
    CHECK(I.values.at(idx) <= U.at(idx));
    CHECK(I.values.at(idx) + D.values.at(idx) == 0.0);
  });
}

TEST_CASE("envelope grows with the penalty parameter") {
  const GridFunction U = random_bounded(11, 0.8, 2.0, 0.1);
  const ConvolutionResult R1 = sup_convolution(U, Point(0.5), 0.05);
  const ConvolutionResult R2 = sup_convolution(U, Point(0.5), 0.2);
  U.for_each_node([&](const GridIndex& idx, const Point&) {
    CHECK(R1.values.at(idx) <= R2.values.at(idx) + 1e-14);
  });
}

TEST_CASE("grid too coarse for the unit search ball") {
  const GridFunction U = GridFunction::sample(TestFunction::constant(1, 0.0),
                                              2.0, 0.5,
                                              Extension::ConstantClamp);
  CHECK_THROWS_AS(sup_convolution(U, Point::zero(1), 0.1),
                  GridTooCoarseError);
}

TEST_CASE("smooth recovery as the parameter vanishes") {
  const TestFunction g = TestFunction::gaussian(Point(0.0), 1.0);
  const GridFunction U =
      GridFunction::sample(g, 3.0, 0.025, Extension::ConstantClamp);
  double prev = 1e9;
  for (double alpha : {0.4, 0.2, 0.1}) {
    const ConvolutionResult R = sup_convolution(U, Point::zero(1), alpha);
    double dist = 0.0;
    U.for_each_node([&](const GridIndex& idx, const Point& x) {
      if (std::abs(x[0]) > 1.0) return;
      dist = std::max(dist, std::abs(R.values.at(idx) - U.at(idx)));
    });
    CHECK(dist < prev);
    // linear rate: |R - U| ~ alpha sup|grad U|^2 / 2 at these scales
    const double predicted = alpha * std::exp(-1.0) / 2.0;
    CHECK(dist == doctest::Approx(predicted).epsilon(0.5));
    prev = dist;
  }
}

TEST_CASE("semiconvexity floor holds for kinks, convex and smooth data") {
  const double alpha = 0.2, h = 0.05;
  {
    const GridFunction U = GridFunction::sample(
        [](Point p) { return -std::abs(p[0]); }, 1, 2.0, h,
        Extension::ConstantClamp);
    const SemiconvexityReport rep =
        check_semiconvexity(sup_convolution(U, Point::zero(1), alpha));
    CHECK(rep.pass);
    CHECK(rep.min_second_difference >= rep.floor - rep.tol);
  }
  {
    // convex sample stays convex
    const GridFunction U = GridFunction::sample(
        [](Point p) { return 0.5 * p[0] * p[0]; }, 1, 2.0, h,
        Extension::ConstantClamp);
    const SemiconvexityReport rep =
        check_semiconvexity(sup_convolution(U, Point::zero(1), alpha));
    CHECK(rep.min_second_difference >= -rep.tol);
  }
  {
    // smooth data with small Hessian: the effective floor is -||D^2 U||
    const TestFunction g = TestFunction::gaussian(Point(0.0), 1.5, 0.5);
    const GridFunction U =
        GridFunction::sample(g, 2.0, h, Extension::ConstantClamp);
    const SemiconvexityReport rep =
        check_semiconvexity(sup_convolution(U, Point::zero(1), alpha));
    CHECK(rep.min_second_difference >= -g.hessian_sup_norm() - rep.tol);
  }
}

TEST_CASE("2d envelope keeps the floor along diagonals") {
  const GridFunction U = GridFunction::sample(
      [](Point p) { return -std::abs(p[0] + p[1]) * 0.4; }, 2, 1.0, 0.125,
      Extension::ConstantClamp);
  const ConvolutionResult R = sup_convolution(U, Point(0.1, -0.2), 0.25);
  const SemiconvexityReport rep = check_semiconvexity(R);
  CHECK(rep.pass);
}

TEST_CASE("recorded maximizers satisfy the slope relation") {
  // piecewise-quadratic data with closed-form jets
  const double A = 1.0;
  const TestFunction q = TestFunction::quadratic_clamped(Point(0.0), -A, 1.0);
  const GridFunction U =
      GridFunction::sample(q, 2.0, 0.05, Extension::ConstantClamp);
  const double alpha = 0.2;
  const Point r(0.3);
  const ConvolutionResult R = sup_convolution(U, r, alpha);
  for (double xq : {-0.4, -0.1, 0.0, 0.2, 0.5}) {
    const GridIndex idx = U.nearest_node(Point(xq));
    const Point z = U.node_point(idx);
    const size_t flat = static_cast<size_t>(idx.i);
    const Point zbar = z + R.argmax_offset[flat];
    if (std::abs(R.argmax_offset[flat][0]) >= 1.0 - 1e-9) continue;
    const SemiJet jet = jet_probe(R.values, z);
    const double predicted = r[0] - (z[0] - zbar[0]) / alpha;
    CHECK(std::abs(jet.p[0] - predicted) <= 10.0 * 0.05 / alpha);
  }
}

TEST_CASE("half-relaxed limits of a shrinking spike") {
  std::vector<std::pair<double, GridFunction>> family;
  for (double eps : {0.5, 0.25, 0.125, 0.0625, 0.03125}) {
    GridFunction u(1, 2.0, 0.03125, Extension::ConstantClamp, 1.0);
    u.for_each_node([&u, eps](const GridIndex& idx, const Point& x) {
      u.at(idx) = std::abs(x[0]) <= eps ? 1.0 : 0.0;
    });
    family.emplace_back(eps, u);
  }
  const RelaxedLimitReport upper = relaxed_limit(family, true);
  const RelaxedLimitReport lower = relaxed_limit(family, false);
  const GridIndex origin = upper.limit.nearest_node(Point(0.0));
  CHECK(upper.limit.at(origin) == 1.0);
  upper.limit.for_each_node([&](const GridIndex& idx, const Point& x) {
    if (std::abs(x[0]) > 0.5) CHECK(upper.limit.at(idx) == 0.0);
  });
  lower.limit.for_each_node([&](const GridIndex& idx, const Point&) {
    CHECK(lower.limit.at(idx) == 0.0);
  });
}

TEST_CASE("half-relaxed limit of a noisy family squeezes to the base") {
  const TestFunction g = TestFunction::gaussian(Point(0.0), 1.0);
  const double h = 0.05;
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> noise(-1.0, 1.0);
  std::vector<std::pair<double, GridFunction>> family;
  std::vector<double> epsilons{0.2, 0.1, 0.05, 0.025};
  for (double eps : epsilons) {
    GridFunction u = GridFunction::sample(g, 2.0, h, Extension::ConstantClamp);
    for (double& v : u.values()) v += eps * noise(rng);
    u.refresh_sup_bound();
    family.emplace_back(eps, u);
  }
  const RelaxedLimitReport rep = relaxed_limit(family, true);
  const double eps_min = epsilons.back();
  const double lip = g.gradient_sup_norm();
  double worst = 0.0;
  rep.limit.for_each_node([&](const GridIndex& idx, const Point& x) {
    worst = std::max(worst, std::abs(rep.limit.at(idx) - g.value(x)));
  });
  CHECK(worst <= eps_min + lip * (std::sqrt(eps_min) + h) + 1e-12);
  CHECK(rep.radii.back() == doctest::Approx(std::sqrt(eps_min)));
}

TEST_CASE("family validation") {
  GridFunction a(1, 1.0, 0.1, Extension::ConstantClamp, 1.0);
  GridFunction b(1, 1.0, 0.05, Extension::ConstantClamp, 1.0);
  CHECK_THROWS_AS(relaxed_limit({{0.5, a}, {0.25, b}}, true),
                  InconsistentGridsError);
  CHECK_THROWS_AS(relaxed_limit({{0.25, a}, {0.5, a}}, true),
                  std::invalid_argument);
}

TEST_CASE("jets of closed-form probes are exact") {
  const TestFunction q =
      TestFunction::quadratic_clamped(Point(0.3), 2.0, 5.0, 1.0);
  const SemiJet jet = jet_probe(q, Point(0.3));
  CHECK(jet.p[0] == 0.0);
  CHECK(jet.X.xx == doctest::Approx(2.0));
  const SemiJet c = jet_probe(TestFunction::constant(1, 4.0), Point(0.1));
  CHECK(c.p[0] == 0.0);
  CHECK(c.X.xx == 0.0);
}

TEST_CASE("grid jets converge at second order on the cosine") {
  double errors[2];
  int pass = 0;
  for (double h : {0.05, 0.025}) {
    const GridFunction u = GridFunction::sample(
        TestFunction::cosine(Point(1.0)), 2.0, h, Extension::ConstantClamp);
    const SemiJet jet = jet_probe(u, Point(0.0));
    errors[pass++] = std::abs(jet.X.xx - (-1.0));
  }
  CHECK(errors[1] < errors[0]);
  CHECK(errors[0] / errors[1] == doctest::Approx(4.0).epsilon(0.5));
  // 2d fit on a separable probe
  const GridFunction u2 = GridFunction::sample(
      TestFunction::cosine(Point(1.0, 0.5)), 1.0, 0.05,
      Extension::ConstantClamp);
  const SemiJet jet2 = jet_probe(u2, Point::zero(2));
  CHECK(jet2.X.xx == doctest::Approx(-1.0).epsilon(1e-2));
  CHECK(jet2.X.yy == doctest::Approx(-0.25).epsilon(1e-2));
  CHECK(jet2.X.xy == doctest::Approx(-0.5).epsilon(1e-2));
}
