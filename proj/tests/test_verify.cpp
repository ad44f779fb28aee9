// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "levyscope/errors.hpp"
#include "levyscope/verify.hpp"
#include "oracle.hpp"

using namespace levyscope;

namespace {

const LevyMeasure kMu = LevyMeasure::stable_1d(0.5, 1.0, 1.0);

// Manufactured stationary problem: F = gamma u + |p|^2/2 - nu tr X - l - f
// with f defined from the probe w through the same quadrature paths, plus a
// slack moving the residual off zero.
struct Manufactured {
  GridFunction u;
  Nonlinearity F;
  QuadratureRule rule;
  TestFunction w;
};

Manufactured manufacture(const TestFunction& w, double gamma, double nu,
                         double delta, double box, double h, double slack) {
  QuadratureOptions qopts;
  qopts.resolve_radius = 0.0;  // grid-field evaluations only
  QuadratureRule rule = build_quadrature(kMu, delta, 1e-6, qopts);
  GridFunction u = GridFunction::sample(w, box, h, Extension::ConstantClamp);
  GridFunction f(1, box, h, Extension::ConstantClamp, 0.0);
  u.for_each_node([&](const GridIndex& idx, const Point& x) {
    const double l =
        eval_inner(kMu, w, x, delta, rule).value +
        eval_outer(kMu, FieldView(u), x, w.gradient(x), delta, rule).value;
    f.at(idx) = gamma * w.value(x) + 0.5 * w.gradient(x).norm2() -
                nu * w.hessian(x).trace() - l + slack;
  });
  f.refresh_sup_bound();
  Nonlinearity F = Nonlinearity::stationary_semilinear(
      gamma, nu, [f](Point x) { return f.value(x); });
  return {std::move(u), std::move(F), std::move(rule), w};
}

std::vector<TestFunction> bank_with_solution(const Manufactured& m,
                                             double delta) {
  std::vector<TestFunction> bank = build_probe_bank(m.u, delta);
  bank.push_back(m.w.shifted(-0.05));
  return bank;
}

}  // namespace

TEST_CASE("degenerate ellipticity of the shipped forms") {
  const Nonlinearity F = Nonlinearity::stationary_semilinear(
      1.0, 1.0, [](Point) { return 0.0; });
  const EllipticityReport rep =
      check_ellipticity(F, default_ellipticity_samples(1));
  CHECK(rep.pass);
  CHECK(rep.checked > 50);

  // raising the Hessian by I drops F by nu * d exactly
  const Point x(0.0), p(0.3);
  const SymMat N = SymMat::identity(1, -0.2);
  const SymMat M = N + SymMat::identity(1, 1.0);
  CHECK(F.eval(x, 0.1, p, N, 0.0) - F.eval(x, 0.1, p, M, 0.0) ==
        doctest::Approx(1.0));

  const Nonlinearity bell = Nonlinearity::bellman(
      0.7, {{0.3, nullptr, [](Point) { return 1.0; }},
            {0.1, nullptr, [](Point) { return -0.5; }}});
  CHECK(check_ellipticity(bell, default_ellipticity_samples(1)).pass);
}

TEST_CASE("a broken sign in the nonlocal slot is caught with a witness") {
  const Nonlinearity broken = Nonlinearity::custom(
      [](const Point&, double u, const Point&, const SymMat&, double l) {
        return u + l;  // increasing in l
      },
      1.0, 1.0, 0.0, "broken_antimonotone");
  const EllipticityReport rep =
      check_ellipticity(broken, default_ellipticity_samples(1));
  CHECK_FALSE(rep.pass);
  REQUIRE_FALSE(rep.violations.empty());
  CHECK(rep.violations.front().f_high > rep.violations.front().f_low);
}

TEST_CASE("zeroth-order monotonicity and nonlocal Lipschitz audits") {
  const Nonlinearity F = Nonlinearity::stationary_semilinear(
      1.0, 0.5, [](Point) { return 0.0; });
  const A2A4Report rep = check_A2_A4(F, default_a2a4_samples(1));
  CHECK(rep.pass);
  // linear dependence: the two ratios are exactly gamma and 1r
  CHECK(rep.worst_gamma_ratio == doctest::Approx(1.0));
  CHECK(rep.worst_lipschitz_ratio == doctest::Approx(1.0));

  const Nonlinearity bell = Nonlinearity::bellman(
      0.8, {{0.2, nullptr, [](Point x) { return std::sin(x[0]); }},
            {0.4, nullptr, [](Point x) { return std::cos(x[0]); }}});
  const A2A4Report brep = check_A2_A4(bell, default_a2a4_samples(1));
  CHECK(brep.pass);
  CHECK(brep.worst_gamma_ratio == doctest::Approx(0.8));

  // declared gamma above the true one fails with a witness index
  const Nonlinearity lying = Nonlinearity::custom(
      [](const Point&, double u, const Point&, const SymMat&, double l) {
        return u - l;
      },
      2.0, 1.0, 0.0, "overdeclared_gamma");
  const A2A4Report lrep = check_A2_A4(lying, default_a2a4_samples(1));
  CHECK_FALSE(lrep.pass_gamma);
  CHECK(lrep.gamma_witness.has_value());
}

TEST_CASE("jump-map x-regularity audit") {
  const std::vector<std::pair<Point, Point>> pairs{
      {Point(0.0), Point(0.2)}, {Point(-0.5), Point(-0.45)},
      {Point(1.0), Point(1.001)}};

  // identity: differences vanish, any nonnegative declared constant passes
  const A1Report id = check_A1(kMu, JumpMap::identity(1), pairs);
  CHECK(id.pass);
  for (const A1PairRow& row : id.pairs) {
    CHECK(row.ratio_second_moment == 0.0);
    CHECK(row.ratio_tail == 0.0);
  }
  CHECK(id.sup_ball_second_moment ==
        doctest::Approx(small_ball_moment(kMu, 2.0, 1.0).value)
            .epsilon(1e-5));

  // tapered shear: the second-moment ratio is bounded by
  // Lip(b)^2 * int |z|^2/(1+|z|^2)^2 mu(dz), computed by the oracle
  const double amp = 0.4, freq = 1.5;
  const JumpMap shear = JumpMap::shear(1, amp, freq);
  const double lip = shear.x_lipschitz();
  const double taper_moment =
      2.0 * (oracle::adaptive_simpson(
                 [](double z) {
                   const double t = z / (1.0 + z * z);
                   return t * t * std::pow(z, -1.5);
                 },
                 1e-8, 1.0) +
             oracle::adaptive_simpson(
                 [](double z) {
                   const double t = z / (1.0 + z * z);
                   return t * t * std::pow(z, -1.5);
                 },
                 1.0, 1e6));
  const double tail_moment =
      2.0 * oracle::adaptive_simpson(
                [](double z) {
                  return z / (1.0 + z * z) * std::pow(z, -1.5);
                },
                1.0, 1e8);
  const double declared =
      std::max(lip * lip * taper_moment, lip * tail_moment);
  const A1Report srep =
      check_A1(kMu, shear.with_declared_bounds(shear.linear_bound(), declared),
               pairs);
  CHECK(srep.pass);
  for (const A1PairRow& row : srep.pairs)
    CHECK(row.ratio_second_moment <= lip * lip * taper_moment * 1.01);

  // close pair: the ratio approaches b'(x)^2 * taper_moment
  const double bprime = amp * freq * std::cos(freq * 1.0);
  CHECK(srep.pairs[2].ratio_second_moment ==
        doctest::Approx(bprime * bprime * taper_moment).epsilon(0.02));

  // constructed violation of the linear bound: declared 1, actual 2
  const JumpMap doubled =
      JumpMap::linear_in_z(SymMat::identity(1, 2.0)).with_declared_bounds(
          1.0, 0.0);
  const A1Report vrep = check_A1(kMu, doubled, pairs);
  CHECK_FALSE(vrep.pass);
  CHECK_FALSE(vrep.linear_bound_ok);
  CHECK(vrep.linear_bound_ratio == doctest::Approx(2.0).epsilon(1e-9));
  CHECK(vrep.linear_bound_witness.norm() > 0.0);
}

TEST_CASE("manufactured solution passes both audits") {
  const TestFunction w = TestFunction::cosine(Point(1.0), 0.3);
  const double delta = 0.25, h = 0.01, box = 2.0;
  const Manufactured m = manufacture(w, 1.0, 0.1, delta, box, h, 0.0);
  VerifyOptions opts;
  opts.rule = &m.rule;
  const std::vector<TestFunction> bank = bank_with_solution(m, delta);
  const VerificationReport sub =
      verify_subsolution(m.u, m.F, kMu, delta, bank, opts);
  const VerificationReport sup =
      verify_supersolution(m.u, m.F, kMu, delta, bank, opts);
  CHECK(sub.pass);
  CHECK(sup.pass);
  CHECK(sub.contact_count > 100);  // the solution probe touches everywhere
  CHECK_FALSE(sub.no_contacts);
}

TEST_CASE("slack perturbations produce the correct one-sided verdicts") {
  const TestFunction w = TestFunction::cosine(Point(1.0), 0.3);
  const double delta = 0.25, h = 0.01, box = 2.0, slack = 0.5;

  // f + slack: strict subsolution, fails the supersolution audit
  {
    const Manufactured m = manufacture(w, 1.0, 0.1, delta, box, h, slack);
    VerifyOptions opts;
    opts.rule = &m.rule;
    const std::vector<TestFunction> bank = bank_with_solution(m, delta);
    const VerificationReport sub =
        verify_subsolution(m.u, m.F, kMu, delta, bank, opts);
    const VerificationReport sup =
        verify_supersolution(m.u, m.F, kMu, delta, bank, opts);
    CHECK(sub.pass);
    CHECK(sub.margin >= 0.5 * slack);
    CHECK_FALSE(sup.pass);
    CHECK(-sup.worst_value >= 0.5 * slack);
  }
  // f - slack: strict supersolution, fails the subsolution audit
  {
    const Manufactured m = manufacture(w, 1.0, 0.1, delta, box, h, -slack);
    VerifyOptions opts;
    opts.rule = &m.rule;
    const std::vector<TestFunction> bank = bank_with_solution(m, delta);
    const VerificationReport sub =
        verify_subsolution(m.u, m.F, kMu, delta, bank, opts);
    const VerificationReport sup =
        verify_supersolution(m.u, m.F, kMu, delta, bank, opts);
    CHECK_FALSE(sub.pass);
    CHECK(sub.worst_value >= 0.5 * slack);
    CHECK(sup.pass);
    CHECK(sup.margin >= 0.5 * slack);
  }
}

TEST_CASE("global and local contact audits agree on shared contacts") {
  const TestFunction w = TestFunction::cosine(Point(1.0), 0.3);
  const double delta = 0.25, h = 0.02, box = 2.0;
  const Manufactured m = manufacture(w, 1.0, 0.1, delta, box, h, 0.0);
  VerifyOptions local;
  local.rule = &m.rule;
  VerifyOptions global = local;
  global.global_contacts = true;
  const std::vector<TestFunction> bank = bank_with_solution(m, delta);
  const VerificationReport lrep =
      verify_subsolution(m.u, m.F, kMu, delta, bank, local);
  const VerificationReport grep =
      verify_subsolution(m.u, m.F, kMu, delta, bank, global);
  CHECK(lrep.pass == grep.pass);
  // every global contact appears locally with the same F-value and verdict
  size_t matched = 0;
  for (const ContactRecord& g : grep.contacts) {
    for (const ContactRecord& l : lrep.contacts) {
      if (l.probe == g.probe && l.node.i == g.node.i &&
          l.node.j == g.node.j) {
        ++matched;
        CHECK(l.F_value == doctest::Approx(g.F_value).epsilon(1e-12));
        CHECK(l.pass == g.pass);
        break;
      }
    }
  }
  CHECK(matched == grep.contact_count);
  CHECK(grep.contact_count <= lrep.contact_count);
  CHECK(grep.contact_count > 0);
}

TEST_CASE("localization family: plateau probes behave as declared") {
  const double level = 2.0;
  double prev_g = 1e18, prev_h = 1e18, prev_nl = 1e18;
  for (double beta : {1.0, 0.5, 0.25}) {
    const TestFunction psi = TestFunction::plateau(1, level, beta);
    // super-level threshold beyond 2/beta
    CHECK(psi.value(Point(2.0 / beta + 1e-9)) > level);
    CHECK(psi.value(Point(-3.0 / beta)) > level);
    // flat inside 1/beta
    CHECK(psi.value(Point(0.5 / beta)) == 0.0);
    CHECK(psi.gradient(Point(0.5 / beta)).norm() == 0.0);
    // derivative decay
    CHECK(psi.gradient_sup_norm() < prev_g);
    CHECK(psi.hessian_sup_norm() < prev_h);
    prev_g = psi.gradient_sup_norm();
    prev_h = psi.hessian_sup_norm();
    // nonlocal decay at representative points
    const QuadratureRule rule = build_quadrature(kMu, 0.5, 1e-6);
    const double nl =
        std::abs(eval_levy(kMu, psi, Point(0.0), rule).value) +
        std::abs(eval_levy(kMu, psi, Point(0.4 / beta), rule).value);
    CHECK(nl < prev_nl);
    prev_nl = nl;
  }
}

TEST_CASE("doubled-variable surrogate with closed-form jets") {
  // u = clamped concave quadratic, v = u + 2c + mu-penalty, jets at the
  // shared contact known in closed form
  const double A = 1.0, cap = 1.0, c = 0.4, eps = 0.05;
  const double mu_pen = 2.0 * A * A * eps;
  const double nu = 0.1, gamma = 1.0, delta = 0.25;
  const double box = 4.0, h = 0.02;

  const TestFunction uq = TestFunction::quadratic_clamped(Point(0.0), -A, cap);
  const TestFunction vpen =
      TestFunction::quadratic_clamped(Point(0.0), mu_pen, 2.0);
  const GridFunction u =
      GridFunction::sample(uq, box, h, Extension::ConstantClamp);
  const GridFunction v = GridFunction::sample(
      [&](Point x) { return uq.value(x) + 2.0 * c + vpen.value(x); }, 1, box,
      h, Extension::ConstantClamp);

  // (0,0) maximizes u(x) - v(y) - |x-y|^2/(2 eps) over the grid lattice
  double best = -1e18;
  GridIndex bi{0, 0}, bj{0, 0};
  u.for_each_node([&](const GridIndex& ix, const Point& px) {
    v.for_each_node([&](const GridIndex& iy, const Point& py) {
      const double val = u.at(ix) - v.at(iy) -
                         (px - py).norm2() / (2.0 * eps);
      if (val > best) {
        best = val;
        bi = ix;
        bj = iy;
      }
    });
  });
  CHECK(u.node_point(bi).norm() <= 1e-12);
  CHECK(v.node_point(bj).norm() <= 1e-12);

  // closed-form jets at the contact
  const double X = -A;          // superjet curvature of u at 0
  const double Y = mu_pen - A;  // subjet curvature of v at 0
  const double p = 0.0, q = 0.0;

  // matrix inequality blocks: -(1/alpha) I <= diag(X, -Y) <= D^2 phi_alpha
  for (double alpha : {eps / 8.0, eps / 16.0}) {
    CHECK(-1.0 / alpha <= X);
    CHECK(-1.0 / alpha <= -Y);
    const double q_alpha = 1.0 / (eps - 2.0 * alpha);  // sup-convolved probe
    // N = D^2 phi_alpha - diag(X, -Y) must be psd: trace and det test
    const double n11 = q_alpha - X, n22 = q_alpha + Y, n12 = -q_alpha;
    CHECK(n11 + n22 >= 0.0);
    CHECK(n11 * n22 - n12 * n12 >= -1e-12);
    // and the plain doubled probe bounds it from below up to o_alpha(1)
    CHECK(q_alpha >= 1.0 / eps);
  }

  // viscosity inequalities through the split evaluation, with f pinned at
  // the contact so the subsolution side is tight
  const QuadratureRule rule = build_quadrature(kMu, delta, 1e-6);
  const double q_alpha = 1.0 / (eps - 2.0 * eps / 8.0);
  const TestFunction phi_x =
      TestFunction::quadratic_clamped(Point(0.0), q_alpha, 50.0);
  const double l_u =
      eval_inner(kMu, phi_x, Point(0.0), delta, rule).value +
      eval_outer(kMu, FieldView(u), Point(0.0), Point(p), delta, rule).value;
  const double l_v =
      eval_inner(kMu, phi_x, Point(0.0), delta, rule).value +
      eval_outer(kMu, FieldView(v), Point(0.0), Point(q), delta, rule).value;
  const double f0 = gamma * u.value(Point(0.0)) + 0.5 * p * p - nu * X - l_u;
  const double Fu = gamma * u.value(Point(0.0)) + 0.5 * p * p - nu * X -
                    l_u - f0;
  const double Fv = gamma * v.value(Point(0.0)) + 0.5 * q * q - nu * Y -
                    l_v - f0;
  CHECK(Fu <= 1e-12);
  // v sits 2 gamma c above with the same nonlocal terms up to the penalty
  CHECK(Fv >= gamma * 2.0 * c - nu * mu_pen - std::abs(l_v - l_u) - 1e-6);
  CHECK(Fv >= 0.5 * gamma * c);
}

TEST_CASE("stability experiment on a constant family") {
  const double cval = 0.7, gamma = 1.0, delta = 0.25;
  std::vector<std::pair<double, GridFunction>> family;
  for (double eps : {0.1, 0.05, 0.025})
    family.emplace_back(
        eps, GridFunction::sample(TestFunction::constant(1, cval), 2.0, 0.0625,
                                  Extension::ConstantClamp));
  const Nonlinearity F = Nonlinearity::stationary_semilinear(
      gamma, 0.0, [&](Point) { return gamma * cval; });
  VerifyOptions opts;
  const StabilityReport rep =
      stability_experiment(family, F, kMu, delta, {}, opts);
  // the relaxed limit of constants is the constant
  rep.relaxed.limit.for_each_node([&](const GridIndex& idx, const Point&) {
    CHECK(rep.relaxed.limit.at(idx) == cval);
  });
  CHECK(rep.audit.pass);
}

TEST_CASE("stability experiment flags an injected violation") {
  const double gamma = 1.0, delta = 0.25, h = 0.0625;
  std::vector<std::pair<double, GridFunction>> family;
  for (double eps : {0.1, 0.05, 0.025}) {
    GridFunction u = GridFunction::sample(TestFunction::constant(1, 0.0), 2.0,
                                          h, Extension::ConstantClamp);
    const GridIndex spike = u.nearest_node(Point(0.5));
    u.at(spike) = 1.5;  // same violation at every level
    u.refresh_sup_bound();
    family.emplace_back(eps, u);
  }
  const Nonlinearity F =
      Nonlinearity::stationary_semilinear(gamma, 0.0, [](Point) { return 0.0; });
  VerifyOptions opts;
  const StabilityReport rep =
      stability_experiment(family, F, kMu, delta, {}, opts);
  CHECK_FALSE(rep.audit.pass);
  // a failing contact sits in the spiked neighborhood
  bool found = false;
  for (const ContactRecord& cr : rep.audit.contacts)
    if (!cr.pass && std::abs(cr.x[0] - 0.5) <= std::sqrt(0.025) + 2.0 * h)
      found = true;
  CHECK(found);
}
