// SPDX-License-Identifier: Apache-2.0
#include "levyscope/measures.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "levyscope/errors.hpp"

namespace levyscope {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;

// E1(x) = int_x^inf e^-t / t dt for x > 0.
double exp_int_e1(double x) {
  // std::expint is Ei; E1(x) = -Ei(-x).
  return -std::expint(-x);
}
}  // namespace

LevyMeasure LevyMeasure::stable_1d(double alpha, double g_plus,
                                   double g_minus) {
  if (!(alpha > 0.0 && alpha < 2.0))
    throw std::invalid_argument("stable measure requires alpha in (0,2), got " +
                                std::to_string(alpha));
  if (g_plus < 0.0 || g_minus < 0.0)
    throw std::invalid_argument("angular density must be nonnegative");
  LevyMeasure m;
  m.kind_ = MeasureKind::StableAnisotropic;
  m.dim_ = 1;
  m.alpha_ = alpha;
  m.g_plus_ = g_plus;
  m.g_minus_ = g_minus;
  return m;
}

LevyMeasure LevyMeasure::stable_2d(double alpha,
                                   std::vector<double> g_samples) {
  if (!(alpha > 0.0 && alpha < 2.0))
    throw std::invalid_argument("stable measure requires alpha in (0,2), got " +
                                std::to_string(alpha));
  if (g_samples.size() < 4 || g_samples.size() % 2 != 0)
    throw std::invalid_argument(
        "angular samples: need an even count >= 4, got " +
        std::to_string(g_samples.size()));
  for (double g : g_samples)
    if (!(g >= 0.0))
      throw std::invalid_argument("angular density must be nonnegative");
  LevyMeasure m;
  m.kind_ = MeasureKind::StableAnisotropic;
  m.dim_ = 2;
  m.alpha_ = alpha;
  m.angular_ = std::move(g_samples);
  return m;
}

LevyMeasure LevyMeasure::stable_2d_uniform(double alpha, double g_const,
                                           int n_angles) {
  return stable_2d(alpha, std::vector<double>(static_cast<size_t>(n_angles),
                                              g_const));
}

LevyMeasure LevyMeasure::tempered_1d(double gamma_plus, double gamma_minus) {
  if (!(gamma_plus > 0.0) || !(gamma_minus > 0.0))
    throw std::invalid_argument("tempering rates must be positive");
  LevyMeasure m;
  m.kind_ = MeasureKind::Tempered1d;
  m.dim_ = 1;
  m.gamma_plus_ = gamma_plus;
  m.gamma_minus_ = gamma_minus;
  return m;
}

LevyMeasure LevyMeasure::bounded_table(std::vector<Atom> atoms) {
  for (const Atom& a : atoms) {
    if (a.z.norm() == 0.0)
      throw std::invalid_argument("atoms must sit away from the origin");
    if (!(a.mass >= 0.0))
      throw std::invalid_argument("atom masses must be nonnegative");
  }
  LevyMeasure m;
  m.kind_ = MeasureKind::BoundedTable;
  m.dim_ = atoms.empty() ? 1 : atoms.front().z.dim;
  for (const Atom& a : atoms)
    if (a.z.dim != m.dim_)
      throw std::invalid_argument("atoms must share one dimension");
  m.atoms_ = std::move(atoms);
  return m;
}

double LevyMeasure::angular_density(double theta) const {
  if (dim_ == 1) return theta >= 0.0 ? g_plus_ : g_minus_;
  const size_t n = angular_.size();
  double t = std::fmod(theta, kTwoPi);
  if (t < 0.0) t += kTwoPi;
  const double pos = t / kTwoPi * static_cast<double>(n);
  const size_t i0 = std::min(static_cast<size_t>(pos), n - 1);
  const double frac = pos - static_cast<double>(i0);
  const size_t i1 = (i0 + 1) % n;
  return (1.0 - frac) * angular_[i0] + frac * angular_[i1];
}

double LevyMeasure::angular_total() const {
  if (dim_ == 1) return g_plus_ + g_minus_;
  double s = 0.0;
  for (double g : angular_) s += g;
  return s * kTwoPi / static_cast<double>(angular_.size());
}

double LevyMeasure::density(const Point& z) const {
  const double r = z.norm();
  if (r == 0.0) throw ZeroPointError("density undefined at the origin");
  switch (kind_) {
    case MeasureKind::StableAnisotropic: {
      double g;
      if (dim_ == 1) {
        g = z[0] > 0.0 ? g_plus_ : g_minus_;
      } else {
        g = angular_density(std::atan2(z[1], z[0]));
      }
      return g * std::pow(r, -(static_cast<double>(dim_) + alpha_));
    }
    case MeasureKind::Tempered1d: {
      const double x = z[0];
      return (x > 0.0 ? std::exp(-gamma_plus_ * x) : std::exp(gamma_minus_ * x)) /
             std::abs(x);
    }
    case MeasureKind::BoundedTable:
      throw NoDensityError("atomic measure has no Lebesgue density");
  }
  return 0.0;
}

bool LevyMeasure::symmetric() const {
  switch (kind_) {
    case MeasureKind::StableAnisotropic: {
      if (dim_ == 1) return g_plus_ == g_minus_;
      const size_t n = angular_.size();
      for (size_t i = 0; i < n; ++i)
        if (angular_[i] != angular_[(i + n / 2) % n]) return false;
      return true;
    }
    case MeasureKind::Tempered1d:
      return gamma_plus_ == gamma_minus_;
    case MeasureKind::BoundedTable: {
      // total mass at -z must match total mass at z for every atom site
      auto mass_at = [this](const Point& p) {
        double s = 0.0;
        for (const Atom& b : atoms_)
          if ((b.z - p).norm() == 0.0) s += b.mass;
        return s;
      };
      for (const Atom& a : atoms_)
        if (mass_at(a.z) != mass_at(-a.z)) return false;
      return true;
    }
  }
  return false;
}

double LevyMeasure::radial_density_total(double r) const {
  switch (kind_) {
    case MeasureKind::StableAnisotropic:
      return angular_total() * std::pow(r, -1.0 - alpha_);
    case MeasureKind::Tempered1d:
      return (std::exp(-gamma_plus_ * r) + std::exp(-gamma_minus_ * r)) / r;
    case MeasureKind::BoundedTable:
      return 0.0;
  }
  return 0.0;
}

std::string LevyMeasure::describe() const {
  std::ostringstream os;
  switch (kind_) {
    case MeasureKind::StableAnisotropic:
      os << "stable(d=" << dim_ << ", alpha=" << alpha_;
      if (dim_ == 1) os << ", g+=" << g_plus_ << ", g-=" << g_minus_;
      else os << ", angles=" << angular_.size();
      os << ")";
      break;
    case MeasureKind::Tempered1d:
      os << "tempered(g+=" << gamma_plus_ << ", g-=" << gamma_minus_ << ")";
      break;
    case MeasureKind::BoundedTable:
      os << "bounded_table(" << atoms_.size() << " atoms)";
      break;
  }
  return os.str();
}

namespace {

// int_0^delta r^{p} e^{-gamma r} dr by graded geometric panels with
// Gauss-Legendre nodes; integrable for p > -1.
double graded_exp_moment(double p, double gamma, double delta) {
  static const GaussRule gl = gauss_legendre(12);
  double total = 0.0;
  double hi = delta;
  double prev_total = -1.0;
  for (int level = 0; level < 2000; ++level) {
    const double lo = hi * 0.5;
    double panel = 0.0;
    const double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
    for (size_t q = 0; q < gl.x.size(); ++q) {
      const double r = mid + half * gl.x[q];
      panel += gl.w[q] * std::pow(r, p) * std::exp(-gamma * r);
    }
    total += panel * half;
    // remaining core is bounded by hi^{p+1}/(p+1) at the new top radius
    const double core = std::pow(lo, p + 1.0) / (p + 1.0);
    if (core <= 1e-15 * std::abs(total) + 1e-300 &&
        std::abs(total - prev_total) <= 1e-15 * std::abs(total) + 1e-300)
      return total + 0.5 * core;
    prev_total = total;
    hi = lo;
  }
  return total;
}

}  // namespace

Moment small_ball_moment(const LevyMeasure& mu, double exponent, double delta) {
  if (!(delta > 0.0)) throw std::invalid_argument("delta must be positive");
  if (exponent < 0.0) throw std::invalid_argument("exponent must be >= 0");
  switch (mu.kind()) {
    case MeasureKind::StableAnisotropic: {
      // radial integrand r^{exponent - alpha - 1} after the angular integral
      const double p = exponent - mu.alpha();
      if (p <= 0.0) return Moment::diverged();
      return Moment::finite(mu.angular_total() * std::pow(delta, p) / p);
    }
    case MeasureKind::Tempered1d: {
      if (exponent <= 0.0) return Moment::diverged();
      const double v =
          graded_exp_moment(exponent - 1.0, mu.gamma_plus(), delta) +
          graded_exp_moment(exponent - 1.0, mu.gamma_minus(), delta);
      return Moment::finite(v);
    }
    case MeasureKind::BoundedTable: {
      double s = 0.0;
      for (const Atom& a : mu.atoms()) {
        const double r = a.z.norm();
        if (r <= delta) s += a.mass * std::pow(r, exponent);
      }
      return Moment::finite(s);
    }
  }
  return Moment::diverged();
}

double tail_mass(const LevyMeasure& mu, double radius) {
  if (!(radius > 0.0)) throw std::invalid_argument("radius must be positive");
  switch (mu.kind()) {
    case MeasureKind::StableAnisotropic:
      return mu.angular_total() * std::pow(radius, -mu.alpha()) / mu.alpha();
    case MeasureKind::Tempered1d:
      return exp_int_e1(mu.gamma_plus() * radius) +
             exp_int_e1(mu.gamma_minus() * radius);
    case MeasureKind::BoundedTable: {
      double s = 0.0;
      for (const Atom& a : mu.atoms())
        if (a.z.norm() > radius) s += a.mass;
      return s;
    }
  }
  return 0.0;
}

namespace {

LevyConditionReport shell_moment_regression(
    const std::function<double(double)>& shell_moment2, double tail_integral) {
  // a_m = second-moment contribution of the shell (2^-(m+1), 2^-m].
  constexpr int kLevels = 42;
  constexpr int kFit = 14;
  std::vector<double> a(kLevels, 0.0);
  for (int m = 0; m < kLevels; ++m) a[static_cast<size_t>(m)] = shell_moment2(std::pow(2.0, -m));

  LevyConditionReport rep;
  double partial = 0.0;
  for (double v : a) partial += v;

  // least-squares slope of log2 a_m over the deepest levels with signal
  int hi = kLevels;
  while (hi > 0 && a[static_cast<size_t>(hi - 1)] <= 0.0) --hi;
  const int lo = std::max(0, hi - kFit);
  int n = 0;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (int m = lo; m < hi; ++m) {
    const double v = a[static_cast<size_t>(m)];
    if (v <= 0.0) continue;
    const double y = std::log2(v);
    sx += m; sy += y; sxx += double(m) * m; sxy += m * y;
    ++n;
  }
  if (n < 4) {
    // no mass near the origin (atoms or zero density): trivially integrable
    rep.finite = true;
    rep.estimate = partial + tail_integral;
    rep.exponent = 0.0;
    rep.slope = 0.0;
    return rep;
  }
  const double slope = (static_cast<double>(n) * sxy - sx * sy) /
                       (static_cast<double>(n) * sxx - sx * sx);
  rep.slope = slope;
  // a_m ~ 2^{-(2-alpha) m}: slope = alpha - 2
  rep.exponent = 2.0 + slope;
  rep.finite = slope < -0.005;
  if (rep.finite) {
    // geometric extrapolation of the truncated core
    const double rho = std::pow(2.0, slope);
    const double last = a[static_cast<size_t>(hi - 1)];
    rep.estimate = partial + last * rho / (1.0 - rho) + tail_integral;
  }
  return rep;
}

}  // namespace

LevyConditionReport verify_levy_condition_density(
    const std::function<double(double)>& radial_density,
    double tail_integral) {
  static const GaussRule gl = gauss_legendre(12);
  auto shell = [&](double top) {
    const double lo = 0.5 * top, mid = 0.75 * top, half = 0.25 * top;
    (void)lo;
    double s = 0.0;
    for (size_t q = 0; q < gl.x.size(); ++q) {
      const double r = mid + half * gl.x[q];
      s += gl.w[q] * r * r * radial_density(r);
    }
    return s * half;
  };
  return shell_moment_regression(shell, tail_integral);
}

LevyConditionReport verify_levy_condition(const LevyMeasure& mu) {
  if (mu.kind() == MeasureKind::BoundedTable) {
    LevyConditionReport rep;
    rep.finite = true;
    double s = 0.0;
    for (const Atom& a : mu.atoms())
      s += a.mass * std::min(a.z.norm2(), 1.0);
    rep.estimate = s;
    return rep;
  }
  // full density integrated over the sphere of radius r
  auto radial = [&mu](double r) {
    if (mu.dim() == 1)
      return mu.density(Point(r)) + mu.density(Point(-r));
    // angular trapezoid of the density over the circle of radius r
    const size_t n = mu.angular_samples().size();
    double s = 0.0;
    for (size_t j = 0; j < n; ++j) {
      const double th = kTwoPi * static_cast<double>(j) / static_cast<double>(n);
      s += mu.density(Point(r * std::cos(th), r * std::sin(th)));
    }
    return s * kTwoPi / static_cast<double>(n) * r;
  };
  return verify_levy_condition_density(radial, tail_mass(mu, 1.0));
}

}  // namespace levyscope
