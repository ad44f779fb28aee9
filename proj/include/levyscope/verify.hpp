// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "levyscope/contact.hpp"
#include "levyscope/fields.hpp"
#include "levyscope/jump_maps.hpp"
#include "levyscope/measures.hpp"
#include "levyscope/nonlinearity.hpp"
#include "levyscope/nonlocal.hpp"
#include "levyscope/relaxed.hpp"

namespace levyscope {

// ---------------------------------------------------------------------------
// degenerate ellipticity audit

struct EllipticitySample {
  Point x;
  double u = 0.0;
  Point p;
  SymMat M, N;      // M >= N in the semidefinite order
  double l1 = 0.0;  // l1 >= l2
  double l2 = 0.0;
};

struct EllipticityViolation {
  size_t sample = 0;
  double f_high = 0.0;  // F(...,M,l1)
  double f_low = 0.0;   // F(...,N,l2)
};

struct EllipticityReport {
  bool pass = true;
  size_t checked = 0;
  std::vector<EllipticityViolation> violations;
};

/// F(x,u,p,M,l1) <= F(x,u,p,N,l2) + 1e-12 on every ordered sample.
EllipticityReport check_ellipticity(const Nonlinearity& F,
                                    const std::vector<EllipticitySample>& s);

std::vector<EllipticitySample> default_ellipticity_samples(int dim);

// ---------------------------------------------------------------------------
// sub/supersolution audits

struct ProbeBankOptions {
  std::vector<double> curvatures{0.5, 1.0, 2.0, 4.0};  // capped at 1/h
  double cap = 2.0;           // saturation bound of the vertex quadratics
  bool vertex_quadratics = true;
  bool global_probes = true;  // cosine + gaussian sweeps
  int node_stride = 1;        // vertex placement stride
};

/// Vertex-touching clamped quadratics at interior nodes (both signs, swept
/// curvatures) plus a few global smooth probes; the finite audit of the
/// "for every test function" quantifier.
std::vector<TestFunction> build_probe_bank(const GridFunction& u, double delta,
                                           const ProbeBankOptions& opts = {});

struct ContactRecord {
  size_t probe = 0;
  GridIndex node;
  Point x;
  ContactKind kind = ContactKind::Max;
  double gap = 0.0;
  Point p;
  SymMat X;
  double l_inner = 0.0;
  double l_outer = 0.0;
  double F_value = 0.0;
  double threshold = 0.0;
  bool pass = true;
};

struct VerificationReport {
  std::string kind;  // "subsolution" or "supersolution"
  bool pass = true;
  bool no_contacts = false;
  double margin = 0.0;  // distance of the worst F-value from 0, signed
  double worst_value = 0.0;
  double delta = 0.0;
  double tol = 0.0;
  size_t contact_count = 0;
  std::vector<ContactRecord> contacts;
  std::vector<std::string> probe_bank;  // descriptions, provenance
  std::vector<std::string> attestations;
};

struct VerifyOptions {
  double tol = 0.0;          // user slack added to the per-contact threshold
  double quad_tol = 1e-6;    // rule accuracy
  bool global_contacts = false;  // contact over the whole box instead of
                                 // B(x, delta)
  const JumpMap* jmap = nullptr;
  const QuadratureRule* rule = nullptr;  // reuse a prebuilt rule
  size_t max_recorded_contacts = 100000;
};

/// Definition-style audit at discrete max contacts: F(x, u(x), grad phi,
/// D^2 phi, inner[phi] + outer[u]) <= threshold for every contact of every
/// probe, threshold = tol + error_bound * Lip_l(F) + 10 h (1 + |grad phi|).
VerificationReport verify_subsolution(const GridFunction& u,
                                      const Nonlinearity& F,
                                      const LevyMeasure& mu, double delta,
                                      const std::vector<TestFunction>& bank,
                                      const VerifyOptions& opts = {});

/// Mirror audit at discrete min contacts with F >= -threshold.
VerificationReport verify_supersolution(const GridFunction& v,
                                        const Nonlinearity& F,
                                        const LevyMeasure& mu, double delta,
                                        const std::vector<TestFunction>& bank,
                                        const VerifyOptions& opts = {});

// ---------------------------------------------------------------------------
// jump-map x-regularity audit

struct A1PairRow {
  Point x, y;
  double ratio_second_moment = 0.0;  // int |j(x,.)-j(y,.)|^2 mu / |x-y|^2
  double ratio_tail = 0.0;           // int_{|z|>1} |j(x,.)-j(y,.)| mu / |x-y|
  bool pass = true;
};

struct A1Report {
  bool pass = true;
  double sup_ball_second_moment = 0.0;  // sup_x int_B |j(x,z)|^2 mu
  double declared_constant = 0.0;
  double declared_linear_bound = 0.0;
  std::vector<A1PairRow> pairs;
  bool linear_bound_ok = true;
  Point linear_bound_witness;  // z violating |j| <= c|z|
  double linear_bound_ratio = 0.0;
};

A1Report check_A1(const LevyMeasure& mu, const JumpMap& jmap,
                  const std::vector<std::pair<Point, Point>>& point_pairs,
                  double rel_tol = 0.05);

// ---------------------------------------------------------------------------
// monotonicity / Lipschitz audit

struct A2A4Sample {
  Point x;
  double u = 0.0, v = 0.0;  // u >= v
  Point p;
  SymMat X;
  double l = 0.0, l_shift = 0.0;
};

struct A2A4Report {
  bool pass_gamma = true;
  bool pass_l_lipschitz = true;
  bool pass = true;
  size_t checked = 0;
  std::optional<size_t> gamma_witness;
  std::optional<size_t> lipschitz_witness;
  double worst_gamma_ratio = 0.0;       // min (F(u)-F(v))/(u-v)
  double worst_lipschitz_ratio = 0.0;   // max |F(l1)-F(l2)|/|l1-l2|
};

A2A4Report check_A2_A4(const Nonlinearity& F,
                       const std::vector<A2A4Sample>& samples,
                       double tol = 1e-9);

std::vector<A2A4Sample> default_a2a4_samples(int dim);

// ---------------------------------------------------------------------------
// half-relaxed-limit stability experiment

struct StabilityReport {
  RelaxedLimitReport relaxed;
  VerificationReport audit;
  double declared_tol = 0.0;

  StabilityReport(RelaxedLimitReport r, VerificationReport a, double t)
      : relaxed(std::move(r)), audit(std::move(a)), declared_tol(t) {}
};

/// Computes the discrete upper half-relaxed limit of a subsolution family and
/// audits it against the limiting nonlinearity. The declared tolerance adds
/// the family-gap surrogate gamma (eps_min + Lip sqrt(eps_min)) to the usual
/// per-contact threshold.
StabilityReport stability_experiment(
    const std::vector<std::pair<double, GridFunction>>& family,
    const Nonlinearity& F_limit, const LevyMeasure& mu, double delta,
    const std::vector<TestFunction>& extra_probes, const VerifyOptions& opts);

}  // namespace levyscope
