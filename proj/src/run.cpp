// SPDX-License-Identifier: Apache-2.0
#include "levyscope/run.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <iostream>
#include <sstream>

#include "json.hpp"
#include "levyscope/errors.hpp"
#include "levyscope/io.hpp"
#include "levyscope/nonlocal.hpp"
#include "levyscope/solvers.hpp"
#include "levyscope/verify.hpp"

namespace levyscope {

namespace {

using nlohmann::json;

json config_json(const Config& cfg, uint64_t seed) {
  json j;
  for (const auto& [k, v] : cfg.entries()) j[k] = v;
  j["seed"] = seed;
  return j;
}

std::map<std::string, std::string> provenance(const Config& cfg,
                                              uint64_t seed) {
  std::map<std::string, std::string> p(cfg.entries().begin(),
                                       cfg.entries().end());
  p["seed"] = std::to_string(seed);
  return p;
}

std::string out_path(const std::string& outdir, const std::string& name) {
  namespace fs = std::filesystem;
  fs::create_directories(outdir);
  return (fs::path(outdir) / name).string();
}

// --- builders -------------------------------------------------------------

LevyMeasure build_measure(const Config& cfg) {
  const std::string kind = cfg.get_string("measure.kind");
  if (kind == "stable") {
    const int dim = cfg.get_int_or("measure.dim", 1);
    const double alpha =
        cfg.get_double_in("measure.alpha", 0.0, 2.0, true, true);
    if (dim == 1)
      return LevyMeasure::stable_1d(alpha, cfg.get_double_or("measure.g_plus", 1.0),
                                    cfg.get_double_or("measure.g_minus", 1.0));
    if (dim != 2)
      throw ConfigError("config error: field 'measure.dim': must be 1 or 2");
    if (cfg.has("measure.angular_csv")) {
      std::ifstream in(cfg.get_string("measure.angular_csv"));
      if (!in)
        throw ConfigError("config error: field 'measure.angular_csv': cannot "
                          "open file");
      std::vector<double> g;
      std::string line;
      while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        g.push_back(std::stod(line));
      }
      return LevyMeasure::stable_2d(alpha, g);
    }
    return LevyMeasure::stable_2d_uniform(
        alpha, cfg.get_double_or("measure.g_const", 1.0),
        cfg.get_int_or("measure.angles", 64));
  }
  if (kind == "tempered")
    return LevyMeasure::tempered_1d(cfg.get_positive("measure.gamma_plus"),
                                    cfg.get_positive("measure.gamma_minus"));
  if (kind == "bounded_table") {
    const std::vector<double> flat = cfg.get_doubles("measure.atoms");
    if (flat.size() % 2 != 0)
      throw ConfigError(
          "config error: field 'measure.atoms': expected z/mass pairs");
    std::vector<Atom> atoms;
    for (size_t k = 0; k + 1 < flat.size(); k += 2)
      atoms.push_back({Point(flat[k]), flat[k + 1]});
    return LevyMeasure::bounded_table(atoms);
  }
  throw ConfigError("config error: field 'measure.kind': unknown kind '" +
                    kind + "'");
}

Point point_from(const Config& cfg, const std::string& key, int dim,
                 double fallback = 0.0) {
  if (!cfg.has(key)) {
    Point p = Point::zero(dim);
    p[0] = fallback;
    return p;
  }
  const std::vector<double> v = cfg.get_doubles(key);
  Point p = Point::zero(dim);
  p[0] = v[0];
  if (dim == 2) p[1] = v.size() > 1 ? v[1] : v[0];
  return p;
}

TestFunction build_probe(const Config& cfg, const std::string& prefix,
                         int dim) {
  const std::string form = cfg.get_string(prefix + ".form");
  if (form == "constant")
    return TestFunction::constant(dim, cfg.get_double_or(prefix + ".c", 0.0));
  if (form == "affine")
    return TestFunction::affine(point_from(cfg, prefix + ".slope", dim, 1.0),
                                cfg.get_double_or(prefix + ".c", 0.0));
  if (form == "cosine")
    return TestFunction::cosine(point_from(cfg, prefix + ".k", dim, 1.0),
                                cfg.get_double_or(prefix + ".amplitude", 1.0));
  if (form == "gaussian")
    return TestFunction::gaussian(
        point_from(cfg, prefix + ".center", dim),
        cfg.get_double_or(prefix + ".width", 1.0),
        cfg.get_double_or(prefix + ".amplitude", 1.0));
  if (form == "bump")
    return TestFunction::bump(point_from(cfg, prefix + ".center", dim),
                              cfg.get_double_or(prefix + ".radius", 1.0),
                              cfg.get_double_or(prefix + ".amplitude", 1.0));
  if (form == "quadratic_clamped")
    return TestFunction::quadratic_clamped(
        point_from(cfg, prefix + ".center", dim),
        cfg.get_double_or(prefix + ".curvature", 1.0),
        cfg.get_double_or(prefix + ".cap", 2.0),
        cfg.get_double_or(prefix + ".vertex", 0.0));
  throw ConfigError("config error: field '" + prefix +
                    ".form': unknown probe form '" + form + "'");
}

GridSpec build_grid(const Config& cfg, int dim) {
  GridSpec g;
  g.dim = dim;
  g.box = cfg.get_positive("grid.box");
  g.h = cfg.get_positive("grid.h");
  const std::string ext = cfg.get_string_or("grid.extension", "clamp");
  if (ext == "clamp")
    g.extension = Extension::ConstantClamp;
  else if (ext == "periodic")
    g.extension = Extension::Periodic;
  else
    throw ConfigError(
        "config error: field 'grid.extension': expected clamp or periodic");
  return g;
}

JumpMap build_jump(const Config& cfg, int dim) {
  const std::string kind = cfg.get_string_or("jump.kind", "identity");
  JumpMap j = JumpMap::identity(dim);
  if (kind == "identity") {
    j = JumpMap::identity(dim);
  } else if (kind == "linear") {
    const double a = cfg.get_double_or("jump.a", 1.0);
    j = JumpMap::linear_in_z(SymMat::identity(dim, a));
  } else if (kind == "shear") {
    j = JumpMap::shear(dim, cfg.get_double_in("jump.amp", -1.0, 1.0, true, true),
                       cfg.get_double_or("jump.freq", 1.0));
  } else {
    throw ConfigError("config error: field 'jump.kind': unknown kind '" +
                      kind + "'");
  }
  if (cfg.has("jump.a1_constant"))
    j = j.with_declared_bounds(j.linear_bound(),
                               cfg.get_double("jump.a1_constant"));
  return j;
}

std::function<double(Point)> build_field_expr(const Config& cfg,
                                              const std::string& key,
                                              double box) {
  if (!cfg.has(key)) return nullptr;
  std::istringstream in(cfg.get_string(key));
  std::string kind;
  in >> kind;
  if (kind == "const") {
    double c = 0.0;
    in >> c;
    return [c](Point) { return c; };
  }
  if (kind == "cos" || kind == "sin") {
    double amp = 1.0, k = 1.0;
    in >> amp >> k;
    const bool is_cos = kind == "cos";
    return [amp, k, is_cos](Point x) {
      return is_cos ? amp * std::cos(k * (x[0] + x[1]))
                    : amp * std::sin(k * (x[0] + x[1]));
    };
  }
  if (kind == "gauss") {
    double amp = 1.0, w = 1.0;
    in >> amp >> w;
    return [amp, w](Point x) {
      return amp * std::exp(-x.norm2() / (2.0 * w * w));
    };
  }
  (void)box;
  throw ConfigError("config error: field '" + key +
                    "': expected 'const C' | 'cos A K' | 'sin A K' | "
                    "'gauss A W'");
}

// --- subcommands -----------------------------------------------------------

int cmd_quadrature_report(const Config& cfg, uint64_t seed,
                          const std::string& outdir, std::ostream& log) {
  const LevyMeasure mu = build_measure(cfg);
  const double delta = cfg.get_double_in("operator.delta", 0.0, 1.0, true);
  const double tol = cfg.get_positive("operator.tol");
  const QuadratureRule rule = build_quadrature(mu, delta, tol);

  CsvWriter csv(out_path(outdir, cfg.get_string_or("output.csv", "quadrature.csv")),
                provenance(cfg, seed), {"part", "z1", "z2", "weight"});
  for (size_t k = 0; k < rule.inner_nodes.size(); ++k)
    csv.raw_row({"inner", CsvWriter::format(rule.inner_nodes[k][0]),
                 CsvWriter::format(rule.inner_nodes[k][1]),
                 CsvWriter::format(rule.inner_weights[k])});
  for (size_t k = 0; k < rule.outer_nodes.size(); ++k)
    csv.raw_row({"outer", CsvWriter::format(rule.outer_nodes[k][0]),
                 CsvWriter::format(rule.outer_nodes[k][1]),
                 CsvWriter::format(rule.outer_weights[k])});

  json rep;
  rep["config"] = config_json(cfg, seed);
  rep["measure"] = mu.describe();
  rep["delta"] = rule.delta;
  rep["r_max"] = rule.r_max;
  rep["core_radius"] = rule.core_radius;
  rep["symmetric"] = rule.symmetric;
  rep["inner_moment2"] = rule.inner_moment2;
  rep["inner_rel_err"] = rule.inner_rel_err;
  rep["outer_mass"] = rule.outer_mass;
  rep["outer_rel_err"] = rule.outer_rel_err;
  rep["tail_bound"] = rule.tail_bound;
  rep["node_count"] = rule.node_count();
  const LevyConditionReport lc = verify_levy_condition(mu);
  rep["levy_condition"] = {{"finite", lc.finite},
                           {"estimate", lc.estimate},
                           {"exponent", lc.exponent}};
  std::ofstream js(out_path(outdir, cfg.get_string_or("output.json",
                                                      "quadrature.json")));
  js << rep.dump(2) << "\n";
  log << "quadrature rule: " << rule.node_count() << " nodes, r_max "
      << rule.r_max << ", tail bound " << rule.tail_bound << "\n";
  return kExitOk;
}

int cmd_eval_op(const Config& cfg, uint64_t seed, const std::string& outdir,
                std::ostream& log) {
  const LevyMeasure mu = build_measure(cfg);
  const int dim = mu.dim();
  const double delta = cfg.get_double_in("operator.delta", 0.0, 1.0, true);
  const double tol = cfg.get_positive("operator.tol");
  const std::string op = cfg.get_string_or("operator.kind", "levy");
  const TestFunction phi = build_probe(cfg, "probe", dim);
  const QuadratureRule rule = build_quadrature(mu, delta, tol);

  std::vector<Point> points;
  const std::vector<double> coords = cfg.get_doubles("eval.points");
  if (dim == 1) {
    for (double c : coords) points.push_back(Point(c));
  } else {
    if (coords.size() % 2 != 0)
      throw ConfigError(
          "config error: field 'eval.points': need x y pairs for d=2");
    for (size_t k = 0; k + 1 < coords.size(); k += 2)
      points.push_back(Point(coords[k], coords[k + 1]));
  }

  CsvWriter csv(out_path(outdir, cfg.get_string_or("output.csv", "eval.csv")),
                provenance(cfg, seed),
                {"x1", "x2", "inner", "outer", "error_bound"});
  for (const Point& x : points) {
    SplitEvaluation s;
    if (op == "levy") {
      s = split_evaluate(mu, phi, FieldView(phi), x, delta, rule);
    } else if (op == "levy_ito") {
      s = eval_levy_ito(mu, build_jump(cfg, dim), phi, x, delta, rule);
    } else if (op == "K") {
      s = eval_K(mu, build_jump(cfg, dim), phi, x, delta, rule);
    } else if (op == "B") {
      const std::string gk = cfg.get_string_or("jump.gamma_kind", "constant");
      const double gc = cfg.get_double_or("jump.gamma_c", 1.0);
      const GammaWeight gw = gk == "clipped_linear"
                                 ? GammaWeight::clipped_linear(gc)
                                 : GammaWeight::constant(gc);
      s = eval_B(mu, build_jump(cfg, dim), gw, phi, x, delta, rule);
    } else {
      throw ConfigError(
          "config error: field 'operator.kind': expected levy, levy_ito, K "
          "or B");
    }
    csv.row({x[0], x[1], s.inner, s.outer, s.error_bound});
  }
  log << "evaluated " << op << " at " << points.size() << " points\n";
  return kExitOk;
}

json contact_json(const ContactRecord& c) {
  json j;
  j["node"] = {c.node.i, c.node.j};
  j["x"] = {c.x[0], c.x[1]};
  j["probe"] = c.probe;
  j["kind"] = c.kind == ContactKind::Max ? "max" : "min";
  j["gap"] = c.gap;
  j["p"] = {c.p[0], c.p[1]};
  j["X"] = {{c.X.xx, c.X.xy}, {c.X.xy, c.X.yy}};
  j["l_inner"] = c.l_inner;
  j["l_outer"] = c.l_outer;
  j["F_value"] = c.F_value;
  j["threshold"] = c.threshold;
  j["verdict"] = c.pass ? "pass" : "fail";
  return j;
}

json report_json(const VerificationReport& rep) {
  json j;
  j["kind"] = rep.kind;
  j["pass"] = rep.pass;
  j["no_contacts"] = rep.no_contacts;
  j["margin"] = rep.margin;
  j["worst_value"] = rep.worst_value;
  j["delta"] = rep.delta;
  j["tol"] = rep.tol;
  j["contact_count"] = rep.contact_count;
  j["probe_bank"] = rep.probe_bank;
  j["attestations"] = rep.attestations;
  json contacts = json::array();
  for (const ContactRecord& c : rep.contacts) contacts.push_back(contact_json(c));
  j["contacts"] = contacts;
  return j;
}

// Manufactured stationary problem shared by `verify` and the acceptance
// suite: F = gamma u + |p|^2/2 - nu tr X - l - f with f chosen so that the
// sampled probe solves the discrete problem exactly, plus an optional slack.
struct ManufacturedProblem {
  GridFunction u;
  Nonlinearity F;
  QuadratureRule rule;
};

ManufacturedProblem manufacture(const LevyMeasure& mu, const TestFunction& w,
                                const GridSpec& grid, double gamma, double nu,
                                double delta, double quad_tol, double slack) {
  QuadratureOptions qopts;
  qopts.resolve_radius = 0.0;  // only grid fields run through this rule
  QuadratureRule rule = build_quadrature(mu, delta, quad_tol, qopts);
  GridFunction u = GridFunction::sample(w, grid.box, grid.h, grid.extension);
  GridFunction f(grid.dim, grid.box, grid.h, grid.extension, 0.0);
  u.for_each_node([&](const GridIndex& idx, const Point& x) {
    if (!u.inside_box(x, 0.0)) return;
    const EvalResult in = eval_inner(mu, w, x, delta, rule);
    const EvalResult out =
        eval_outer(mu, FieldView(u), x, w.gradient(x), delta, rule);
    const double l = in.value + out.value;
    f.at(idx) = gamma * w.value(x) + 0.5 * w.gradient(x).norm2() -
                nu * w.hessian(x).trace() - l + slack;
  });
  f.refresh_sup_bound();
  auto f_lookup = [f](Point x) { return f.value(x); };
  Nonlinearity F = Nonlinearity::stationary_semilinear(gamma, nu, f_lookup);
  return {std::move(u), std::move(F), std::move(rule)};
}

int cmd_verify(const Config& cfg, uint64_t seed, const std::string& outdir,
               std::ostream& log) {
  const LevyMeasure mu = build_measure(cfg);
  const int dim = mu.dim();
  const GridSpec grid = build_grid(cfg, dim);
  const double delta = cfg.get_double_in("verify.delta", 0.0, 1.0, true);
  const double gamma = cfg.get_positive("nonlinearity.gamma");
  const double nu = cfg.get_double_or("nonlinearity.nu", 0.0);
  const double slack = cfg.get_double_or("source.slack", 0.0);
  const TestFunction w = build_probe(cfg, "u", dim);

  ManufacturedProblem prob = manufacture(mu, w, grid, gamma, nu, delta,
                                         cfg.get_double_or("verify.quad_tol",
                                                           1e-6),
                                         slack);
  VerifyOptions opts;
  opts.tol = cfg.get_double_or("verify.tol", 0.0);
  opts.rule = &prob.rule;

  ProbeBankOptions bank_opts;
  bank_opts.node_stride = cfg.get_int_or("bank.stride", 1);
  std::vector<TestFunction> bank =
      build_probe_bank(prob.u, delta, bank_opts);
  bank.push_back(w.shifted(-0.1));  // the solution itself, shifted

  const std::string kind = cfg.get_string_or("verify.kind", "both");
  json out;
  out["config"] = config_json(cfg, seed);
  bool pass = true;
  if (kind == "subsolution" || kind == "both") {
    const VerificationReport rep =
        verify_subsolution(prob.u, prob.F, mu, delta, bank, opts);
    out["subsolution"] = report_json(rep);
    pass = pass && rep.pass;
  }
  if (kind == "supersolution" || kind == "both") {
    const VerificationReport rep =
        verify_supersolution(prob.u, prob.F, mu, delta, bank, opts);
    out["supersolution"] = report_json(rep);
    pass = pass && rep.pass;
  }
  out["pass"] = pass;
  std::ofstream js(out_path(outdir, cfg.get_string_or("output.json",
                                                      "verify.json")));
  js << out.dump(2) << "\n";
  log << "verification " << (pass ? "passed" : "FAILED") << "\n";
  return pass ? kExitOk : kExitVerificationFailed;
}

int cmd_stability(const Config& cfg, uint64_t seed, const std::string& outdir,
                  std::ostream& log) {
  const LevyMeasure mu = build_measure(cfg);
  const GridSpec grid = build_grid(cfg, mu.dim());
  const double delta = cfg.get_double_in("solver.delta", 0.0, 1.0, true);
  const double gamma = cfg.get_positive("problem.gamma");
  const std::vector<double> eps = cfg.get_doubles("stability.epsilons");

  ProblemSpec base;
  base.kind = ProblemKind::StationarySemilinear;
  base.measure = mu;
  base.gamma = gamma;
  base.hamiltonian = cfg.get_bool_or("problem.hamiltonian", true);
  base.source = build_field_expr(cfg, "problem.source", grid.box);
  base.slope_cap = cfg.get_double_or("problem.slope_cap", 4.0);

  std::vector<std::pair<double, GridFunction>> family;
  for (double e : eps) {
    ProblemSpec p = base;
    p.nu = e;
    family.emplace_back(
        e, solve_stationary(p, grid, delta,
                            cfg.get_double_or("solver.tol", 1e-8)));
  }

  Nonlinearity F0 = Nonlinearity::stationary_semilinear(
      gamma, 0.0,
      base.source ? base.source : std::function<double(Point)>());
  VerifyOptions opts;
  opts.tol = cfg.get_double_or("stability.tol", 0.0);
  const StabilityReport rep =
      stability_experiment(family, F0, mu, delta, {}, opts);

  json out;
  out["config"] = config_json(cfg, seed);
  out["epsilons"] = rep.relaxed.epsilons;
  out["radii"] = rep.relaxed.radii;
  out["level_sup_change"] = rep.relaxed.level_sup_change;
  out["declared_tol"] = rep.declared_tol;
  out["audit"] = report_json(rep.audit);
  std::ofstream js(out_path(outdir, cfg.get_string_or("output.json",
                                                      "stability.json")));
  js << out.dump(2) << "\n";
  log << "stability audit " << (rep.audit.pass ? "passed" : "FAILED") << "\n";
  return rep.audit.pass ? kExitOk : kExitVerificationFailed;
}

int cmd_solve(const Config& cfg, uint64_t seed, const std::string& outdir,
              std::ostream& log) {
  const LevyMeasure mu = build_measure(cfg);
  const GridSpec grid = build_grid(cfg, mu.dim());
  const double delta = cfg.get_double_in("solver.delta", 0.0, 1.0, true);
  const double tol = cfg.get_double_or("solver.tol", 1e-8);
  const std::string kind = cfg.get_string("problem.kind");

  ProblemSpec p;
  p.measure = mu;
  p.nu = cfg.get_double_or("problem.nu", 0.0);
  p.gamma = cfg.get_double_or("problem.gamma", 1.0);
  p.hamiltonian = cfg.get_bool_or("problem.hamiltonian", true);
  p.source = build_field_expr(cfg, "problem.source", grid.box);
  p.slope_cap = cfg.get_double_or("problem.slope_cap", 4.0);
  p.quad_tol = cfg.get_double_or("solver.quad_tol", 1e-4);

  if (kind == "parabolic") {
    p.kind = ProblemKind::ParabolicInterface;
    p.horizon = cfg.get_positive("problem.horizon");
    const TestFunction u0f = build_probe(cfg, "u0", grid.dim);
    const GridFunction u0 =
        GridFunction::sample(u0f, grid.box, grid.h, grid.extension);
    std::vector<double> snaps =
        cfg.has("snapshots.times") ? cfg.get_doubles("snapshots.times")
                                   : std::vector<double>{p.horizon};
    const Trajectory traj = solve_parabolic(p, u0, delta, snaps,
                                            cfg.get_double_or("solver.dt",
                                                              0.0));
    CsvWriter csv(out_path(outdir, cfg.get_string_or("output.csv",
                                                     "trajectory.csv")),
                  provenance(cfg, seed), {"t", "x1", "x2", "value"});
    for (size_t s = 0; s < traj.snapshots.size(); ++s)
      traj.snapshots[s].for_each_node(
          [&](const GridIndex&, const Point& x) {
            csv.row({traj.times[s], x[0], x[1],
                     traj.snapshots[s].value(x)});
          });
    log << "parabolic march: dt " << traj.certificate.dt << ", monotone "
        << (traj.certificate.monotone ? "yes" : "no") << "\n";
    return kExitOk;
  }
  if (kind == "stationary") {
    p.kind = ProblemKind::StationarySemilinear;
    SolveStats stats;
    const GridFunction u = solve_stationary(p, grid, delta, tol, &stats);
    CsvWriter csv(out_path(outdir, cfg.get_string_or("output.csv",
                                                     "solution.csv")),
                  provenance(cfg, seed), {"x1", "x2", "value"});
    u.for_each_node([&](const GridIndex&, const Point& x) {
      csv.row({x[0], x[1], u.value(x)});
    });
    CsvWriter rcsv(out_path(outdir, "residuals.csv"), provenance(cfg, seed),
                   {"record", "residual"});
    for (size_t k = 0; k < stats.residual_history.size(); ++k)
      rcsv.row({static_cast<double>(k), stats.residual_history[k]});
    log << "stationary solve: " << stats.iterations << " sweeps, rho "
        << stats.rho << "\n";
    return kExitOk;
  }
  if (kind == "bellman") {
    p.kind = ProblemKind::Bellman;
    p.hamiltonian = false;
    const int n_controls = cfg.get_int("controls.count");
    for (int c = 1; c <= n_controls; ++c) {
      const std::string pre = "control." + std::to_string(c);
      BellmanControl ctl;
      ctl.sigma = cfg.get_double_or(pre + ".sigma", 0.0);
      const double b = cfg.get_double_or(pre + ".drift", 0.0);
      if (b != 0.0)
        ctl.drift = [b, dim = grid.dim](Point) {
          Point v = Point::zero(dim);
          v[0] = b;
          return v;
        };
      ctl.source = build_field_expr(cfg, pre + ".source", grid.box);
      p.controls.push_back(ctl);
    }
    const BellmanResult res = solve_bellman(p, grid, delta, tol);
    CsvWriter csv(out_path(outdir, cfg.get_string_or("output.csv",
                                                     "value.csv")),
                  provenance(cfg, seed), {"x1", "x2", "value", "policy"});
    size_t flat = 0;
    res.value.for_each_node([&](const GridIndex&, const Point& x) {
      csv.row({x[0], x[1], res.value.value(x),
               static_cast<double>(res.policy[flat++])});
    });
    log << "bellman solve: " << res.policy_sweeps << " sweeps, value "
        << (res.values_nonincreasing ? "monotone" : "NOT monotone") << "\n";
    return kExitOk;
  }
  throw ConfigError(
      "config error: field 'problem.kind': expected parabolic, stationary or "
      "bellman");
}

int cmd_compare(const Config& cfg, uint64_t seed, const std::string& outdir,
                std::ostream& log) {
  const LevyMeasure mu = build_measure(cfg);
  const GridSpec grid = build_grid(cfg, mu.dim());
  const double delta = cfg.get_double_in("solver.delta", 0.0, 1.0, true);
  const size_t count = static_cast<size_t>(cfg.get_int_or("compare.pairs", 20));
  const size_t steps = static_cast<size_t>(cfg.get_int_or("compare.steps", 50));
  const std::string mode = cfg.get_string_or("compare.mode", "both");

  ProblemSpec p;
  p.measure = mu;
  p.nu = cfg.get_double_or("problem.nu", 0.0);
  p.gamma = cfg.get_double_or("problem.gamma", 1.0);
  p.hamiltonian = cfg.get_bool_or("problem.hamiltonian", true);
  p.slope_cap = cfg.get_double_or("problem.slope_cap", 4.0);
  p.quad_tol = cfg.get_double_or("solver.quad_tol", 1e-4);
  p.horizon = 1.0;

  json out;
  out["config"] = config_json(cfg, seed);
  bool pass = true;

  if (mode == "parabolic" || mode == "both") {
    p.kind = ProblemKind::ParabolicInterface;
    const auto pairs = make_random_ordered_pairs(
        seed, count, grid, cfg.get_double_or("compare.amplitude", 0.5));
    const ComparisonReport rep = comparison_parabolic(p, delta, pairs, steps);
    out["parabolic"] = {{"pairs", rep.pairs},
                        {"steps_checked", rep.steps_checked},
                        {"violations", rep.violations},
                        {"worst_gap", rep.worst_gap}};
    pass = pass && rep.pass();
    log << "parabolic comparison: " << rep.violations << " violations over "
        << rep.pairs << " pairs\n";
  }
  if (mode == "stationary" || mode == "both") {
    p.kind = ProblemKind::StationarySemilinear;
    std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
    std::uniform_real_distribution<double> unif(0.1, 1.0);
    std::vector<std::pair<std::function<double(Point)>,
                          std::function<double(Point)>>> source_pairs;
    for (size_t c = 0; c < count; ++c) {
      const double a = unif(rng), k = 1.0 + unif(rng), lift = unif(rng);
      auto f = [a, k](Point x) { return a * std::sin(k * (x[0] + x[1])); };
      auto g = [a, k, lift](Point x) {
        return a * std::sin(k * (x[0] + x[1])) + lift;
      };
      source_pairs.emplace_back(std::function<double(Point)>(f),
                                std::function<double(Point)>(g));
    }
    const ComparisonReport rep = comparison_stationary(
        p, grid, delta, cfg.get_double_or("solver.tol", 1e-8), source_pairs);
    out["stationary"] = {{"pairs", rep.pairs},
                         {"steps_checked", rep.steps_checked},
                         {"violations", rep.violations},
                         {"worst_gap", rep.worst_gap}};
    pass = pass && rep.pass();
    log << "stationary comparison: " << rep.violations << " violations over "
        << rep.pairs << " pairs\n";
  }
  out["pass"] = pass;
  std::ofstream js(out_path(outdir, cfg.get_string_or("output.json",
                                                      "compare.json")));
  js << out.dump(2) << "\n";
  return pass ? kExitOk : kExitVerificationFailed;
}

}  // namespace

int run_subcommand(const std::string& subcommand, const Config& cfg,
                   uint64_t seed, const std::string& outdir,
                   std::ostream& log) {
  if (subcommand == "quadrature-report")
    return cmd_quadrature_report(cfg, seed, outdir, log);
  if (subcommand == "eval-op") return cmd_eval_op(cfg, seed, outdir, log);
  if (subcommand == "verify") return cmd_verify(cfg, seed, outdir, log);
  if (subcommand == "stability") return cmd_stability(cfg, seed, outdir, log);
  if (subcommand == "solve") return cmd_solve(cfg, seed, outdir, log);
  if (subcommand == "compare") return cmd_compare(cfg, seed, outdir, log);
  throw ConfigError("config error: unknown subcommand '" + subcommand + "'");
}

int run_cli(const std::string& subcommand, const std::string& config_path,
            uint64_t seed, const std::string& outdir, std::ostream& log) {
  try {
    const Config cfg = Config::parse_file(config_path);
    return run_subcommand(subcommand, cfg, seed, outdir, log);
  } catch (const ConfigError& e) {
    log << e.what() << "\n";
    return kExitConfigError;
  } catch (const NonConvergenceError& e) {
    log << "non-convergence: " << e.what() << "\n";
    return kExitNonConvergence;
  } catch (const CFLViolationError& e) {
    log << "non-convergence: " << e.what() << "\n";
    return kExitNonConvergence;
  } catch (const std::exception& e) {
    log << "config error: " << e.what() << "\n";
    return kExitConfigError;
  }
}

}  // namespace levyscope
