#include "gerbe/suite.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <limits>

#include "gerbe/fixtures.hpp"
#include "gerbe/probes.hpp"

namespace gerbe {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

class Recorder {
 public:
  explicit Recorder(double scale) : scale_(scale) {}

  void upper(const std::string& id, const std::string& kind, double value, double gate, std::string note = {}) {
    add(id, kind, value, kind == "integration" ? gate * scale_ : gate, false, std::move(note));
  }
  // Unscaled upper bound, for order estimates.
  void upper_fixed(const std::string& id, const std::string& kind, double value, double gate) {
    add(id, kind, value, gate, false, {});
  }
  void lower(const std::string& id, const std::string& kind, double value, double gate, std::string note = {}) {
    add(id, kind, value, gate, true, std::move(note));
  }
  // Passes without a value; used when a check does not apply.
  void skip(const std::string& id, const std::string& kind, std::string note) {
    checks_.push_back({id, kind, kNaN, kNaN, false, true, std::move(note)});
  }
  void error(const std::string& id, const std::string& kind, const std::string& what) {
    checks_.push_back({id, kind, kNaN, kNaN, false, false, "error: " + what});
  }
  // Runs body; an exception becomes a failed check under fallback_id.
  void guarded(const std::string& fallback_id, const std::string& kind, const std::function<void()>& body) {
    try {
      body();
    } catch (const std::exception& e) {
      error(fallback_id, kind, e.what());
    }
  }
  std::vector<CheckResult> take() { return std::move(checks_); }

 private:
  void add(const std::string& id, const std::string& kind, double value, double gate, bool at_least,
           std::string note) {
    bool pass = at_least ? value >= gate : value <= gate;
    checks_.push_back({id, kind, value, gate, at_least, pass, std::move(note)});
  }
  double scale_;
  std::vector<CheckResult> checks_;
};

bool is_sphere(const std::string& base) { return base == "abelian_sphere" || base == "heisenberg_sphere"; }

void fixture_checks(Recorder& rec, const std::string& name, const SuiteOptions& opt) {
  const TransportConfig& cfg = opt.cfg;
  const GerbeCocycle c = make_fixture(name);
  const CrossedModule& cm = *c.cm;
  const std::string base = parse_name(name).name;
  const bool abelian = cm.name() == "bs1";
  const FixtureProbes probes = fixture_probes(c, name);
  const SquareFamily fam = make_surface(probes.surface);
  const SquareMap sigma = fam.at(0.0);
  const std::string P = name + "/";
  const double floor = 1e-10;  // FD residuals below this are roundoff

  rec.guarded(P + "validate", "algebraic", [&] {
    ValidationReport v = validate_gerbe(c, opt.n_points, opt.seed);
    double worst = 0.0;
    for (const auto& [k, r] : v.relations)
      if (!r.informational && !r.vacuous) worst = std::max(worst, r.max_residual / r.tolerance);
    std::string note;
    for (const auto& f : v.failures()) note += (note.empty() ? "failed: " : ", ") + f;
    rec.upper(P + "validate", "algebraic", worst, 1.0, note.empty() ? "max residual / tolerance" : note);
  });

  rec.guarded(P + "curvature", "algebraic", [&] {
    CurvatureReport r = check_curvature(c, opt.n_points, opt.seed);
    rec.upper(P + "curvature.t_of_H", "algebraic", r.t_of_H, 1e-8);
    rec.upper(P + "curvature.equivariance", "algebraic", r.equivariance, 1e-7);
    if (r.bianchi < floor) {
      rec.skip(P + "curvature.bianchi_halving", "algebraic", "residual at roundoff level");
    } else {
      rec.lower(P + "curvature.bianchi_halving", "algebraic", r.bianchi / r.bianchi_half, 2.0,
                "ratio of covariant-derivative residuals at h and h/2");
    }
  });

  GridAssignment grid;
  rec.guarded(P + "holonomy", "integration", [&] {
    grid = find_grid(sigma, c.cover);
    GlobalHolonomy h = assemble_global_hol(c, sigma, grid, cfg);
    auto mx = [](const std::vector<double>& v) { return v.empty() ? 0.0 : *std::max_element(v.begin(), v.end()); };
    rec.upper(P + "target.face", "integration", mx(h.locals.face_residuals), 1e-6);
    rec.upper(P + "target.edge", "integration", mx(h.locals.edge_residuals), 1e-6);
    rec.upper(P + "target.vertex", "algebraic", mx(h.locals.vertex_residuals), 1e-10);
    rec.upper(P + "target.global", "integration", h.target_residual, 1e-6, grid.describe());
    rec.upper(P + "overline_crosscheck", "algebraic", h.overline_residual, 1e-9);
  });

  rec.guarded(P + "subdivision", "integration", [&] {
    const SquareMap& sq = probes.transform_square;
    GridAssignment g = probes.transform_a;
    Mat h1 = assemble_global_hol(c, sq, g, cfg).value;
    Mat h2 = assemble_global_hol(c, sq, refine(g, 2, 2), cfg).value;
    Mat h4 = assemble_global_hol(c, sq, refine(g, 4, 4), cfg).value;
    const double d1 = (h1 - h2).norm(), d2 = (h2 - h4).norm();
    rec.upper(P + "subdivision", "integration", d1, 1e-6, g.describe() + " against its 2x2 refinement");
    if (d2 < 1e-13 || d1 < 1e-13) {
      rec.skip(P + "subdivision.order", "integration", "differences at roundoff level");
    } else {
      rec.lower(P + "subdivision.order", "integration", std::log2(d1 / d2), 2.0);
    }
  });

  rec.guarded(P + "transformation", "integration", [&] {
    TransformationResult t = check_transformation(c, probes.transform_square, probes.transform_a, probes.transform_b, cfg);
    rec.upper(P + "transformation", "integration", t.residual, 1e-6,
              probes.transform_a.describe() + " vs " + probes.transform_b.describe());
    if (is_sphere(base)) rec.upper(P + "transformation.sphere", "integration", t.conjugation_residual, 1e-6);
    if (abelian) rec.upper(P + "transformation.abelian_plain", "integration", t.plain_residual, 1e-9);
  });

  rec.guarded(P + "cube", "integration", [&] {
    CubeResult e = check_edge_cube(c, probes.cube_i, probes.cube_j, probes.cube_square, cfg);
    rec.upper(P + "cube.edge", "integration", e.residual, 1e-6);
    const auto& q = probes.vertex_charts;
    CubeResult v = check_vertex_cube(c, q[0], q[1], q[2], q[3], probes.vertex_path, cfg);
    rec.upper(P + "cube.vertex", "integration", v.residual, 1e-6);
  });

  rec.guarded(P + "local_lemma", "integration", [&] {
    double r = check_local_lemma(c, probes.local_chart, probes.local_family, cfg, opt.fd);
    rec.upper(P + "local_lemma", "integration", r, abelian ? 1e-6 : 1e-4);
  });

  rec.guarded(P + "theorem", "integration", [&] {
    DerivativeCheck d = check_derivative(c, fam, grid, cfg, opt.fd);
    const double scale = std::max(d.fd.derivative.norm(), d.formula.total.norm());
    // Below the integration noise floor the relative error carries no signal.
    if (scale <= cfg.tol_target) {
      rec.upper(P + "theorem.abs_err", "integration", (d.fd.derivative - d.formula.total).norm(), 1e-6,
                "degenerate family: derivative below the integration noise floor");
      rec.skip(P + "theorem.order", "integration", "degenerate family");
    } else {
      rec.upper(P + "theorem.rel_err", "integration", d.rel_err, 1e-3);
      rec.lower(P + "theorem.order", "integration", d.fd.central_order, 1.8);
      rec.upper_fixed(P + "theorem.order_max", "integration", d.fd.central_order, 2.2);
      if (opt.fd.richardson && opt.fd.steps.size() >= 4) {
        if (d.rel_err < 1e-8)
          rec.skip(P + "theorem.richardson_order", "integration", "extrapolated values agree to roundoff");
        else
          rec.lower(P + "theorem.richardson_order", "integration", d.fd.richardson_order, 3.5);
      }
    }
    rec.upper(P + "theorem.loop_residual", "integration", d.formula.loop_residual, 1e-6);
    Mat other = bulk_integral_H(c, fam, grid, cfg, InCellPath::RightThenDown);
    rec.upper(P + "theorem.bulk_path_independence", "integration", (other - d.formula.bulk_term).norm(), 1e-7);
    if (abelian) {
      rec.upper(P + "abelian.corner_zero", "algebraic", d.formula.corner_term.norm(), 0.0);
      rec.upper(P + "abelian.boundary_a_zero", "algebraic", d.formula.boundary_a.norm(), 0.0);
    }
  });

  if (is_sphere(base)) {
    rec.guarded(P + "sphere", "integration", [&] {
      SphereDerivative s = d_hol_sphere(c, fam, grid, cfg, opt.fd, 20, opt.seed);
      rec.upper(P + "sphere.boundary_cancellation", "integration", s.boundary_cancellation, 1e-5);
      rec.upper(P + "sphere.center", "integration", s.center_residual, 1e-6);
      HTransformReport h = check_H_transform_and_center(c, fam, probes.transform_a, probes.transform_b, cfg,
                                                        opt.n_points, opt.seed);
      rec.upper(P + "sphere.H_transform", "integration", h.transform_residual, 1e-6);
      if (base == "abelian_sphere") {
        // Closed form on the radius family: Hol(rho) = exp(-2 pi i L rho^3).
        const auto args = parse_name(name).args;
        const double L = args.empty() ? 1.0 : std::stod(args[0]);
        const double rho = 1.0;
        std::complex<double> hol = std::exp(std::complex<double>(0.0, -2.0 * kPi * L * rho * rho * rho));
        std::complex<double> dhol = std::complex<double>(0.0, -6.0 * kPi * L * rho * rho) * hol;
        rec.upper(P + "sphere.analytic_radius", "integration",
                  std::abs(s.check.formula.total(0, 0) - dhol) / std::max(std::abs(dhol), 1e-8), 1e-6);
      }
    });
  }
}

}  // namespace

bool SuiteReport::pass() const { return failures() == 0; }

int SuiteReport::failures() const {
  return static_cast<int>(std::count_if(checks.begin(), checks.end(), [](const CheckResult& c) { return !c.pass; }));
}

std::vector<std::string> default_suite_fixtures() { return fixture_names(); }

SuiteReport run_suite(const SuiteOptions& opt) {
  if (opt.fixtures.empty()) throw ConfigError("suite: empty fixture list");
  opt.cfg.validate();
  opt.fd.validate();
  for (const auto& f : opt.fixtures) make_fixture(f);  // unknown names fail before any work

  Recorder rec(opt.cfg.tol_target / 1e-6);
  std::vector<std::string> instances;
  for (const auto& f : opt.fixtures) instances.push_back(make_fixture(f).cm->name());
  std::sort(instances.begin(), instances.end());
  instances.erase(std::unique(instances.begin(), instances.end()), instances.end());
  for (const auto& name : instances) {
    const std::string P = name + "/";
    rec.guarded(P + "axioms", "algebraic", [&] {
      auto cm = make_crossed_module(name);
      AxiomReport a = check_axioms(*cm, opt.axiom_samples, opt.seed);
      for (const auto& [k, v] : a.residuals) rec.upper(P + "axioms." + k, "algebraic", v, a.tolerance);
      AxiomReport bad = check_axioms(*make_corrupted_target(cm), 100, opt.seed);
      double worst = 0.0;
      for (const auto& [k, v] : bad.residuals) worst = std::max(worst, v);
      rec.lower(P + "axioms.corrupted_t_detected", "algebraic", worst, 1e-2, "negative control");
      rec.upper(P + "interchange", "algebraic", sample_interchange(*cm, opt.interchange_samples, opt.seed), 1e-9);
    });
  }
  for (const auto& f : opt.fixtures) fixture_checks(rec, f, opt);

  SuiteReport out;
  out.checks = rec.take();
  std::stable_sort(out.checks.begin(), out.checks.end(),
                   [](const CheckResult& a, const CheckResult& b) { return a.id < b.id; });
  return out;
}

Json report_json(const SuiteReport& r) {
  Json j;
  j["pass"] = r.pass();
  j["n_checks"] = r.checks.size();
  j["n_failures"] = r.failures();
  Json arr = Json::array();
  for (const auto& c : r.checks) {
    Json e;
    e["id"] = c.id;
    e["kind"] = c.kind;
    e["value"] = c.value;
    e["gate"] = c.gate;
    e["comparison"] = c.at_least ? ">=" : "<=";
    e["pass"] = c.pass;
    if (!c.note.empty()) e["note"] = c.note;
    arr.push_back(e);
  }
  j["checks"] = arr;
  return j;
}

}  // namespace gerbe
