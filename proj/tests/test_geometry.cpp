#include <doctest.h>

#include "gerbe/fixtures.hpp"
#include "gerbe/forms.hpp"
#include "gerbe/gerbe.hpp"
#include "oracles.hpp"

using namespace gerbe;

TEST_CASE("torus points wrap into the unit cell") {
  ManifoldModel t = torus2();
  Vec3 q = t.canonical(Vec3(1.25, -0.5, 0.3));
  CHECK(q.isApprox(Vec3(0.25, 0.5, 0.0)));
  CHECK(euclidean_plane().canonical(Vec3(1.25, -0.5, 0.3)) == Vec3(1.25, -0.5, 0.3));
}

TEST_CASE("cover membership respects the margin") {
  auto cones = sphere_cover();
  REQUIRE(cones.size() == 6);
  CHECK(cones[0].membership(Vec3(1, 0, 0)) == Membership::InsideWithMargin);
  CHECK(cones[1].membership(Vec3(1, 0, 0)) == Membership::Outside);
  // Every point of a sphere lies in some cone with margin.
  Rng rng(9);
  for (int k = 0; k < 200; ++k) {
    Vec3 p = rng.vec().normalized() * 2.0;
    bool covered = false;
    for (const auto& u : cones) covered |= u.contains_with_margin(p);
    CHECK(covered);
  }
  auto squares = torus_cover();
  REQUIRE(squares.size() == 4);
  for (int k = 0; k < 200; ++k) {
    Vec3 p(rng.uniform(0, 1), rng.uniform(0, 1), 0);
    bool covered = false;
    for (const auto& u : squares) covered |= u.contains_with_margin(p);
    CHECK(covered);
  }
}

TEST_CASE("analytic exterior derivative matches central differences") {
  auto cm = make_su2_ad();
  Rng rng(21);
  JetOneForm beta = JetOneForm::random(rng, cm->basis(Side::H), 3, 3, 0.4, 1.5, false);
  FormField w = one_form(beta);
  FormField F = curvature_form(beta);
  for (int k = 0; k < 20; ++k) {
    Vec3 p = rng.vec(), u = rng.vec(), v = rng.vec(), x = rng.vec();
    Vec3 t2[2] = {u, v}, t3[3] = {u, v, x};
    CHECK((exterior_derivative(w, p, t2, 1e-4) - exterior_derivative(w, p, t2, 1e-4, true)).norm() < 1e-7);
    CHECK((exterior_derivative(F, p, t3, 1e-4) - exterior_derivative(F, p, t3, 1e-4, true)).norm() < 1e-7);
  }
}

TEST_CASE("d of d vanishes") {
  auto cm = make_heisenberg();
  Rng rng(22);
  JetOneForm beta = JetOneForm::random(rng, cm->basis(Side::H), 3, 3, 0.5, 1.0, false);
  FormField w = one_form(beta);
  FormField dw;
  dw.degree = 2;
  dw.eval = [w](const Vec3& p, const Vec3* t) { return exterior_derivative(w, p, t, 1e-4); };
  for (int k = 0; k < 10; ++k) {
    Vec3 p = rng.vec(), t3[3] = {rng.vec(), rng.vec(), rng.vec()};
    // Only the O(h^2) stencil error remains.
    double r1 = exterior_derivative(dw, p, t3, 1e-3, true).norm();
    double r2 = exterior_derivative(dw, p, t3, 5e-4, true).norm();
    CHECK(r1 < 1e-6);
    CHECK(r2 < r1 / 3.0);
  }
}

TEST_CASE("exterior derivative refuses stencils outside the domain") {
  FormField w = zero_form(1, Side::H, 1);
  w.domain = [](const Vec3& p) { return 0.5 - p.norm(); };
  Vec3 p(0.49999, 0, 0), t2[2] = {Vec3(1, 0, 0), Vec3(0, 1, 0)};
  CHECK_THROWS_AS(exterior_derivative(w, p, t2, 1e-3, true), ContainmentError);
}

TEST_CASE("curvature_R matches a stencil of the connection") {
  for (const char* name : {"heisenberg_torus4", "su2_plane", "heisenberg_sphere"}) {
    GerbeCocycle c = make_fixture(name);
    Rng rng(23);
    int tested = 0;
    for (int k = 0; k < 200 && tested < 10; ++k) {
      Vec3 p = c.manifold.sample_point(rng);
      auto charts = c.charts_containing(p, 0.05);
      if (charts.empty()) continue;
      int i = charts[0];
      Vec3 u = c.manifold.sample_tangent(rng), v = c.manifold.sample_tangent(rng);
      CAPTURE(name);
      CHECK((curvature_R(c, i, p, u, v) - oracle::curvature_fd(c, i, p, u, v)).norm() < 1e-8);
      ++tested;
    }
    CHECK(tested == 10);
  }
}

TEST_CASE("every bundled fixture validates") {
  for (const auto& name : fixture_names()) {
    GerbeCocycle c = make_fixture(name);
    ValidationReport r = validate_gerbe(c, 60, 3);
    CAPTURE(name);
    CHECK(r.pass());
    CHECK(r.failures().empty());
    for (const auto& [k, rel] : r.relations) {
      if (rel.informational || rel.vacuous) continue;
      CAPTURE(k);
      CHECK(rel.max_residual <= rel.tolerance);
    }
  }
}

TEST_CASE("each corruption fails exactly its relation") {
  struct Case {
    const char* fixture;
    const char* kind;
    const char* relation;
  };
  for (Case k : {Case{"abelian_sphere(1)", "f", "f_quadruple"}, Case{"heisenberg_torus4", "g", "g_triple"},
                 Case{"abelian_sphere(1)", "a", "a_triple"}, Case{"abelian_sphere(1)", "B", "B_transition"}}) {
    GerbeCocycle c = corrupt(make_fixture(k.fixture), k.kind);
    ValidationReport r = validate_gerbe(c, 100, 1);
    CAPTURE(k.kind);
    REQUIRE(r.failures().size() == 1);
    CHECK(r.failures()[0] == k.relation);
  }
}

TEST_CASE("fixture registry") {
  CHECK(fixture_names().size() == 7);
  CHECK_THROWS_AS(make_fixture("klein_bottle"), ConfigError);
  CHECK(make_fixture("trivial(su2_ad)").cm->name() == "su2_ad");
  CHECK(make_fixture("abelian_sphere(3)").cm->name() == "bs1");
  CHECK_THROWS_AS(corrupt(make_fixture("su2_plane"), "g"), ConfigError);
  CHECK_THROWS_AS(corrupt(make_fixture("abelian_sphere(1)"), "x"), ConfigError);
}

TEST_CASE("3-curvature is central, equivariant and covariantly closed") {
  for (const auto& name : fixture_names()) {
    GerbeCocycle c = make_fixture(name);
    CurvatureReport r = check_curvature(c, 40, 5);
    CAPTURE(name);
    CHECK(r.n_points == 40);
    CHECK(r.t_of_H <= 1e-8);
    CHECK(r.equivariance <= 1e-7);
    // A 4-form on a manifold of dimension at most 3 is zero, so only FD error remains.
    CHECK(r.bianchi <= 1e-6);
    if (r.bianchi > 1e-10) CHECK(r.bianchi / r.bianchi_half >= 2.0);
  }
}

TEST_CASE("abelian plane has non-constant H") {
  GerbeCocycle c = make_fixture("abelian_plane");
  Vec3 e1(1, 0, 0), e2(0, 1, 0), e3(0, 0, 1);
  Mat h0 = three_curvature_H(c, 0, Vec3(0.1, 0.2, 0.0), e1, e2, e3);
  Mat h1 = three_curvature_H(c, 0, Vec3(-0.3, 0.4, 0.2), e1, e2, e3);
  CHECK((h0 - h1).norm() > 1e-3);
}

TEST_CASE("single-chart construction rejects a non-central shift") {
  auto cm = make_heisenberg();
  Rng rng(1);
  JetOneForm beta = JetOneForm::random(rng, cm->basis(Side::H), 3, 2, 0.3, 1.0, false);
  FormField z = zero_form(2, Side::H, 3);
  z.eval = [cm](const Vec3&, const Vec3*) { return Mat(cm->basis(Side::H)[0]); };
  CHECK_THROWS_AS(make_single_chart_gerbe(cm, euclidean_plane(), plane_cover(), beta, z), ConstructionError);
}
