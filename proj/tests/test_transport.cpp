#include <doctest.h>

#include <cmath>

#include "gerbe/fixtures.hpp"
#include "gerbe/probes.hpp"
#include "gerbe/transport.hpp"
#include "oracles.hpp"

using namespace gerbe;

namespace {

Path spiral() {
  return {[](double x) { return Vec3(0.5 * std::cos(3 * x), 0.5 * std::sin(3 * x), 0.2 * x); },
          [](double x) { return Vec3(-1.5 * std::sin(3 * x), 1.5 * std::cos(3 * x), 0.2); }};
}

Mat from_rows(std::initializer_list<std::initializer_list<double>> rows) {
  Mat m(rows.size(), rows.begin()->size());
  int i = 0;
  for (const auto& r : rows) {
    int j = 0;
    for (double x : r) m(i, j++) = x;
    ++i;
  }
  return m;
}

TransportConfig fine() {
  TransportConfig cfg;
  cfg.ode_steps_per_unit = 512;
  return cfg;
}

}  // namespace

TEST_CASE("path holonomy matches RK4 and the frozen reference") {
  GerbeCocycle t = make_fixture("heisenberg_torus4");
  Path p = Path::straight(Vec3(0.1, 0.12, 0), Vec3(0.3, 0.2, 0));
  // RK4 with 4000 steps.
  Mat ref_t = from_rows({{1, 0.025417343275513784, 0.03085777347973008}, {0, 1, 0.01376854053746677}, {0, 0, 1}});
  CHECK((oracle::rk4_hol_path(t, 0, p, 4000) - ref_t).norm() < 1e-14);
  CHECK((hol_path_matrix(t, 0, p, fine()) - ref_t).norm() < 1e-12);

  GerbeCocycle s = make_fixture("su2_plane");
  Mat ref_s = from_rows({{0.95765896105981518, 0.23307472929603709, 0.1690132683117358},
                         {-0.18066963704168534, 0.94357897403249591, -0.27751973265879482},
                         {-0.22416020287522281, 0.23523369301050806, 0.94573638669535076}});
  CHECK((oracle::rk4_hol_path(s, 0, spiral(), 4000) - ref_s).norm() < 1e-12);
  CHECK((hol_path_matrix(s, 0, spiral(), fine()) - ref_s).norm() < 1e-12);
}

TEST_CASE("path holonomy converges at fourth order") {
  GerbeCocycle s = make_fixture("su2_plane");
  Mat ref = oracle::rk4_hol_path(s, 0, spiral(), 4000);
  double prev = 0.0;
  for (int n : {16, 32, 64}) {
    TransportConfig cfg;
    cfg.ode_steps_per_unit = n;
    double err = (hol_path_matrix(s, 0, spiral(), cfg) - ref).norm();
    if (prev > 0.0) CHECK(std::log2(prev / err) >= 3.8);
    prev = err;
  }
}

TEST_CASE("holonomy composes along concatenated paths and inverts on reversal") {
  GerbeCocycle s = make_fixture("su2_plane");
  Path p = spiral();
  TransportConfig cfg = fine();
  Mat whole = hol_path_matrix(s, 0, p, cfg);
  Mat first = hol_path_matrix(s, 0, p.segment(0.0, 0.4), cfg);
  Mat second = hol_path_matrix(s, 0, p.segment(0.4, 1.0), cfg);
  CHECK((compose_paths(first, second, kHolOrder) - whole).norm() < 1e-12);
  CHECK((hol_path_matrix(s, 0, p.reversed(), cfg) * whole - Mat::Identity(3, 3)).norm() < 1e-12);
  CHECK((hol_path_matrix(s, 0, Path::constant(Vec3(0.1, 0.2, 0.3)), cfg) - Mat::Identity(3, 3)).norm() == 0.0);
}

TEST_CASE("holonomy is invariant under reparametrization") {
  GerbeCocycle s = make_fixture("su2_plane");
  Path p = spiral();
  Path q{[p](double x) { return p.point(x * x); }, [p](double x) { return 2 * x * p.velocity(x * x); }};
  TransportConfig cfg = fine();
  CHECK((hol_path_matrix(s, 0, p, cfg) - hol_path_matrix(s, 0, q, cfg)).norm() < 1e-10);
}

TEST_CASE("path transport refuses to leave its chart") {
  GerbeCocycle c = make_fixture("abelian_sphere(1)");
  Path p = Path::straight(Vec3(1, 0, 0), Vec3(-1, 0.1, 0));
  CHECK_THROWS_AS(hol_path(c, 0, p), ContainmentError);
}

TEST_CASE("abelian surface holonomy is the exponential of the flux") {
  GerbeCocycle a = make_fixture("abelian_plane");
  SquareMap sq = flat_disk().at(0.0);
  cd flux = oracle::abelian_flux(a, 0, sq, 40);
  // Frozen from the tensor Gauss rule on 40 x 40 panels.
  CHECK(std::abs(flux - cd(0.0, -0.050680948747942572)) < 1e-14);
  CHECK(std::abs(hol_square(a, 0, sq, fine()).value.matrix(0, 0) - std::exp(flux)) < 1e-10);
}

TEST_CASE("abelian edge transport is the exponential of the edge integral") {
  GerbeCocycle a = make_fixture("abelian_sphere(1)");
  Path e = Path::straight(Vec3(0.8, 0.5, 0.6), Vec3(0.6, 0.55, 0.75));
  cd integral = oracle::abelian_edge_integral(a, 0, 4, e, 200);
  CHECK(std::abs(integral - cd(0.0, 0.13112808236210002)) < 1e-13);
  CHECK(std::abs(hol_edge(a, 0, 4, e, fine()).value.matrix(0, 0) - std::exp(integral)) < 1e-11);
}

TEST_CASE("face target relation holds and improves at fourth order") {
  for (const char* name : {"heisenberg_torus4", "su2_plane", "heisenberg_sphere"}) {
    GerbeCocycle c = make_fixture(name);
    FixtureProbes p = fixture_probes(c, name);
    CAPTURE(name);
    double prev = 0.0;
    for (int n : {16, 32, 64}) {
      TransportConfig cfg;
      cfg.ode_steps_per_unit = n;
      LocalHolonomy h = hol_square(c, p.cube_i, p.cube_square, cfg);
      CHECK(h.target_residual <= 1e-6);
      CHECK(c.cm->group_residual(Side::H, h.value.matrix) < 1e-12);
      if (prev > 1e-13) CHECK(std::log2(prev / h.target_residual) >= 3.5);
      prev = h.target_residual;
    }
  }
}

TEST_CASE("edge and vertex target relations") {
  for (const char* name : {"heisenberg_torus4", "heisenberg_sphere"}) {
    GerbeCocycle c = make_fixture(name);
    FixtureProbes p = fixture_probes(c, name);
    CAPTURE(name);
    LocalHolonomy e = hol_edge(c, p.cube_i, p.cube_j, p.cube_square.row(0.0));
    CHECK(e.target_residual <= 1e-6);
    const auto& q = p.vertex_charts;
    LocalHolonomy v = hol_vertex(c, q[0], q[1], q[2], q[3], p.vertex_path.point(0.0));
    CHECK(v.target_residual <= 1e-10);
  }
}

TEST_CASE("edge and vertex cubes close with the corrected conjugators") {
  for (const auto& name : fixture_names()) {
    GerbeCocycle c = make_fixture(name);
    FixtureProbes p = fixture_probes(c, name);
    CAPTURE(name);
    CHECK(check_edge_cube(c, p.cube_i, p.cube_j, p.cube_square).residual <= 1e-6);
    const auto& q = p.vertex_charts;
    CHECK(check_vertex_cube(c, q[0], q[1], q[2], q[3], p.vertex_path).residual <= 1e-6);
  }
}

TEST_CASE("printed cube conjugators leave a visible residual on the torus") {
  GerbeCocycle c = make_fixture("heisenberg_torus4");
  FixtureProbes p = fixture_probes(c, "heisenberg_torus4");
  CubeResult e = check_edge_cube(c, p.cube_i, p.cube_j, p.cube_square);
  CHECK(e.as_printed_residual > 100 * e.residual);
}

TEST_CASE("transport config validation") {
  TransportConfig cfg;
  CHECK_NOTHROW(cfg.validate());
  cfg.ode_steps_per_unit = 8;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg = TransportConfig{};
  cfg.tol_target = 0.0;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
}
