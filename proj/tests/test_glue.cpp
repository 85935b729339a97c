#include <doctest.h>

#include <cmath>

#include "gerbe/fixtures.hpp"
#include "gerbe/glue.hpp"
#include "gerbe/probes.hpp"
#include "oracles.hpp"

using namespace gerbe;

namespace {

constexpr double kPi = 3.14159265358979323846;

struct Block {
  DecoratedSquare tl, tr, bl, br;
};

// A 2x2 block of valid squares with matching shared edges.
Block random_block(const CrossedModule& cm, Rng& rng) {
  auto H = [&] { return rng.group(cm, Side::H); };
  auto G = [&] { return rng.group(cm, Side::G); };
  Block b;
  b.tl = make_valid_square(cm, H(), G(), G(), G());
  b.tr = make_valid_square(cm, H(), G(), b.tl.right, G());
  b.bl = make_valid_square(cm, H(), b.tl.bottom, G(), G());
  b.br = make_valid_square(cm, H(), b.tr.bottom, b.bl.right, G());
  return b;
}

}  // namespace

TEST_CASE("valid squares satisfy their target") {
  for (const auto& n : crossed_module_names()) {
    auto cm = make_crossed_module(n);
    Rng rng(1);
    for (int k = 0; k < 20; ++k) {
      DecoratedSquare s = make_valid_square(*cm, rng.group(*cm, Side::H), rng.group(*cm, Side::G),
                                            rng.group(*cm, Side::G), rng.group(*cm, Side::G));
      CHECK(target_residual(*cm, s) < 1e-12);
    }
  }
}

TEST_CASE("compositions of valid squares are valid") {
  for (const auto& n : crossed_module_names()) {
    auto cm = make_crossed_module(n);
    Rng rng(2);
    for (int k = 0; k < 20; ++k) {
      Block b = random_block(*cm, rng);
      DecoratedSquare h = compose_h(*cm, b.tl, b.tr);
      DecoratedSquare v = compose_v(*cm, b.tl, b.bl);
      CHECK(target_residual(*cm, h) < 1e-12);
      CHECK(target_residual(*cm, v) < 1e-12);
      CHECK((h.left - b.tl.left).norm() == 0.0);
      CHECK((h.right - b.tr.right).norm() == 0.0);
      CHECK((v.top - b.tl.top).norm() == 0.0);
      CHECK((v.bottom - b.bl.bottom).norm() == 0.0);
    }
  }
}

TEST_CASE("interchange law") {
  for (const auto& n : crossed_module_names()) {
    auto cm = make_crossed_module(n);
    Rng rng(3);
    for (int k = 0; k < 20; ++k) {
      Block b = random_block(*cm, rng);
      CHECK(check_interchange(*cm, b.tl, b.tr, b.bl, b.br) < 1e-12);
    }
    CHECK(sample_interchange(*cm, 50, 1) < 1e-9);
  }
}

TEST_CASE("horizontal composition is associative") {
  auto cm = make_su2_ad();
  Rng rng(4);
  DecoratedSquare a = make_valid_square(*cm, rng.group(*cm, Side::H), rng.group(*cm, Side::G),
                                        rng.group(*cm, Side::G), rng.group(*cm, Side::G));
  DecoratedSquare b = make_valid_square(*cm, rng.group(*cm, Side::H), rng.group(*cm, Side::G), a.right,
                                        rng.group(*cm, Side::G));
  DecoratedSquare c = make_valid_square(*cm, rng.group(*cm, Side::H), rng.group(*cm, Side::G), b.right,
                                        rng.group(*cm, Side::G));
  DecoratedSquare x = compose_h(*cm, compose_h(*cm, a, b), c);
  DecoratedSquare y = compose_h(*cm, a, compose_h(*cm, b, c));
  CHECK((x.value - y.value).norm() < 1e-12);
}

TEST_CASE("mismatched edges are rejected") {
  auto cm = make_heisenberg();
  Rng rng(5);
  Block b = random_block(*cm, rng);
  DecoratedSquare other = make_valid_square(*cm, rng.group(*cm, Side::H), rng.group(*cm, Side::G),
                                            rng.group(*cm, Side::G), rng.group(*cm, Side::G));
  CHECK_THROWS_AS(compose_h(*cm, b.tl, other), EdgeMismatch);
  CHECK_THROWS_AS(compose_v(*cm, b.tl, other), EdgeMismatch);
}

TEST_CASE("abelian sphere holonomy has the closed form") {
  for (int level : {1, 2}) {
    GerbeCocycle c = make_abelian_sphere_gerbe(level);
    for (double rho : {0.7, 1.0, 1.2}) {
      SquareMap sq = sphere_of_radius(rho).at(0.0);
      GridAssignment g = find_grid(sq, c.cover);
      TransportConfig fine;
      fine.ode_steps_per_unit = 128;
      cd expected = std::exp(cd(0.0, -2.0 * kPi * level * rho * rho * rho));
      CAPTURE(level);
      CAPTURE(rho);
      CHECK(std::abs(assemble_global_hol(c, sq, g).value(0, 0) - expected) < 1e-6);
      CHECK(std::abs(assemble_global_hol(c, sq, g, fine).value(0, 0) - expected) < 1e-9);
    }
  }
}

TEST_CASE("abelian plane global holonomy is the exponential of the flux") {
  GerbeCocycle c = make_fixture("abelian_plane");
  SquareMap sq = bump_family(0.1).at(0.0);
  GridAssignment g;
  g.n = 2;
  g.m = 2;
  g.assign = {0, 0, 0, 0};
  GlobalHolonomy h = assemble_global_hol(c, sq, g);
  CHECK(std::abs(h.value(0, 0) - std::exp(oracle::abelian_flux(c, 0, sq, 40))) < 1e-9);
}

TEST_CASE("global holonomy satisfies its boundary target on every fixture") {
  for (const auto& name : fixture_names()) {
    GerbeCocycle c = make_fixture(name);
    FixtureProbes p = fixture_probes(c, name);
    SquareMap sq = make_surface(p.surface).at(0.0);
    GlobalHolonomy h = assemble_global_hol(c, sq, find_grid(sq, c.cover));
    CAPTURE(name);
    CHECK(h.target_residual <= 1e-6);
    CHECK(h.overline_residual <= 1e-9);
    CHECK(h.locals.flagged == 0);
  }
}

TEST_CASE("subdivision changes nothing beyond integration error") {
  for (const char* name : {"heisenberg_torus4", "abelian_sphere(1)", "su2_plane"}) {
    GerbeCocycle c = make_fixture(name);
    FixtureProbes p = fixture_probes(c, name);
    CAPTURE(name);
    CHECK(check_subdivision(c, p.transform_square, p.transform_a, refine(p.transform_a, 2, 2)) <= 1e-6);
  }
}

TEST_CASE("a change of assignment follows the wall formula") {
  for (const char* name : {"heisenberg_torus4", "heisenberg_sphere", "abelian_sphere(1)"}) {
    GerbeCocycle c = make_fixture(name);
    FixtureProbes p = fixture_probes(c, name);
    TransformationResult t = check_transformation(c, p.transform_square, p.transform_a, p.transform_b);
    CAPTURE(name);
    CHECK(t.residual <= 1e-6);
  }
  GerbeCocycle s = make_fixture("abelian_sphere(1)");
  FixtureProbes p = fixture_probes(s, "abelian_sphere(1)");
  TransformationResult t = check_transformation(s, p.transform_square, p.transform_a, p.transform_b);
  CHECK(t.plain_residual <= 1e-9);
  CHECK(t.conjugation_residual <= 1e-6);
}

TEST_CASE("inadmissible grids are refused") {
  GerbeCocycle c = make_fixture("abelian_sphere(1)");
  GridAssignment g;
  g.assign = {0};
  CHECK_THROWS_AS(assemble_global_hol(c, sphere_of_radius(1.0).at(0.0), g), ContainmentError);
}
