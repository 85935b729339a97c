#pragma once

#include <array>
#include <string>

#include "gerbe/gerbe.hpp"
#include "gerbe/surfaces.hpp"

namespace gerbe {

// Standard test geometry for a bundled fixture: the default family, a square
// and chart pair for the edge cube, a path and chart quadruple for the vertex
// cube, a single-chart family, and a square with two admissible assignments
// for the change of grid.
struct FixtureProbes {
  std::string surface;
  SquareMap cube_square;
  int cube_i = 0, cube_j = 0;
  Path vertex_path;
  std::array<int, 4> vertex_charts{0, 0, 0, 0};
  SquareFamily local_family;  // a family inside one chart for the local lemma
  int local_chart = 0;
  SquareMap transform_square;
  GridAssignment transform_a, transform_b;
};

// Keyed on the registry name of the fixture ("abelian_sphere(2)" -> sphere probes).
// Throws ConfigError for an unknown fixture.
FixtureProbes fixture_probes(const GerbeCocycle& c, const std::string& fixture);

// o + t u + s w plus a small smooth bump along a fixed direction.
SquareMap wavy_square(const Vec3& o, const Vec3& u, const Vec3& w, double bump);

// 1 x 24 on the sphere: the first row in +x, rows 1..11 in +z, the rest in -z.
GridAssignment alternate_sphere_grid();

}  // namespace gerbe
