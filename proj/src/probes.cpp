#include "gerbe/probes.hpp"

#include <cmath>

namespace gerbe {

SquareMap wavy_square(const Vec3& o, const Vec3& u, const Vec3& w, double bump) {
  SquareMap m;
  m.frame = [=](double t, double s) {
    const Vec3 z(0.3, -0.2, 0.1);
    const double st = std::sin(3 * t + 1), ct = std::cos(3 * t + 1);
    const double ss = std::sin(2 * s + 0.5), cs = std::cos(2 * s + 0.5);
    Frame f;
    f.point = o + t * u + s * w + bump * st * ss * z;
    f.dt = u + bump * 3 * ct * ss * z;
    f.ds = w + bump * 2 * st * cs * z;
    return f;
  };
  return m;
}

GridAssignment alternate_sphere_grid() {
  GridAssignment g;
  g.n = 1;
  g.m = 24;
  g.assign.assign(24, 4);
  g.assign[0] = 0;
  for (int l = 12; l < 24; ++l) g.assign[l] = 5;
  return g;
}

FixtureProbes fixture_probes(const GerbeCocycle& c, const std::string& fixture) {
  const std::string base = parse_name(fixture).name;
  FixtureProbes p;
  auto grid = [](int n, int m, std::vector<int> a) {
    GridAssignment g;
    g.n = n;
    g.m = m;
    g.assign = std::move(a);
    return g;
  };
  if (base == "trivial" || base == "heisenberg_torus4") {
    p.surface = "torus_wrap";
    // Straddles the overlap of the two lower-left squares of the torus cover.
    p.cube_square = wavy_square(Vec3(0.42, 0.43, 0), Vec3(0.15, 0.02, 0), Vec3(-0.02, 0.14, 0), 0.05);
    p.cube_i = 0;
    p.cube_j = 1;
    p.vertex_path = Path::straight(Vec3(0.45, 0.45, 0), Vec3(0.55, 0.52, 0));
    p.vertex_charts = {0, 2, 1, 3};
    p.local_family = translation_family(
        wavy_square(Vec3(0.15, 0.14, 0), Vec3(0.2, 0.02, 0), Vec3(-0.02, 0.2, 0), 0.05), Vec3(0.3, -0.2, 0.0));
    p.transform_square = wavy_square(Vec3(0.46, 0.457, 0), Vec3(0.08, 0.008, 0), Vec3(-0.008, 0.08, 0), 0.005);
    p.transform_a = grid(2, 2, {1, 2, 3, 0});
    p.transform_b = grid(3, 1, {3, 1, 2});
  } else if (base == "abelian_sphere" || base == "heisenberg_sphere") {
    p.surface = "sphere_of_radius(1)";
    const Vec3 o(0.8, 0.55, 0.5);
    p.cube_square = wavy_square(o, Vec3(0.1, -0.3, 0.2), Vec3(0.05, 0.1, 0.3), 0.05);
    auto ch = c.charts_containing(o, 0.05);
    p.cube_i = ch.at(0);
    p.cube_j = ch.size() > 1 ? ch[1] : ch[0];
    // +x, +y and +z overlap around the diagonal direction.
    p.vertex_path = Path::straight(Vec3(0.6, 0.55, 0.58), Vec3(0.55, 0.6, 0.6));
    p.vertex_charts = {0, 2, 4, 2};
    p.local_family = translation_family(p.cube_square, Vec3(0.3, 0.2, 0.1));
    p.local_chart = p.cube_i;
    p.transform_square = sphere_of_radius(1.0).at(0.0);
    p.transform_a = grid(1, 2, {4, 5});
    p.transform_b = alternate_sphere_grid();
  } else if (base == "abelian_plane" || base == "heisenberg_plane" || base == "su2_plane") {
    p.surface = base == "abelian_plane" ? "bump_family(0.1)" : "flat_disk";
    p.cube_square = wavy_square(Vec3(-0.3, 0.2, 0.1), Vec3(0.1, -0.3, 0.2), Vec3(0.05, 0.1, 0.3), 0.05);
    p.vertex_path = Path::straight(Vec3(-0.2, 0.1, 0.05), Vec3(0.1, 0.25, -0.1));
    p.local_family = make_surface(p.surface);
    p.transform_square = flat_disk().at(0.0);
    p.transform_a = grid(1, 1, {0});
    p.transform_b = grid(2, 2, {0, 0, 0, 0});
  } else {
    throw ConfigError("no probes for fixture " + fixture);
  }
  return p;
}

}  // namespace gerbe
