#pragma once

#include <functional>
#include <string>
#include <vector>

#include "gerbe/rng.hpp"
#include "gerbe/types.hpp"

namespace gerbe {

enum class ManifoldKind { Euclidean, Torus2, Punctured3 };

// Points are always Vec3; two-dimensional models keep z = 0.
// Punctured3 is R^3 minus the origin, the home of the round spheres of every radius.
struct ManifoldModel {
  ManifoldKind kind = ManifoldKind::Euclidean;
  int dim = 2;

  std::string name() const;
  Vec3 canonical(const Vec3& p) const;
  // Random point in the region the bundled fixtures live on.
  Vec3 sample_point(Rng& rng) const;
  Vec3 sample_tangent(Rng& rng) const;
};

enum class Membership { Outside, Inside, InsideWithMargin };

struct OpenSet {
  int id = 0;
  std::string label;
  // Positive inside; distance-like so a margin can be compared against it.
  std::function<double(const Vec3&)> depth;
  double margin = 0.05;

  Membership membership(const Vec3& p) const;
  bool contains(const Vec3& p) const { return depth(p) > 0.0; }
  bool contains_with_margin(const Vec3& p) const { return depth(p) >= margin; }
};

ManifoldModel euclidean_plane();
ManifoldModel torus2();
ManifoldModel punctured_space();

// Six cones {+-x/|p| > -0.2, ...}; ids 0..5 are +x, -x, +y, -y, +z, -z.
std::vector<OpenSet> sphere_cover(double spread = 0.2, double margin = 0.05);
// Four overlapping squares of half-width 0.35 on the unit torus.
std::vector<OpenSet> torus_cover(double half_width = 0.35, double margin = 0.05);
// One disk of the given radius.
std::vector<OpenSet> plane_cover(double radius = 3.0, double margin = 0.05);

}  // namespace gerbe
