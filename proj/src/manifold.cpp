#include "gerbe/manifold.hpp"

#include <algorithm>
#include <cmath>

namespace gerbe {

std::string ManifoldModel::name() const {
  switch (kind) {
    case ManifoldKind::Euclidean: return "euclidean(" + std::to_string(dim) + ")";
    case ManifoldKind::Torus2: return "torus2";
    case ManifoldKind::Punctured3: return "punctured3";
  }
  return "?";
}

Vec3 ManifoldModel::canonical(const Vec3& p) const {
  if (kind != ManifoldKind::Torus2) return p;
  Vec3 q = p;
  for (int k = 0; k < 2; ++k) {
    q[k] -= std::floor(q[k]);
    if (q[k] >= 1.0) q[k] = 0.0;
  }
  q[2] = 0.0;
  return q;
}

Vec3 ManifoldModel::sample_point(Rng& rng) const {
  switch (kind) {
    case ManifoldKind::Torus2: return Vec3(rng.uniform(0, 1), rng.uniform(0, 1), 0.0);
    case ManifoldKind::Punctured3: {
      Vec3 d;
      do d = rng.vec(1.0);
      while (d.norm() < 0.1 || d.norm() > 1.0);
      return d.normalized() * rng.uniform(0.7, 1.3);
    }
    case ManifoldKind::Euclidean: {
      Vec3 p(rng.uniform(-1.5, 1.5), rng.uniform(-1.5, 1.5), 0.0);
      if (dim == 3) p[2] = rng.uniform(-1.5, 1.5);
      return p;
    }
  }
  return Vec3::Zero();
}

Vec3 ManifoldModel::sample_tangent(Rng& rng) const {
  Vec3 v = rng.vec(1.0);
  if (dim == 2) v[2] = 0.0;
  return v;
}

Membership OpenSet::membership(const Vec3& p) const {
  double d = depth(p);
  if (d >= margin) return Membership::InsideWithMargin;
  if (d > 0.0) return Membership::Inside;
  return Membership::Outside;
}

ManifoldModel euclidean_plane() { return {ManifoldKind::Euclidean, 2}; }
ManifoldModel torus2() { return {ManifoldKind::Torus2, 2}; }
ManifoldModel punctured_space() { return {ManifoldKind::Punctured3, 3}; }

std::vector<OpenSet> sphere_cover(double spread, double margin) {
  static const char* labels[] = {"+x", "-x", "+y", "-y", "+z", "-z"};
  std::vector<OpenSet> cover;
  for (int id = 0; id < 6; ++id) {
    int axis = id / 2;
    double sign = id % 2 == 0 ? 1.0 : -1.0;
    cover.push_back({id, labels[id],
                     [axis, sign, spread](const Vec3& p) {
                       double r = p.norm();
                       if (r < 1e-9) return -1.0;
                       return sign * p[axis] / r + spread;
                     },
                     margin});
  }
  return cover;
}

std::vector<OpenSet> torus_cover(double half_width, double margin) {
  std::vector<OpenSet> cover;
  const double centers[4][2] = {{0.25, 0.25}, {0.75, 0.25}, {0.25, 0.75}, {0.75, 0.75}};
  for (int id = 0; id < 4; ++id) {
    double cx = centers[id][0], cy = centers[id][1];
    cover.push_back({id, "square" + std::to_string(id),
                     [cx, cy, half_width](const Vec3& p) {
                       auto wrap = [](double d) { return d - std::round(d); };
                       double dx = std::abs(wrap(p[0] - cx)), dy = std::abs(wrap(p[1] - cy));
                       return half_width - std::max(dx, dy);
                     },
                     margin});
  }
  return cover;
}

std::vector<OpenSet> plane_cover(double radius, double margin) {
  return {{0, "disk", [radius](const Vec3& p) { return radius - p.norm(); }, margin}};
}

}  // namespace gerbe
