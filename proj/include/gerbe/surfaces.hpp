#pragma once

#include <functional>
#include <string>
#include <vector>

#include "gerbe/manifold.hpp"
#include "gerbe/types.hpp"

namespace gerbe {

// A path [0,1] -> M with its velocity.
struct Path {
  std::function<Vec3(double)> point;
  std::function<Vec3(double)> velocity;

  Path reversed() const;
  // Restriction to [a, b] reparametrized to [0, 1].
  Path segment(double a, double b) const;
  static Path constant(const Vec3& p);
  static Path straight(const Vec3& from, const Vec3& to);
};

struct Frame {
  Vec3 point, dt, ds;
};

// A smooth map of the unit square (t to the right, s downwards) into M.
struct SquareMap {
  std::function<Frame(double, double)> frame;
  bool sphere_mode = false;

  Vec3 operator()(double t, double s) const { return frame(t, s).point; }
  Path row(double s) const;     // t -> Sigma(t, s)
  Path column(double t) const;  // s -> Sigma(t, s)
  // Affine restriction to [t0,t1] x [s0,s1] reparametrized to the unit square.
  SquareMap sub(double t0, double t1, double s0, double s1) const;
  // Samples the sphere-mode flags; returns the largest defect.
  double sphere_mode_defect(int samples = 17) const;
};

struct FamilyFrame {
  Vec3 point, dt, ds, dr;
};

// One-parameter family Sigma_r of squares with its variation field d/dr.
struct SquareFamily {
  std::string name;
  std::function<FamilyFrame(double, double, double)> frame;  // (r, t, s)
  bool sphere_mode = false;

  SquareMap at(double r) const;
  Vec3 variation(double r, double t, double s) const { return frame(r, t, s).dr; }
  SquareFamily sub(double t0, double t1, double s0, double s1) const;
};

struct GridAssignment {
  int n = 1, m = 1;           // columns along t, rows along s
  std::vector<int> assign;    // assign[l * n + k] for column k, row l (0-based)
  int samples_per_cell = 9;

  int at(int k, int l) const { return assign[l * n + k]; }
  double t0(int k) const { return static_cast<double>(k) / n; }
  double s0(int l) const { return static_cast<double>(l) / m; }
  std::string describe() const;
};

struct ContainmentDiagnostic {
  bool ok = true;
  int worst_k = -1, worst_l = -1;
  double worst_depth = 0.0;  // best available depth minus margin in the worst cell
};

// Checks that every sample of every cell lies in its assigned set with margin.
ContainmentDiagnostic check_assignment(const SquareMap& sigma, const std::vector<OpenSet>& cover,
                                       const GridAssignment& grid);
// Lowest-id admissible assignment for a fixed shape; ok=false if some cell has none.
ContainmentDiagnostic assign_cells(const SquareMap& sigma, const std::vector<OpenSet>& cover, int n, int m,
                                   GridAssignment& out, int samples = 9);
// Smallest grid in the order (n*m, n, m) with n, m <= max_depth.  Throws GridNotFound.
GridAssignment find_grid(const SquareMap& sigma, const std::vector<OpenSet>& cover, int max_depth = 6,
                         int samples = 9);
// The grid in which every cell of `grid` is split into fx by fy cells with the same set.
GridAssignment refine(const GridAssignment& grid, int fx, int fy);

struct GridElements {
  struct Face {
    int k, l, chart;
    SquareMap map;
  };
  struct Edge {
    int k, l;        // cell on the upper/left side
    int first, second;  // charts on the upper/left and lower/right side
    Path path;
  };
  struct Vertex {
    int k, l;            // upper-left cell of the four
    int i, j, kk, ll;    // charts: upper-left, lower-left, upper-right, lower-right
    Vec3 point;
  };
  std::vector<Face> faces;
  std::vector<Edge> vertical_edges;    // between (k,l) and (k+1,l), oriented downwards
  std::vector<Edge> horizontal_edges;  // between (k,l) and (k,l+1), oriented rightwards
  std::vector<Vertex> vertices;
  std::vector<Path> north, east, south, west;  // per cell, in increasing t or s
};

GridElements extract_grid_elements(const SquareMap& sigma, const GridAssignment& grid);

// Surface registry.  Names: "flat_disk", "sphere_of_radius(rho)", "torus_wrap",
// "bump_family(amplitude)", "constant(name)".  Each family is parametrized by r
// with r = 0 the base.
SquareFamily flat_disk(double radius = 0.8, Vec3 center = Vec3::Zero(), double omega = 1.0,
                       Vec3 drift = Vec3(0.15, -0.1, 0.2));
SquareFamily sphere_of_radius(double rho = 1.0);
SquareFamily torus_wrap(double amplitude = 0.05, double wobble = 0.02, Vec3 offset = Vec3::Zero());
SquareFamily bump_family(double amplitude = 0.1, double side = 0.8, Vec3 corner = Vec3(-0.4, -0.4, 0.0));
// Translation by r * direction of a fixed square map.
SquareFamily translation_family(const SquareMap& base, const Vec3& direction);
SquareFamily constant_family(const SquareMap& base);
SquareFamily make_surface(const std::string& spec);
std::vector<std::string> surface_names();

// Parses "name(a, b, ...)" into the name and numeric arguments.
struct ParsedName {
  std::string name;
  std::vector<std::string> args;
};
ParsedName parse_name(const std::string& spec);

}  // namespace gerbe
