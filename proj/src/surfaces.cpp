#include "gerbe/surfaces.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "gerbe/types.hpp"

namespace gerbe {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

Path Path::reversed() const {
  Path p = *this;
  auto pt = point;
  auto vel = velocity;
  p.point = [pt](double t) { return pt(1.0 - t); };
  p.velocity = [vel](double t) { return Vec3(-vel(1.0 - t)); };
  return p;
}

Path Path::segment(double a, double b) const {
  Path p;
  auto pt = point;
  auto vel = velocity;
  p.point = [pt, a, b](double t) { return pt(a + (b - a) * t); };
  p.velocity = [vel, a, b](double t) { return Vec3((b - a) * vel(a + (b - a) * t)); };
  return p;
}

Path Path::constant(const Vec3& q) {
  return {[q](double) { return q; }, [](double) { return Vec3(Vec3::Zero()); }};
}

Path Path::straight(const Vec3& from, const Vec3& to) {
  return {[from, to](double t) { return Vec3(from + t * (to - from)); }, [from, to](double) { return Vec3(to - from); }};
}

Path SquareMap::row(double s) const {
  auto fr = frame;
  return {[fr, s](double t) { return fr(t, s).point; }, [fr, s](double t) { return fr(t, s).dt; }};
}

Path SquareMap::column(double t) const {
  auto fr = frame;
  return {[fr, t](double s) { return fr(t, s).point; }, [fr, t](double s) { return fr(t, s).ds; }};
}

SquareMap SquareMap::sub(double t0, double t1, double s0, double s1) const {
  SquareMap m;
  auto fr = frame;
  m.frame = [fr, t0, t1, s0, s1](double t, double s) {
    Frame f = fr(t0 + (t1 - t0) * t, s0 + (s1 - s0) * s);
    f.dt *= (t1 - t0);
    f.ds *= (s1 - s0);
    return f;
  };
  m.sphere_mode = false;
  return m;
}

double SquareMap::sphere_mode_defect(int samples) const {
  double worst = 0.0;
  Vec3 north = (*this)(0.0, 0.0), south = (*this)(0.0, 1.0);
  for (int a = 0; a < samples; ++a) {
    double u = static_cast<double>(a) / (samples - 1);
    worst = std::max(worst, ((*this)(u, 0.0) - north).norm());
    worst = std::max(worst, ((*this)(u, 1.0) - south).norm());
    worst = std::max(worst, ((*this)(0.0, u) - (*this)(1.0, u)).norm());
  }
  return worst;
}

SquareMap SquareFamily::at(double r) const {
  SquareMap m;
  auto fr = frame;
  m.frame = [fr, r](double t, double s) {
    FamilyFrame f = fr(r, t, s);
    return Frame{f.point, f.dt, f.ds};
  };
  m.sphere_mode = sphere_mode;
  return m;
}

SquareFamily SquareFamily::sub(double t0, double t1, double s0, double s1) const {
  SquareFamily out;
  out.name = name + "|sub";
  auto fr = frame;
  out.frame = [fr, t0, t1, s0, s1](double r, double t, double s) {
    FamilyFrame f = fr(r, t0 + (t1 - t0) * t, s0 + (s1 - s0) * s);
    f.dt *= (t1 - t0);
    f.ds *= (s1 - s0);
    return f;
  };
  return out;
}

std::string GridAssignment::describe() const {
  std::ostringstream os;
  os << n << "x" << m << " [";
  for (std::size_t a = 0; a < assign.size(); ++a) os << (a ? "," : "") << assign[a];
  os << "]";
  return os.str();
}

namespace {

// Minimum over the cell samples of the depth of `set`.
double cell_depth(const SquareMap& sigma, const OpenSet& set, double t0, double t1, double s0, double s1, int S) {
  double d = 1e300;
  for (int a = 0; a < S; ++a)
    for (int b = 0; b < S; ++b) {
      double t = t0 + (t1 - t0) * a / (S - 1), s = s0 + (s1 - s0) * b / (S - 1);
      d = std::min(d, set.depth(sigma(t, s)));
      if (d < set.margin) return d;
    }
  return d;
}

}  // namespace

ContainmentDiagnostic check_assignment(const SquareMap& sigma, const std::vector<OpenSet>& cover,
                                       const GridAssignment& grid) {
  ContainmentDiagnostic diag;
  diag.worst_depth = 1e300;
  for (int l = 0; l < grid.m; ++l)
    for (int k = 0; k < grid.n; ++k) {
      const OpenSet& U = cover.at(grid.at(k, l));
      double d = cell_depth(sigma, U, grid.t0(k), grid.t0(k + 1), grid.s0(l), grid.s0(l + 1), grid.samples_per_cell) -
                 U.margin;
      if (d < diag.worst_depth) {
        diag.worst_depth = d;
        diag.worst_k = k;
        diag.worst_l = l;
      }
    }
  diag.ok = diag.worst_depth >= 0.0;
  return diag;
}

ContainmentDiagnostic assign_cells(const SquareMap& sigma, const std::vector<OpenSet>& cover, int n, int m,
                                   GridAssignment& out, int samples) {
  out.n = n;
  out.m = m;
  out.samples_per_cell = samples;
  out.assign.assign(n * m, -1);
  ContainmentDiagnostic diag;
  diag.worst_depth = 1e300;
  for (int l = 0; l < m; ++l)
    for (int k = 0; k < n; ++k) {
      double best = -1e300;
      for (const OpenSet& U : cover) {
        double d = cell_depth(sigma, U, static_cast<double>(k) / n, static_cast<double>(k + 1) / n,
                              static_cast<double>(l) / m, static_cast<double>(l + 1) / m, samples) -
                   U.margin;
        if (d >= 0.0 && out.assign[l * n + k] < 0) out.assign[l * n + k] = U.id;
        best = std::max(best, d);
      }
      if (best < diag.worst_depth) {
        diag.worst_depth = best;
        diag.worst_k = k;
        diag.worst_l = l;
      }
    }
  diag.ok = diag.worst_depth >= 0.0;
  return diag;
}

GridAssignment find_grid(const SquareMap& sigma, const std::vector<OpenSet>& cover, int max_depth, int samples) {
  ContainmentDiagnostic last;
  for (int area = 1; area <= max_depth * max_depth; ++area)
    for (int n = 1; n <= max_depth; ++n) {
      if (area % n != 0) continue;
      int m = area / n;
      if (m > max_depth) continue;
      GridAssignment g;
      last = assign_cells(sigma, cover, n, m, g, samples);
      if (last.ok) return g;
    }
  std::ostringstream os;
  os << "no grid up to " << max_depth << "x" << max_depth << "; worst cell (" << last.worst_k << "," << last.worst_l
     << ") best depth minus margin " << last.worst_depth;
  throw GridNotFound(os.str());
}

GridAssignment refine(const GridAssignment& grid, int fx, int fy) {
  GridAssignment r;
  r.n = grid.n * fx;
  r.m = grid.m * fy;
  r.samples_per_cell = grid.samples_per_cell;
  r.assign.resize(r.n * r.m);
  for (int l = 0; l < r.m; ++l)
    for (int k = 0; k < r.n; ++k) r.assign[l * r.n + k] = grid.at(k / fx, l / fy);
  return r;
}

GridElements extract_grid_elements(const SquareMap& sigma, const GridAssignment& grid) {
  GridElements el;
  const int n = grid.n, m = grid.m;
  for (int l = 0; l < m; ++l)
    for (int k = 0; k < n; ++k)
      el.faces.push_back({k, l, grid.at(k, l), sigma.sub(grid.t0(k), grid.t0(k + 1), grid.s0(l), grid.s0(l + 1))});
  for (int l = 0; l < m; ++l)
    for (int k = 0; k + 1 < n; ++k)
      el.vertical_edges.push_back(
          {k, l, grid.at(k, l), grid.at(k + 1, l), sigma.column(grid.t0(k + 1)).segment(grid.s0(l), grid.s0(l + 1))});
  for (int l = 0; l + 1 < m; ++l)
    for (int k = 0; k < n; ++k)
      el.horizontal_edges.push_back(
          {k, l, grid.at(k, l), grid.at(k, l + 1), sigma.row(grid.s0(l + 1)).segment(grid.t0(k), grid.t0(k + 1))});
  for (int l = 0; l + 1 < m; ++l)
    for (int k = 0; k + 1 < n; ++k)
      el.vertices.push_back({k, l, grid.at(k, l), grid.at(k, l + 1), grid.at(k + 1, l), grid.at(k + 1, l + 1),
                             sigma(grid.t0(k + 1), grid.s0(l + 1))});
  for (int k = 0; k < n; ++k) {
    el.north.push_back(sigma.row(0.0).segment(grid.t0(k), grid.t0(k + 1)));
    el.south.push_back(sigma.row(1.0).segment(grid.t0(k), grid.t0(k + 1)));
  }
  for (int l = 0; l < m; ++l) {
    el.west.push_back(sigma.column(0.0).segment(grid.s0(l), grid.s0(l + 1)));
    el.east.push_back(sigma.column(1.0).segment(grid.s0(l), grid.s0(l + 1)));
  }
  return el;
}

// ---------------------------------------------------------------- registry

SquareFamily flat_disk(double radius, Vec3 center, double omega, Vec3 drift) {
  SquareFamily f;
  f.name = "flat_disk";
  f.frame = [=](double r, double t, double s) {
    double u = 2.0 * t - 1.0, v = 2.0 * s - 1.0;
    double su = std::sqrt(1.0 - 0.5 * u * u), sv = std::sqrt(1.0 - 0.5 * v * v);
    Vec3 q(u * sv, v * su, 0.0);
    Vec3 qt(2.0 * sv, 2.0 * v * (-0.5 * u) / su, 0.0);
    Vec3 qs(2.0 * u * (-0.5 * v) / sv, 2.0 * su, 0.0);
    double c = std::cos(omega * r), sn = std::sin(omega * r);
    auto rot = [c, sn](const Vec3& x) { return Vec3(c * x[0] - sn * x[1], sn * x[0] + c * x[1], x[2]); };
    Vec3 x = radius * rot(q);
    FamilyFrame fr;
    fr.point = center + x + r * drift;
    fr.dt = radius * rot(qt);
    fr.ds = radius * rot(qs);
    fr.dr = omega * Vec3(-x[1], x[0], 0.0) + drift;
    return fr;
  };
  return f;
}

SquareFamily sphere_of_radius(double rho) {
  SquareFamily f;
  f.name = "sphere_of_radius";
  f.sphere_mode = true;
  f.frame = [rho](double r, double t, double s) {
    double R = rho + r;
    double th = kPi * s, ph = 2.0 * kPi * t;
    Vec3 nrm(std::sin(th) * std::cos(ph), std::sin(th) * std::sin(ph), std::cos(th));
    Vec3 nt(-2.0 * kPi * std::sin(th) * std::sin(ph), 2.0 * kPi * std::sin(th) * std::cos(ph), 0.0);
    Vec3 ns(kPi * std::cos(th) * std::cos(ph), kPi * std::cos(th) * std::sin(ph), -kPi * std::sin(th));
    // Pin the poles exactly so the north and south edges are constant paths.
    if (s == 0.0) nrm = Vec3(0, 0, 1);
    if (s == 1.0) nrm = Vec3(0, 0, -1);
    if (t == 1.0) {
      Vec3 n0(std::sin(th), 0.0, std::cos(th));
      if (s == 0.0) n0 = Vec3(0, 0, 1);
      if (s == 1.0) n0 = Vec3(0, 0, -1);
      nrm = n0;
      nt = Vec3(0.0, 2.0 * kPi * std::sin(th), 0.0);
      ns = Vec3(kPi * std::cos(th), 0.0, -kPi * std::sin(th));
    }
    return FamilyFrame{R * nrm, R * nt, R * ns, nrm};
  };
  return f;
}

SquareFamily torus_wrap(double amplitude, double wobble, Vec3 offset) {
  SquareFamily f;
  f.name = "torus_wrap";
  const double a = amplitude, w = wobble, tp = 2.0 * kPi;
  f.frame = [=](double r, double t, double s) {
    double p1 = tp * (t + 2.0 * s), p2 = tp * (2.0 * t - s);
    FamilyFrame fr;
    fr.point = Vec3(t + offset[0] + w * std::sin(tp * s) + r * a * std::sin(p1),
                    s + offset[1] + w * std::sin(tp * t) + r * a * std::cos(p2), 0.0);
    fr.dt = Vec3(1.0 + r * a * tp * std::cos(p1), w * tp * std::cos(tp * t) - r * a * 2.0 * tp * std::sin(p2), 0.0);
    fr.ds = Vec3(w * tp * std::cos(tp * s) + r * a * 2.0 * tp * std::cos(p1), 1.0 + r * a * tp * std::sin(p2), 0.0);
    fr.dr = Vec3(a * std::sin(p1), a * std::cos(p2), 0.0);
    return fr;
  };
  return f;
}

SquareFamily bump_family(double amplitude, double side, Vec3 corner) {
  SquareFamily f;
  f.name = "bump_family";
  const Vec3 dir(0.3, 0.2, 1.0);
  f.frame = [=](double r, double t, double s) {
    double b = 16.0 * t * (1.0 - t) * s * (1.0 - s);
    double bt = 16.0 * (1.0 - 2.0 * t) * s * (1.0 - s);
    double bs = 16.0 * t * (1.0 - t) * (1.0 - 2.0 * s);
    FamilyFrame fr;
    fr.point = corner + Vec3(side * t, side * s, 0.0) + r * amplitude * b * dir;
    fr.dt = Vec3(side, 0.0, 0.0) + r * amplitude * bt * dir;
    fr.ds = Vec3(0.0, side, 0.0) + r * amplitude * bs * dir;
    fr.dr = amplitude * b * dir;
    return fr;
  };
  return f;
}

SquareFamily translation_family(const SquareMap& base, const Vec3& direction) {
  SquareFamily f;
  f.name = "translation";
  f.frame = [base, direction](double r, double t, double s) {
    Frame b = base.frame(t, s);
    return FamilyFrame{b.point + r * direction, b.dt, b.ds, direction};
  };
  return f;
}

SquareFamily constant_family(const SquareMap& base) {
  SquareFamily f = translation_family(base, Vec3::Zero());
  f.name = "constant";
  f.sphere_mode = base.sphere_mode;
  return f;
}

ParsedName parse_name(const std::string& spec) {
  ParsedName out;
  auto open = spec.find('(');
  if (open == std::string::npos) {
    out.name = spec;
    return out;
  }
  if (spec.back() != ')') throw ConfigError("malformed name: " + spec);
  out.name = spec.substr(0, open);
  std::string body = spec.substr(open + 1, spec.size() - open - 2);
  std::stringstream ss(body);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item.erase(0, item.find_first_not_of(" \t"));
    item.erase(item.find_last_not_of(" \t") + 1);
    if (!item.empty()) out.args.push_back(item);
  }
  return out;
}

namespace {
double arg_or(const ParsedName& p, std::size_t k, double fallback) {
  if (k >= p.args.size()) return fallback;
  try {
    return std::stod(p.args[k]);
  } catch (const std::exception&) {
    throw ConfigError("bad numeric argument '" + p.args[k] + "' in " + p.name);
  }
}
}  // namespace

SquareFamily make_surface(const std::string& spec) {
  ParsedName p = parse_name(spec);
  if (p.name == "flat_disk") return flat_disk(arg_or(p, 0, 0.8));
  if (p.name == "sphere_of_radius") {
    double rho = arg_or(p, 0, 1.0);
    if (!(rho > 0.2 && rho < 10.0)) throw ConfigError("sphere_of_radius: radius out of range (0.2, 10)");
    return sphere_of_radius(rho);
  }
  if (p.name == "torus_wrap") return torus_wrap(arg_or(p, 0, 0.05));
  if (p.name == "bump_family") return bump_family(arg_or(p, 0, 0.1));
  // constant(inner): the r = 0 square of another family, held fixed.
  if (p.name == "constant") {
    if (p.args.size() != 1) throw ConfigError("constant(...) takes one surface name");
    return constant_family(make_surface(p.args[0]).at(0.0));
  }
  throw ConfigError("unknown surface family: " + spec);
}

std::vector<std::string> surface_names() { return {"flat_disk", "sphere_of_radius", "torus_wrap", "bump_family", "constant"}; }

}  // namespace gerbe
