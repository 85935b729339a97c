#include "gerbe/variation.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "gerbe/lie_integrator.hpp"

namespace gerbe {

namespace {

Mat inv_g(const CrossedModule& cm, const Mat& g) { return cm.inverse(Side::G, g); }

// A straight segment in (t, s) pulled through the family at r = 0, with the
// variation field along it.
struct FamilyPiece {
  Path path;
  std::function<Vec3(double)> variation;
};

FamilyPiece family_piece(const SquareFamily& fam, double t0, double s0, double t1, double s1) {
  auto fr = fam.frame;
  FamilyPiece p;
  p.path.point = [=](double u) { return fr(0.0, t0 + (t1 - t0) * u, s0 + (s1 - s0) * u).point; };
  p.path.velocity = [=](double u) {
    FamilyFrame f = fr(0.0, t0 + (t1 - t0) * u, s0 + (s1 - s0) * u);
    return Vec3((t1 - t0) * f.dt + (s1 - s0) * f.ds);
  };
  p.variation = [=](double u) { return fr(0.0, t0 + (t1 - t0) * u, s0 + (s1 - s0) * u).dr; };
  return p;
}

// Staircase holonomy from the basepoint to the upper-left corner of cell (k, l):
// down the west side, along the south side and up the left edges of column k.
Mat staircase_to_cell(const GerbeCocycle& c, const SquareFamily& fam, const GridAssignment& grid, int k, int l,
                      const TransportConfig& cfg) {
  const CrossedModule& cm = *c.cm;
  const int m = grid.m;
  auto west_edge = [&](int kk, int ll) {
    return family_piece(fam, grid.t0(kk), grid.s0(ll), grid.t0(kk), grid.s0(ll + 1)).path;
  };
  auto point = [&](double t, double s) { return fam.frame(0.0, t, s).point; };
  Mat P = cm.identity(Side::G);
  for (int ll = 0; ll < m; ++ll) {
    if (ll > 0) P = c.g_at(grid.at(0, ll - 1), grid.at(0, ll), point(0.0, grid.s0(ll))) * P;
    P = hol_path_matrix(c, grid.at(0, ll), west_edge(0, ll), cfg) * P;
  }
  for (int kk = 0; kk < k; ++kk) {
    Path south = family_piece(fam, grid.t0(kk), 1.0, grid.t0(kk + 1), 1.0).path;
    P = hol_path_matrix(c, grid.at(kk, m - 1), south, cfg) * P;
    P = c.g_at(grid.at(kk, m - 1), grid.at(kk + 1, m - 1), point(grid.t0(kk + 1), 1.0)) * P;
  }
  for (int ll = m - 1; ll >= l; --ll) {
    P = inv_g(cm, hol_path_matrix(c, grid.at(k, ll), west_edge(k, ll), cfg)) * P;
    if (ll > l) P = inv_g(cm, c.g_at(grid.at(k, ll - 1), grid.at(k, ll), point(grid.t0(k), grid.s0(ll)))) * P;
  }
  return P;
}

// Integral over the unit cell of (alpha_{Q(t,s)^-1})_*(f(t,s)), Q the holonomy of
// the in-cell path from the upper-left corner to (t, s).
Mat transported_cell_integral(const GerbeCocycle& c, int i, const SquareFamily& cell,
                              const std::function<Mat(double, double)>& f, InCellPath rule,
                              const TransportConfig& cfg) {
  const CrossedModule& cm = *c.cm;
  const SquareMap sigma = cell.at(0.0);
  const bool down_first = rule == InCellPath::DownThenRight;
  const Path first = down_first ? sigma.column(0.0) : sigma.row(0.0);
  PathTransport outer(c, i, first, cfg.order);
  const QuadratureRule gl = gauss_legendre(cfg.quadrature_points);
  const int n = cfg.ode_steps_per_unit;
  const double h = 1.0 / n;
  Mat U = cm.identity(Side::G);
  Mat sum = cm.zero(Side::H);
  for (int k = 0; k < n; ++k) {
    const double u0 = k * h;
    for (std::size_t q = 0; q < gl.nodes.size(); ++q) {
      const double u = u0 + h * gl.nodes[q];
      Mat Uu = outer.step(U, u0, h * gl.nodes[q]);
      if (down_first) {
        auto g = [&](double t) { return f(t, u); };
        sum += (h * gl.weights[q]) * transported_line_integral(c, i, sigma.row(u), Uu, g, cfg).integral;
      } else {
        auto g = [&](double s) { return f(u, s); };
        sum += (h * gl.weights[q]) * transported_line_integral(c, i, sigma.column(u), Uu, g, cfg).integral;
      }
    }
    U = outer.step(U, u0, h);
    if ((k + 1) % kReprojectEvery == 0) U = cm.project(Side::G, U);
  }
  return sum;
}

void require_grid(const GerbeCocycle& c, const SquareFamily& fam, const GridAssignment& grid, double r) {
  ContainmentDiagnostic d = check_assignment(fam.at(r), c.cover, grid);
  if (!d.ok) {
    std::ostringstream os;
    os << "assignment " << grid.describe() << " is not admissible at r = " << r << " (cell " << d.worst_k << ", "
       << d.worst_l << ", depth " << d.worst_depth << "); use a finer grid or smaller steps";
    throw GridDrift(os.str());
  }
}

}  // namespace

void FDConfig::validate() const {
  if (steps.empty()) throw ConfigError("fd: need at least one step");
  for (std::size_t i = 0; i < steps.size(); ++i) {
    if (!(steps[i] > 0.0)) throw ConfigError("fd: steps must be positive");
    if (i > 0 && !(steps[i] < steps[i - 1])) throw ConfigError("fd: steps must be strictly decreasing");
  }
}

Mat bulk_integral_H(const GerbeCocycle& c, const SquareFamily& fam, const GridAssignment& grid,
                    const TransportConfig& cfg, InCellPath rule, std::vector<Mat>* per_cell) {
  const CrossedModule& cm = *c.cm;
  Mat total = cm.zero(Side::H);
  if (per_cell) per_cell->assign(grid.n * grid.m, cm.zero(Side::H));
  for (int l = 0; l < grid.m; ++l)
    for (int k = 0; k < grid.n; ++k) {
      const int i = grid.at(k, l);
      const SquareFamily cell = fam.sub(grid.t0(k), grid.t0(k + 1), grid.s0(l), grid.s0(l + 1));
      auto H = [&](double t, double s) {
        FamilyFrame f = cell.frame(0.0, t, s);
        return three_curvature_H(c, i, f.point, f.dt, f.ds, f.dr);
      };
      Mat local = transported_cell_integral(c, i, cell, H, rule, cfg);
      Mat P = staircase_to_cell(c, fam, grid, k, l, cfg);
      Mat contribution = cm.alpha_gstar(inv_g(cm, P), local);
      if (per_cell) (*per_cell)[l * grid.n + k] = contribution;
      total += contribution;
    }
  return total;
}

BoundaryTerms boundary_terms(const GerbeCocycle& c, const SquareFamily& fam, const GridAssignment& grid,
                             const TransportConfig& cfg) {
  const CrossedModule& cm = *c.cm;
  const int n = grid.n, m = grid.m;
  BoundaryTerms out;
  out.B = out.a = cm.zero(Side::H);
  for (int s = 0; s < 4; ++s) out.B_sides[s] = out.a_sides[s] = cm.zero(Side::H);
  Mat U = cm.identity(Side::G);

  auto traverse = [&](int side, int chart, const FamilyPiece& piece) {
    auto integrand = [&](double u) {
      return c.B_at(chart, piece.path.point(u), piece.path.velocity(u), piece.variation(u));
    };
    TransportedIntegral ti = transported_line_integral(c, chart, piece.path, U, integrand, cfg);
    out.B_sides[side] += ti.integral;
    U = ti.hol;
  };
  auto reversed = [](const FamilyPiece& p) {
    FamilyPiece r;
    r.path = p.path.reversed();
    auto v = p.variation;
    r.variation = [v](double u) { return v(1.0 - u); };
    return r;
  };
  // Crossing from P (upper/left) into Q along the loop direction (aligned) or back.
  auto cross = [&](int side, int P, int Q, double t, double s, bool aligned) {
    FamilyFrame f = fam.frame(0.0, t, s);
    Mat g = c.g_at(P, Q, f.point);
    Mat a = c.a_at(P, Q, f.point, f.dr);
    if (aligned) {
      out.a_sides[side] -= cm.alpha_gstar(inv_g(cm, g * U), a);
      U = g * U;
    } else {
      out.a_sides[side] += cm.alpha_gstar(inv_g(cm, U), a);
      U = inv_g(cm, g) * U;
    }
  };

  for (int l = 0; l < m; ++l) {
    if (l > 0) cross(kWest, grid.at(0, l - 1), grid.at(0, l), 0.0, grid.s0(l), true);
    traverse(kWest, grid.at(0, l), family_piece(fam, 0.0, grid.s0(l), 0.0, grid.s0(l + 1)));
  }
  for (int k = 0; k < n; ++k) {
    if (k > 0) cross(kSouth, grid.at(k - 1, m - 1), grid.at(k, m - 1), grid.t0(k), 1.0, true);
    traverse(kSouth, grid.at(k, m - 1), family_piece(fam, grid.t0(k), 1.0, grid.t0(k + 1), 1.0));
  }
  for (int l = m - 1; l >= 0; --l) {
    if (l < m - 1) cross(kEast, grid.at(n - 1, l), grid.at(n - 1, l + 1), 1.0, grid.s0(l + 1), false);
    traverse(kEast, grid.at(n - 1, l), reversed(family_piece(fam, 1.0, grid.s0(l), 1.0, grid.s0(l + 1))));
  }
  for (int k = n - 1; k >= 0; --k) {
    if (k < n - 1) cross(kNorth, grid.at(k, 0), grid.at(k + 1, 0), grid.t0(k + 1), 0.0, false);
    traverse(kNorth, grid.at(k, 0), reversed(family_piece(fam, grid.t0(k), 0.0, grid.t0(k + 1), 0.0)));
  }
  for (int s = 0; s < 4; ++s) {
    out.B += out.B_sides[s];
    out.a += out.a_sides[s];
  }
  out.loop = U;
  return out;
}

Mat boundary_integral_B(const GerbeCocycle& c, const SquareFamily& fam, const GridAssignment& grid,
                        const TransportConfig& cfg) {
  return boundary_terms(c, fam, grid, cfg).B;
}

Mat boundary_sum_a(const GerbeCocycle& c, const SquareFamily& fam, const GridAssignment& grid,
                   const TransportConfig& cfg) {
  return boundary_terms(c, fam, grid, cfg).a;
}

DerivativeBreakdown d_hol_formula(const GerbeCocycle& c, const SquareFamily& fam, const GridAssignment& grid,
                                  const TransportConfig& cfg, double r_check) {
  const CrossedModule& cm = *c.cm;
  require_grid(c, fam, grid, 0.0);
  if (r_check > 0.0) {
    require_grid(c, fam, grid, -r_check);
    require_grid(c, fam, grid, r_check);
  }
  DerivativeBreakdown d;
  GlobalHolonomy hol = assemble_global_hol(c, fam.at(0.0), grid, cfg);
  d.hol = hol.value;
  FamilyFrame corner = fam.frame(0.0, 0.0, 0.0);
  d.corner_term = -cm.alpha_hstar(c.A_at(grid.at(0, 0), corner.point, corner.dr), d.hol);
  d.bulk_term = bulk_integral_H(c, fam, grid, cfg, InCellPath::DownThenRight, &d.bulk_per_cell);
  BoundaryTerms b = boundary_terms(c, fam, grid, cfg);
  d.boundary_B = b.B;
  d.boundary_B_sides = b.B_sides;
  d.boundary_a = b.a;
  d.boundary_a_sides = b.a_sides;
  d.total = d.corner_term + d.hol * (d.bulk_term + d.boundary_B + d.boundary_a);
  d.total_printed_a_signs = d.corner_term + d.hol * (d.bulk_term + d.boundary_B - d.boundary_a);
  d.loop_residual = (b.loop - cm.t_group(d.hol)).norm();
  return d;
}

FDResult d_hol_finite_difference(const GerbeCocycle& c, const SquareFamily& fam, const GridAssignment& grid,
                                 const TransportConfig& cfg, const FDConfig& fd) {
  fd.validate();
  require_grid(c, fam, grid, -fd.steps.front());
  require_grid(c, fam, grid, fd.steps.front());
  FDResult out;
  for (double h : fd.steps) {
    Mat plus = assemble_global_hol(c, fam.at(h), grid, cfg).value;
    Mat minus = assemble_global_hol(c, fam.at(-h), grid, cfg).value;
    out.central.push_back((plus - minus) / (2.0 * h));
  }
  for (std::size_t i = 0; i + 1 < fd.steps.size(); ++i) {
    const double rho2 = std::pow(fd.steps[i] / fd.steps[i + 1], 2);
    out.extrapolated.push_back((rho2 * out.central[i + 1] - out.central[i]) / (rho2 - 1.0));
  }
  out.derivative = (fd.richardson && !out.extrapolated.empty()) ? out.extrapolated.back() : out.central.back();

  // Slopes from successive differences; NaN when the differences vanish.
  auto slope = [&](const std::vector<Mat>& v, std::size_t offset) {
    const std::size_t k = v.size();
    if (k < 3) return std::numeric_limits<double>::quiet_NaN();
    double d1 = (v[k - 3] - v[k - 2]).norm(), d2 = (v[k - 2] - v[k - 1]).norm();
    if (d1 < 1e-14 || d2 < 1e-14) return std::numeric_limits<double>::quiet_NaN();
    return std::log(d1 / d2) / std::log(fd.steps[k - 2 + offset] / fd.steps[k - 1 + offset]);
  };
  out.central_order = slope(out.central, 0);
  out.richardson_order = slope(out.extrapolated, 1);
  return out;
}

double relative_error(const Mat& fd, const Mat& formula) {
  return (fd - formula).norm() / std::max(fd.norm(), 1e-8);
}

DerivativeCheck check_derivative(const GerbeCocycle& c, const SquareFamily& fam, const GridAssignment& grid,
                                 const TransportConfig& cfg, const FDConfig& fd) {
  DerivativeCheck out;
  out.formula = d_hol_formula(c, fam, grid, cfg, fd.steps.empty() ? 0.0 : fd.steps.front());
  out.fd = d_hol_finite_difference(c, fam, grid, cfg, fd);
  out.rel_err = relative_error(out.fd.derivative, out.formula.total);
  out.rel_err_printed_a = relative_error(out.fd.derivative, out.formula.total_printed_a_signs);
  out.rel_err_finest_central = relative_error(out.fd.central.back(), out.formula.total);
  const double formula_norm = out.formula.total.norm();
  for (std::size_t i = 0; i < fd.steps.size(); ++i) {
    ConvergenceRow row;
    row.step = fd.steps[i];
    row.fd_norm = out.fd.central[i].norm();
    row.formula_norm = formula_norm;
    row.abs_err = (out.fd.central[i] - out.formula.total).norm();
    row.rel_err = relative_error(out.fd.central[i], out.formula.total);
    if (i > 0) {
      const double prev = out.fd.table[i - 1].abs_err;
      row.est_order = (prev > 0.0 && row.abs_err > 0.0)
                          ? std::log(prev / row.abs_err) / std::log(fd.steps[i - 1] / fd.steps[i])
                          : 0.0;
    }
    out.fd.table.push_back(row);
  }
  return out;
}

double check_local_lemma(const GerbeCocycle& c, int i, const SquareFamily& fam, const TransportConfig& cfg,
                         const FDConfig& fd) {
  GridAssignment grid;
  grid.n = grid.m = 1;
  grid.assign = {i};
  return check_derivative(c, fam, grid, cfg, fd).rel_err;
}

SphereDerivative d_hol_sphere(const GerbeCocycle& c, const SquareFamily& fam, const GridAssignment& grid,
                              const TransportConfig& cfg, const FDConfig& fd, int center_samples,
                              std::uint64_t seed) {
  const CrossedModule& cm = *c.cm;
  if (!fam.sphere_mode || fam.at(0.0).sphere_mode_defect() > 1e-12)
    throw DomainError("d_hol_sphere: family " + fam.name + " is not in sphere mode");
  SphereDerivative out;
  out.check = check_derivative(c, fam, grid, cfg, fd);
  const DerivativeBreakdown& d = out.check.formula;
  out.boundary_cancellation = (d.boundary_B + d.boundary_a).norm();
  out.reduced_total = d.corner_term + d.hol * d.bulk_term;
  out.reduced_rel_err = relative_error(out.check.fd.derivative, out.reduced_total);
  Rng rng(seed);
  for (int k = 0; k < center_samples; ++k) {
    Mat h = rng.group(cm, Side::H, 1.0);
    out.center_residual = std::max(out.center_residual, (d.hol * h - h * d.hol).norm());
  }
  return out;
}

HTransformReport check_H_transform_and_center(const GerbeCocycle& c, const SquareFamily& fam,
                                              const GridAssignment& a, const GridAssignment& b,
                                              const TransportConfig& cfg, int n_points, std::uint64_t seed) {
  const CrossedModule& cm = *c.cm;
  HTransformReport out;
  Mat bulk_a = bulk_integral_H(c, fam, a, cfg);
  Mat bulk_b = bulk_integral_H(c, fam, b, cfg);
  Mat g00 = c.g_at(a.at(0, 0), b.at(0, 0), fam.frame(0.0, 0.0, 0.0).point);
  out.transform_residual = (bulk_b - cm.alpha_gstar(g00, bulk_a)).norm();
  out.printed_residual = (bulk_a - cm.alpha_gstar(g00, bulk_b)).norm();
  out.plain_residual = (bulk_a - bulk_b).norm();

  Rng rng(seed);
  out.central_valued = true;
  for (int q = 0; q < n_points; ++q) {
    Vec3 p = c.manifold.sample_point(rng);
    Vec3 u = c.manifold.sample_tangent(rng), v = c.manifold.sample_tangent(rng), w = c.manifold.sample_tangent(rng);
    std::vector<int> charts = c.charts_containing(p, 0.05);
    for (int i : charts) {
      Mat Hi = three_curvature_H(c, i, p, u, v, w);
      Mat probe = rng.algebra(cm, Side::H);
      if ((Hi * probe - probe * Hi).norm() > 1e-9 * std::max(1.0, Hi.norm())) out.central_valued = false;
      for (int j : charts) {
        if (i == j) continue;
        Mat Hj = three_curvature_H(c, j, p, u, v, w);
        out.pointwise_H_residual =
            std::max(out.pointwise_H_residual, (Hj - cm.alpha_gstar(c.g_at(i, j, p), Hi)).norm());
        out.pointwise_equal_residual = std::max(out.pointwise_equal_residual, (Hj - Hi).norm());
      }
    }
  }
  return out;
}

}  // namespace gerbe
