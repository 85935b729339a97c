#include "gerbe/glue.hpp"

#include "gerbe/rng.hpp"

#include <numeric>
#include <sstream>

namespace gerbe {

namespace {

Mat inv_g(const CrossedModule& cm, const Mat& g) { return cm.inverse(Side::G, g); }
Mat inv_h(const CrossedModule& cm, const Mat& h) { return cm.inverse(Side::H, h); }

void require_match(const Mat& a, const Mat& b, double tol, const char* what) {
  double d = (a - b).norm();
  if (d > tol) {
    std::ostringstream os;
    os << what << ": shared edge labels differ by " << d;
    throw EdgeMismatch(os.str());
  }
}

}  // namespace

Mat square_target(const CrossedModule& cm, const DecoratedSquare& s) {
  return inv_g(cm, s.top) * inv_g(cm, s.right) * s.bottom * s.left;
}

double target_residual(const CrossedModule& cm, const DecoratedSquare& s) {
  return (cm.t_group(s.value) - square_target(cm, s)).norm();
}

DecoratedSquare make_valid_square(const CrossedModule& cm, const Mat& value, const Mat& top, const Mat& left,
                                  const Mat& bottom) {
  DecoratedSquare s;
  s.value = value;
  s.top = top;
  s.left = left;
  s.bottom = bottom;
  s.right = bottom * left * inv_g(cm, cm.t_group(value)) * inv_g(cm, top);
  return s;
}

double sample_interchange(const CrossedModule& cm, int n_samples, std::uint64_t seed) {
  Rng rng(seed);
  double worst = 0.0;
  auto g = [&] { return rng.group(cm, Side::G); };
  auto h = [&] { return rng.group(cm, Side::H); };
  for (int k = 0; k < n_samples; ++k) {
    DecoratedSquare tl = make_valid_square(cm, h(), g(), g(), g());
    DecoratedSquare tr = make_valid_square(cm, h(), g(), tl.right, g());
    DecoratedSquare bl = make_valid_square(cm, h(), tl.bottom, g(), g());
    DecoratedSquare br = make_valid_square(cm, h(), tr.bottom, bl.right, g());
    worst = std::max(worst, check_interchange(cm, tl, tr, bl, br));
  }
  return worst;
}

DecoratedSquare compose_h(const CrossedModule& cm, const DecoratedSquare& left, const DecoratedSquare& right,
                          double tol) {
  require_match(left.right, right.left, tol, "compose_h");
  DecoratedSquare out;
  Mat conj = inv_g(cm, left.left) * inv_g(cm, left.bottom) * left.right;
  out.value = left.value * cm.alpha(conj, right.value);
  out.top = right.top * left.top;
  out.bottom = right.bottom * left.bottom;
  out.left = left.left;
  out.right = right.right;
  out.anchor_col = left.anchor_col;
  out.anchor_row = left.anchor_row;
  return out;
}

DecoratedSquare compose_v(const CrossedModule& cm, const DecoratedSquare& top, const DecoratedSquare& bottom,
                          double tol) {
  require_match(top.bottom, bottom.top, tol, "compose_v");
  DecoratedSquare out;
  out.value = top.value * cm.alpha(inv_g(cm, top.left), bottom.value);
  out.top = top.top;
  out.bottom = bottom.bottom;
  out.left = bottom.left * top.left;
  out.right = bottom.right * top.right;
  out.anchor_col = top.anchor_col;
  out.anchor_row = top.anchor_row;
  return out;
}

double check_interchange(const CrossedModule& cm, const DecoratedSquare& tl, const DecoratedSquare& tr,
                         const DecoratedSquare& bl, const DecoratedSquare& br) {
  DecoratedSquare rows_first = compose_v(cm, compose_h(cm, tl, tr), compose_h(cm, bl, br));
  DecoratedSquare cols_first = compose_h(cm, compose_v(cm, tl, bl), compose_v(cm, tr, br));
  return (rows_first.value - cols_first.value).norm();
}

DecoratedGrid build_decorated_grid(const GerbeCocycle& c, const SquareMap& sigma, const GridAssignment& grid,
                                   const TransportConfig& cfg, LocalDiagnostics* diag) {
  const CrossedModule& cm = *c.cm;
  const GridElements el = extract_grid_elements(sigma, grid);
  const int n = grid.n, m = grid.m;
  DecoratedGrid g;
  g.cols = 2 * n - 1;
  g.rows = 2 * m - 1;
  g.squares.resize(g.cols * g.rows);
  LocalDiagnostics local;
  auto note = [&local](std::vector<double>& list, const LocalHolonomy& h, double gate) {
    list.push_back(h.target_residual);
    local.max_residual = std::max(local.max_residual, h.target_residual);
    if (h.target_residual > gate) ++local.flagged;
  };

  struct Sides {
    Mat N, E, S, W;
  };
  std::vector<Sides> sides(n * m);
  for (const auto& face : el.faces) {
    Sides& sd = sides[face.l * n + face.k];
    sd.N = hol_path_matrix(c, face.chart, face.map.row(0.0), cfg);
    sd.E = hol_path_matrix(c, face.chart, face.map.column(1.0), cfg);
    sd.S = hol_path_matrix(c, face.chart, face.map.row(1.0), cfg);
    sd.W = hol_path_matrix(c, face.chart, face.map.column(0.0), cfg);
    LocalHolonomy h = hol_square(c, face.chart, face.map, cfg);
    note(local.face_residuals, h, cfg.tol_target);
    DecoratedSquare& sq = g.at(2 * face.k, 2 * face.l);
    sq.value = h.value.matrix;
    sq.top = sd.N;
    sq.right = sd.E;
    sq.bottom = sd.S;
    sq.left = sd.W;
  }
  for (const auto& e : el.vertical_edges) {
    LocalHolonomy h = hol_edge(c, e.first, e.second, e.path, cfg);
    note(local.edge_residuals, h, cfg.tol_target);
    DecoratedSquare& sq = g.at(2 * e.k + 1, 2 * e.l);
    sq.value = inv_h(cm, h.value.matrix);
    sq.top = c.g_at(e.first, e.second, e.path.point(0.0));
    sq.bottom = c.g_at(e.first, e.second, e.path.point(1.0));
    sq.left = sides[e.l * n + e.k].E;
    sq.right = sides[e.l * n + e.k + 1].W;
  }
  for (const auto& e : el.horizontal_edges) {
    LocalHolonomy h = hol_edge(c, e.first, e.second, e.path, cfg);
    note(local.edge_residuals, h, cfg.tol_target);
    DecoratedSquare& sq = g.at(2 * e.k, 2 * e.l + 1);
    sq.value = h.value.matrix;
    sq.top = sides[e.l * n + e.k].S;
    sq.bottom = sides[(e.l + 1) * n + e.k].N;
    sq.left = c.g_at(e.first, e.second, e.path.point(0.0));
    sq.right = c.g_at(e.first, e.second, e.path.point(1.0));
  }
  for (const auto& v : el.vertices) {
    LocalHolonomy h = hol_vertex(c, v.i, v.j, v.kk, v.ll, v.point);
    note(local.vertex_residuals, h, 1e-10);
    DecoratedSquare& sq = g.at(2 * v.k + 1, 2 * v.l + 1);
    sq.value = h.value.matrix;
    sq.top = c.g_at(v.i, v.kk, v.point);
    sq.right = c.g_at(v.kk, v.ll, v.point);
    sq.bottom = c.g_at(v.j, v.ll, v.point);
    sq.left = c.g_at(v.i, v.j, v.point);
  }
  for (int r = 0; r < g.rows; ++r)
    for (int q = 0; q < g.cols; ++q) {
      g.at(q, r).anchor_col = q;
      g.at(q, r).anchor_row = r;
    }
  if (diag) *diag = std::move(local);
  return g;
}

Mat staircase_holonomy(const CrossedModule& cm, const DecoratedGrid& g, int col, int row) {
  Mat P = cm.identity(Side::G);
  for (int r = 0; r < g.rows; ++r) P = g.at(0, r).left * P;
  for (int q = 0; q < col; ++q) P = g.at(q, g.rows - 1).bottom * P;
  for (int r = g.rows - 1; r >= row; --r) P = inv_g(cm, g.at(col, r).left) * P;
  return P;
}

Mat overline(const CrossedModule& cm, const DecoratedGrid& g, int col, int row, const Mat& X) {
  return cm.alpha(inv_g(cm, staircase_holonomy(cm, g, col, row)), X);
}

Mat overline_algebra(const CrossedModule& cm, const DecoratedGrid& g, int col, int row, const Mat& Y) {
  return cm.alpha_gstar(inv_g(cm, staircase_holonomy(cm, g, col, row)), Y);
}

GlobalHolonomy assemble_global_hol(const GerbeCocycle& c, const SquareMap& sigma, const GridAssignment& grid,
                                   const TransportConfig& cfg) {
  cfg.validate();
  ContainmentDiagnostic cd = check_assignment(sigma, c.cover, grid);
  if (!cd.ok) {
    std::ostringstream os;
    os << "assignment " << grid.describe() << " not admissible: cell (" << cd.worst_k << ", " << cd.worst_l
       << ") depth " << cd.worst_depth;
    throw ContainmentError(os.str());
  }
  const CrossedModule& cm = *c.cm;
  GlobalHolonomy out;
  out.grid = grid;
  out.basepoint_chart = grid.at(0, 0);
  DecoratedGrid g = build_decorated_grid(c, sigma, grid, cfg, &out.locals);

  std::vector<DecoratedSquare> columns;
  for (int q = 0; q < g.cols; ++q) {
    DecoratedSquare acc = g.at(q, 0);
    for (int r = 1; r < g.rows; ++r) acc = compose_v(cm, acc, g.at(q, r));
    columns.push_back(acc);
  }
  DecoratedSquare total = columns[0];
  for (int q = 1; q < g.cols; ++q) total = compose_h(cm, total, columns[q]);

  Mat explicit_product = cm.identity(Side::H);
  for (int q = 0; q < g.cols; ++q)
    for (int r = 0; r < g.rows; ++r) explicit_product = explicit_product * overline(cm, g, q, r, g.at(q, r).value);

  out.value = total.value;
  out.composite = total;
  out.target_residual = target_residual(cm, total);
  out.overline_residual = (explicit_product - total.value).norm();
  return out;
}

double check_subdivision(const GerbeCocycle& c, const SquareMap& sigma, const GridAssignment& grid,
                         const GridAssignment& refined, const TransportConfig& cfg) {
  return (assemble_global_hol(c, sigma, grid, cfg).value - assemble_global_hol(c, sigma, refined, cfg).value)
      .norm();
}

DecoratedSquare transition_strip(const GerbeCocycle& c, const std::vector<Path>& pieces,
                                 const std::vector<int>& charts_a, const std::vector<int>& charts_b,
                                 const TransportConfig& cfg) {
  const CrossedModule& cm = *c.cm;
  DecoratedSquare strip;
  for (std::size_t q = 0; q < pieces.size(); ++q) {
    const int a = charts_a[q], b = charts_b[q];
    DecoratedSquare e;
    e.value = hol_edge(c, a, b, pieces[q], cfg).value.matrix;
    e.top = hol_path_matrix(c, a, pieces[q], cfg);
    e.bottom = hol_path_matrix(c, b, pieces[q], cfg);
    e.left = c.g_at(a, b, pieces[q].point(0.0));
    e.right = c.g_at(a, b, pieces[q].point(1.0));
    if (q == 0) {
      strip = e;
      continue;
    }
    const Vec3 x = pieces[q - 1].point(1.0);
    const int pa = charts_a[q - 1], pb = charts_b[q - 1];
    DecoratedSquare v;
    v.value = hol_vertex(c, pa, pb, a, b, x).value.matrix;
    v.top = c.g_at(pa, a, x);
    v.right = c.g_at(a, b, x);
    v.bottom = c.g_at(pb, b, x);
    v.left = c.g_at(pa, pb, x);
    strip = compose_h(cm, compose_h(cm, strip, v, 1e-8), e, 1e-8);
  }
  return strip;
}

TransformationResult check_transformation(const GerbeCocycle& c, const SquareMap& sigma, const GridAssignment& a,
                                          const GridAssignment& b, const TransportConfig& cfg) {
  const CrossedModule& cm = *c.cm;
  const int n = std::lcm(a.n, b.n), m = std::lcm(a.m, b.m);
  const GridAssignment ga = refine(a, n / a.n, m / a.m);
  const GridAssignment gb = refine(b, n / b.n, m / b.m);
  GlobalHolonomy hol_a = assemble_global_hol(c, sigma, ga, cfg);
  GlobalHolonomy hol_b = assemble_global_hol(c, sigma, gb, cfg);

  const GridElements el = extract_grid_elements(sigma, ga);
  auto wall = [&](const std::vector<Path>& pieces, auto cell) {
    std::vector<int> ca, cb;
    for (std::size_t q = 0; q < pieces.size(); ++q) {
      auto [k, l] = cell(static_cast<int>(q));
      ca.push_back(ga.at(k, l));
      cb.push_back(gb.at(k, l));
    }
    return transition_strip(c, pieces, ca, cb, cfg);
  };
  DecoratedSquare N = wall(el.north, [](int k) { return std::pair{k, 0}; });
  DecoratedSquare S = wall(el.south, [m](int k) { return std::pair{k, m - 1}; });
  DecoratedSquare W = wall(el.west, [](int l) { return std::pair{0, l}; });
  DecoratedSquare E = wall(el.east, [n](int l) { return std::pair{n - 1, l}; });

  const Mat g00 = N.left;
  const Mat x3 = inv_g(cm, g00);
  const Mat x2 = x3 * inv_g(cm, W.bottom) * W.right;
  const Mat x1 = x2 * W.top;
  const Mat x4 = x3 * inv_g(cm, N.bottom) * N.right;
  Mat inner = cm.alpha(x4, inv_h(cm, E.value)) * inv_h(cm, N.value) * W.value * cm.alpha(x1, hol_a.value) *
              cm.alpha(x2, S.value);
  Mat predicted = cm.alpha(g00, inner);

  TransformationResult r;
  r.hol_a = hol_a.value;
  r.hol_b = hol_b.value;
  r.g00 = g00;
  r.residual = (hol_b.value - predicted).norm();
  r.conjugation_residual = (hol_b.value - cm.alpha(g00, hol_a.value)).norm();
  r.plain_residual = (hol_b.value - hol_a.value).norm();
  return r;
}

}  // namespace gerbe
