#include "gerbe/gerbe.hpp"

#include <algorithm>
#include <cmath>

namespace gerbe {

double GerbeCocycle::depth(std::initializer_list<int> ids, const Vec3& p) const {
  double d = 1e300;
  for (int i : ids) d = std::min(d, cover[i].depth(p));
  return d;
}

std::vector<int> GerbeCocycle::charts_containing(const Vec3& p, double margin) const {
  std::vector<int> out;
  for (int i = 0; i < n(); ++i)
    if (cover[i].depth(p) >= margin) out.push_back(i);
  return out;
}

void GerbeCocycle::finalize() {
  const int N = n();
  if (static_cast<int>(A.size()) != N || static_cast<int>(B.size()) != N || static_cast<int>(g.size()) != N * N ||
      static_cast<int>(a.size()) != N * N || static_cast<int>(f.size()) != N * N * N)
    throw ConstructionError("cocycle " + name + ": field arrays do not match the cover size");
  auto set1 = [this](FormField& F, int i) {
    const OpenSet& U = cover[i];
    F.domain = [U](const Vec3& p) { return U.depth(p); };
  };
  auto setn = [this](FormField& F, std::vector<int> ids) {
    std::vector<OpenSet> sets;
    for (int i : ids) sets.push_back(cover[i]);
    F.domain = [sets](const Vec3& p) {
      double d = 1e300;
      for (const OpenSet& U : sets) d = std::min(d, U.depth(p));
      return d;
    };
  };
  for (int i = 0; i < N; ++i) {
    set1(A[i], i);
    set1(B[i], i);
    A[i].side = Side::G;
    B[i].side = Side::H;
    for (int j = 0; j < N; ++j) {
      setn(g_of(i, j), {i, j});
      setn(a_of(i, j), {i, j});
      g_of(i, j).side = Side::G;
      g_of(i, j).group_valued = true;
      a_of(i, j).side = Side::H;
      for (int k = 0; k < N; ++k) {
        setn(f_of(i, j, k), {i, j, k});
        f_of(i, j, k).side = Side::H;
        f_of(i, j, k).group_valued = true;
      }
    }
  }
}

Mat curvature_R(const GerbeCocycle& c, int i, const Vec3& p, const Vec3& u, const Vec3& v) {
  if (!c.cover[i].contains(p)) throw ContainmentError("curvature_R: point outside the open set");
  Vec3 t[2] = {u, v};
  Mat Au = c.A_at(i, p, u), Av = c.A_at(i, p, v);
  return exterior_derivative(c.A[i], p, t, c.h_fd) + Au * Av - Av * Au;
}

Mat covariant_derivative(const GerbeCocycle& c, int i, const FormField& w, const Vec3& p, const Vec3* t,
                         bool force_fd, double h) {
  if (!c.cover[i].contains(p)) throw ContainmentError("covariant_derivative: point outside the open set");
  const int k = w.degree;
  Mat out = exterior_derivative(w, p, t, h > 0.0 ? h : c.h_fd, force_fd);
  for (int a = 0; a <= k; ++a) {
    Vec3 rest[3];
    int r = 0;
    for (int b = 0; b <= k; ++b)
      if (b != a) rest[r++] = t[b];
    double sign = a % 2 == 0 ? 1.0 : -1.0;
    out += sign * c.cm->alg_act(c.A_at(i, p, t[a]), w.eval(p, rest));
  }
  return out;
}

Mat three_curvature_H(const GerbeCocycle& c, int i, const Vec3& p, const Vec3& u, const Vec3& v, const Vec3& w,
                      bool force_fd) {
  Vec3 t[3] = {u, v, w};
  return covariant_derivative(c, i, c.B[i], p, t, force_fd);
}

Mat covariant_derivative_H(const GerbeCocycle& c, int i, const Vec3& p, const Vec3* t, double h) {
  FormField H;
  H.degree = 3;
  H.side = Side::H;
  H.eval = [&c, i](const Vec3& q, const Vec3* v) { return three_curvature_H(c, i, q, v[0], v[1], v[2]); };
  H.domain = c.cover[i].depth;
  return covariant_derivative(c, i, H, p, t, true, h);
}

CurvatureReport check_curvature(const GerbeCocycle& c, int n_points, std::uint64_t seed, double h_fd) {
  CurvatureReport rep;
  const CrossedModule& cm = *c.cm;
  Rng rng(seed);
  const double margin = c.cover.empty() ? 0.0 : c.cover[0].margin;
  for (int draw = 0; draw < 200 * n_points && rep.n_points < n_points; ++draw) {
    Vec3 p = c.manifold.sample_point(rng);
    Vec3 u = c.manifold.sample_tangent(rng), v = c.manifold.sample_tangent(rng), w = c.manifold.sample_tangent(rng);
    Vec3 x = c.manifold.sample_tangent(rng);
    std::vector<int> S = c.charts_containing(p, margin);
    // Single-chart fixtures have no overlaps; every covered point counts there.
    if (S.empty() || (c.n() > 1 && S.size() < 2)) continue;
    ++rep.n_points;
    for (int i : S) {
      Mat Hi = three_curvature_H(c, i, p, u, v, w);
      rep.t_of_H = std::max(rep.t_of_H, cm.t_alg(Hi).norm());
      for (int j : S) {
        Mat Hj = three_curvature_H(c, j, p, u, v, w);
        rep.equivariance = std::max(rep.equivariance, (Hj - cm.alpha_gstar(c.g_at(i, j, p), Hi)).norm());
      }
      Vec3 t4[4] = {u, v, w, x};
      rep.bianchi = std::max(rep.bianchi, covariant_derivative_H(c, i, p, t4, h_fd).norm());
      rep.bianchi_half = std::max(rep.bianchi_half, covariant_derivative_H(c, i, p, t4, 0.5 * h_fd).norm());
    }
  }
  return rep;
}

bool ValidationReport::pass() const {
  for (const auto& [k, r] : relations)
    if (!r.pass()) return false;
  return true;
}

std::vector<std::string> ValidationReport::failures() const {
  std::vector<std::string> out;
  for (const auto& [k, r] : relations)
    if (!r.pass()) out.push_back(k);
  return out;
}

ValidationReport validate_gerbe(const GerbeCocycle& c, int n_points, std::uint64_t seed, ValidationTolerances tol) {
  ValidationReport rep;
  rep.fixture = c.name;
  rep.n_points = n_points;
  rep.seed = seed;
  const CrossedModule& cm = *c.cm;
  auto init = [&](const char* key, double t, bool info = false) {
    RelationResult r;
    r.tolerance = t;
    r.informational = info;
    rep.relations[key] = r;
  };
  init("normalization", tol.algebraic);
  init("fake_curvature", tol.differential);
  init("A_transition", tol.differential);
  init("B_transition", tol.differential);
  init("g_triple", tol.algebraic);
  init("a_triple", tol.differential);
  init("a_triple_as_printed", tol.differential, true);
  init("f_quadruple", tol.algebraic);
  auto record = [&](const char* key, double v) {
    RelationResult& r = rep.relations[key];
    r.vacuous = false;
    ++r.n_samples;
    if (!(v <= r.max_residual)) r.max_residual = std::isnan(v) ? INFINITY : std::max(r.max_residual, v);
  };

  Rng rng(seed);
  const double margin = c.cover.empty() ? 0.0 : c.cover[0].margin;
  const int N = c.n();
  for (int sample = 0; sample < n_points; ++sample) {
    Vec3 p = c.manifold.sample_point(rng);
    Vec3 u = c.manifold.sample_tangent(rng), v = c.manifold.sample_tangent(rng);
    std::vector<int> S = c.charts_containing(p, margin);
    if (S.empty()) continue;
    std::map<std::pair<int, int>, Mat> G, Au;
    std::map<std::pair<int, int>, Mat> a_u;
    std::map<std::array<int, 3>, Mat> F;
    for (int i : S) {
      Au[{i, 0}] = c.A_at(i, p, u);
      for (int j : S) {
        G[{i, j}] = c.g_at(i, j, p);
        a_u[{i, j}] = c.a_at(i, j, p, u);
        for (int k : S) F[{i, j, k}] = c.f_at(i, j, k, p);
      }
    }
    const Mat eG = cm.identity(Side::G), eH = cm.identity(Side::H);
    for (int i : S) {
      record("normalization", (G[{i, i}] - eG).norm());
      record("normalization", a_u[{i, i}].norm());
      record("fake_curvature", (curvature_R(c, i, p, u, v) - cm.t_alg(c.B_at(i, p, u, v))).norm());
      for (int j : S) {
        record("normalization", (F[{i, i, j}] - eH).norm());
        record("normalization", (F[{i, j, j}] - eH).norm());
        const Mat& g = G[{i, j}];
        Mat ginv = cm.inverse(Side::G, g);
        Vec3 uu = u;
        Mat dg = exterior_derivative(c.g_of(i, j), p, &uu, c.h_fd);
        Mat rhsA = g * Au[{i, 0}] * ginv - dg * ginv - cm.t_alg(a_u[{i, j}]);
        record("A_transition", (c.A_at(j, p, u) - rhsA).norm());
        Vec3 uv[2] = {u, v};
        Mat av = c.a_at(i, j, p, v);
        Mat nabla = covariant_derivative(c, j, c.a_of(i, j), p, uv);
        Mat rhsB = cm.alpha_gstar(g, c.B_at(i, p, u, v)) - nabla - cm.bracket(a_u[{i, j}], av);
        record("B_transition", (c.B_at(j, p, u, v) - rhsB).norm());
        for (int k : S) {
          const Mat& f = F[{i, j, k}];
          record("g_triple", (G[{i, k}] - cm.t_group(f) * G[{j, k}] * G[{i, j}]).norm());
          Mat df = exterior_derivative(c.f_of(i, j, k), p, &uu, c.h_fd);
          Mat Ak = c.A_at(k, p, u);
          Mat common = cm.alpha_gstar(G[{j, k}], a_u[{i, j}]) + a_u[{j, k}];
          auto residual = [&](const Mat& w, const Mat& dw) {
            Mat winv = cm.inverse(Side::H, w);
            Mat lhs = w * a_u[{i, k}] * winv;
            Mat rhs = common + cm.alpha_hstar(Ak, w) * winv + dw * winv;
            return (lhs - rhs).norm();
          };
          Mat finv = cm.inverse(Side::H, f);
          record("a_triple", residual(finv, Mat(-finv * df * finv)));
          record("a_triple_as_printed", residual(f, df));
          for (int l : S) {
            Mat lhs = F[{i, k, l}] * cm.alpha(G[{k, l}], f);
            Mat rhs = F[{i, j, l}] * F[{j, k, l}];
            record("f_quadruple", (lhs - rhs).norm());
          }
        }
      }
    }
  }
  (void)N;
  return rep;
}

GerbeCocycle make_single_chart_gerbe(CrossedModulePtr cm, const ManifoldModel& manifold,
                                     const std::vector<OpenSet>& cover, const JetOneForm& beta, const FormField& z,
                                     const std::string& name) {
  if (cover.size() != 1) throw ConstructionError("make_single_chart_gerbe: cover must have one set");
  Rng rng(12345);
  for (int n = 0; n < 20; ++n) {
    Vec3 p = manifold.sample_point(rng), u = manifold.sample_tangent(rng), v = manifold.sample_tangent(rng);
    if (cm->t_alg(z(p, u, v)).norm() > 1e-12) throw ConstructionError("make_single_chart_gerbe: z is not in ker t");
  }
  GerbeCocycle c;
  c.name = name;
  c.cm = cm;
  c.manifold = manifold;
  c.cover = cover;
  const CrossedModule* raw = cm.get();
  c.A.push_back(one_form(beta, [raw](const Mat& Y) { return raw->t_alg(Y); }));
  c.B.push_back(add(curvature_form(beta), z));
  c.g.push_back(constant_group(cm->identity(Side::G), Side::G));
  c.a.push_back(zero_form(1, Side::H, cm->mat_size(Side::H)));
  c.f.push_back(constant_group(cm->identity(Side::H), Side::H));
  c.finalize();
  return c;
}

}  // namespace gerbe
