#include "gerbe/fixtures.hpp"

#include <cmath>

#include "gerbe/surfaces.hpp"

namespace gerbe {

namespace {

const cd kI(0.0, 1.0);

Mat scalar(cd v) {
  Mat m(1, 1);
  m(0, 0) = v;
  return m;
}

// Resizes all field arrays for a cover of size n and fills them with trivial data.
void fill_trivial(GerbeCocycle& c) {
  const CrossedModule& cm = *c.cm;
  const int n = c.n(), hs = cm.mat_size(Side::H), gs = cm.mat_size(Side::G);
  c.A.assign(n, zero_form(1, Side::G, gs));
  c.B.assign(n, zero_form(2, Side::H, hs));
  c.g.assign(n * n, constant_group(cm.identity(Side::G), Side::G));
  c.a.assign(n * n, zero_form(1, Side::H, hs));
  c.f.assign(n * n * n, constant_group(cm.identity(Side::H), Side::H));
}

// Matrix-valued 0-form xi = sum_a c_a(p) basis_a with analytic derivative.
struct MatrixFunction {
  std::vector<Mat> basis;
  std::vector<TrigSeries> coef;
  void eval(const Vec3& p, const Vec3* v, Mat& value, Mat& dvalue) const {
    int n = static_cast<int>(basis[0].rows());
    value = Mat::Zero(n, n);
    dvalue = Mat::Zero(n, n);
    for (std::size_t a = 0; a < basis.size(); ++a) {
      Jet j = coef[a](p);
      value += j.v * basis[a];
      if (v) dvalue += j.g.dot(*v) * basis[a];
    }
  }
};

// Multi-chart gerbe for an instance with t = id and alpha = conjugation.
GerbeCocycle twisted_conjugation_gerbe(const std::string& name, CrossedModulePtr cm, const ManifoldModel& manifold,
                                       const std::vector<OpenSet>& cover, std::uint64_t seed, bool lattice,
                                       double k_scale) {
  GerbeCocycle c;
  c.name = name;
  c.cm = cm;
  c.manifold = manifold;
  c.cover = cover;
  fill_trivial(c);
  const int n = c.n(), dims = manifold.dim;
  const auto& basis = cm->basis(Side::H);
  Rng rng(seed);
  std::vector<JetOneForm> conn;
  for (int i = 0; i < n; ++i) conn.push_back(JetOneForm::random(rng, basis, dims, 2, 0.25, k_scale, lattice));
  std::vector<std::shared_ptr<MatrixFunction>> xi(n * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      auto mf = std::make_shared<MatrixFunction>();
      mf->basis = basis;
      for (std::size_t a = 0; a < basis.size(); ++a)
        mf->coef.push_back(TrigSeries::random(rng, 2, 0.3, k_scale, lattice, dims));
      xi[i * n + j] = mf;
    }
  const CrossedModule* raw = cm.get();
  for (int i = 0; i < n; ++i) {
    c.A[i] = one_form(conn[i]);
    c.B[i] = curvature_form(conn[i]);
  }
  auto g_eval = [xi, n](int i, int j, const Vec3& p, const Vec3* v, Mat& g, Mat& dg) {
    if (i == j) {
      g = Mat::Identity(3, 3);
      dg = Mat::Zero(3, 3);
      return;
    }
    Mat x, dx;
    xi[i * n + j]->eval(p, v, x, dx);
    g = Mat::Identity(3, 3) + x + 0.5 * x * x;
    dg = dx + 0.5 * (dx * x + x * dx);
  };
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      FormField& g = c.g_of(i, j);
      g.eval = [g_eval, i, j](const Vec3& p, const Vec3*) {
        Mat v, dv;
        g_eval(i, j, p, nullptr, v, dv);
        return v;
      };
      g.deriv = [g_eval, i, j](const Vec3& p, const Vec3* t) {
        Mat v, dv;
        g_eval(i, j, p, t, v, dv);
        return dv;
      };
      FormField Ai = c.A[i], Aj = c.A[j];
      FormField& a = c.a_of(i, j);
      a.eval = [g_eval, raw, Ai, Aj, i, j](const Vec3& p, const Vec3* t) {
        Mat g, dg;
        g_eval(i, j, p, t, g, dg);
        Mat ginv = raw->inverse(Side::G, g);
        return Mat(g * Ai.eval(p, t) * ginv - dg * ginv - Aj.eval(p, t));
      };
      // With X = dg g^-1 and Ã = g A_i g^-1:
      // da(u,w) = g dA_i(u,w) g^-1 + [X_u, Ã(w)] - [X_w, Ã(u)] - [X_u, X_w] - dA_j(u,w).
      a.deriv = [g_eval, raw, Ai, Aj, i, j](const Vec3& p, const Vec3* t) {
        Mat g, du, dw;
        g_eval(i, j, p, &t[0], g, du);
        g_eval(i, j, p, &t[1], g, dw);
        Mat ginv = raw->inverse(Side::G, g);
        Mat Xu = du * ginv, Xw = dw * ginv;
        Mat Au = g * Ai.eval(p, &t[0]) * ginv, Aw = g * Ai.eval(p, &t[1]) * ginv;
        return Mat(g * Ai.deriv(p, t) * ginv + Xu * Aw - Aw * Xu - (Xw * Au - Au * Xw) - (Xu * Xw - Xw * Xu) -
                   Aj.deriv(p, t));
      };
    }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        if (i == j || j == k) continue;
        FormField& f = c.f_of(i, j, k);
        auto value = [g_eval, raw, i, j, k](const Vec3& p, const Vec3* t, Mat* dout) {
          Mat gik, dik, gij, dij, gjk, djk;
          g_eval(i, k, p, t, gik, dik);
          g_eval(i, j, p, t, gij, dij);
          g_eval(j, k, p, t, gjk, djk);
          Mat iij = raw->inverse(Side::G, gij), ijk = raw->inverse(Side::G, gjk);
          if (dout) {
            *dout = dik * iij * ijk - gik * iij * dij * iij * ijk - gik * iij * ijk * djk * ijk;
          }
          return Mat(gik * iij * ijk);
        };
        f.eval = [value](const Vec3& p, const Vec3*) { return value(p, nullptr, nullptr); };
        f.deriv = [value](const Vec3& p, const Vec3* t) {
          Mat d;
          value(p, t, &d);
          return d;
        };
      }
  c.finalize();
  return c;
}

}  // namespace

GerbeCocycle make_trivial_gerbe(CrossedModulePtr cm) {
  GerbeCocycle c;
  c.name = "trivial(" + cm->name() + ")";
  c.cm = cm;
  c.manifold = torus2();
  c.cover = torus_cover();
  fill_trivial(c);
  c.finalize();
  return c;
}

GerbeCocycle make_abelian_sphere_gerbe(int level, bool twisted) {
  GerbeCocycle c;
  c.name = "abelian_sphere(" + std::to_string(level) + ")";
  c.cm = make_bs1();
  c.manifold = punctured_space();
  c.cover = sphere_cover();
  fill_trivial(c);
  const int n = c.n();
  const double L = level;
  const double tw = twisted ? 1.0 : 0.0;
  Rng rng(20240601);
  std::vector<JetOneForm> beta;
  for (int i = 0; i < n; ++i) beta.push_back(JetOneForm::random(rng, {scalar(kI * (L * tw))}, 3, 2, 0.3, 1.5, false));
  std::vector<TrigSeries> theta(n * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (i != j) {
        theta[i * n + j] = TrigSeries::random(rng, 2, 0.5, 1.5, false, 3);
        if (!twisted) theta[i * n + j] = TrigSeries{};
      }
  FormField base;
  base.degree = 2;
  base.eval = [L](const Vec3& p, const Vec3* t) { return scalar(kI * (0.5 * L) * p.dot(t[0].cross(t[1]))); };
  base.deriv = [L](const Vec3&, const Vec3* t) { return scalar(kI * (1.5 * L) * t[0].dot(t[1].cross(t[2]))); };
  std::vector<FormField> b1;
  for (int i = 0; i < n; ++i) {
    b1.push_back(one_form(beta[i]));
    FormField exact;
    exact.degree = 2;
    FormField bi = b1[i];
    exact.eval = [bi](const Vec3& p, const Vec3* t) { return bi.deriv(p, t); };
    exact.deriv = [](const Vec3&, const Vec3*) { return scalar(0.0); };
    c.B[i] = add(base, exact, -1.0);
  }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      FormField bi = b1[i], bj = b1[j];
      TrigSeries th = theta[i * n + j];
      FormField& a = c.a_of(i, j);
      a.eval = [bi, bj, th, L](const Vec3& p, const Vec3* t) {
        return Mat(bj.eval(p, t) - bi.eval(p, t) + scalar(kI * L * th(p).g.dot(t[0])));
      };
      a.deriv = [bi, bj](const Vec3& p, const Vec3* t) { return Mat(bj.deriv(p, t) - bi.deriv(p, t)); };
    }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        if (i == j || j == k) continue;
        const TrigSeries* tij = &theta[i * n + j];
        TrigSeries ij = theta[i * n + j], jk = theta[j * n + k], ik = theta[i * n + k];
        (void)tij;
        auto phase = [ij, jk, ik](const Vec3& p) {
          Jet a = ij(p), b = jk(p), d = ik(p);
          return Jet{a.v + b.v - d.v, a.g + b.g - d.g};
        };
        FormField& f = c.f_of(i, j, k);
        f.eval = [phase, L](const Vec3& p, const Vec3*) { return scalar(std::exp(kI * L * phase(p).v)); };
        f.deriv = [phase, L](const Vec3& p, const Vec3* t) {
          Jet ph = phase(p);
          return scalar(std::exp(kI * L * ph.v) * kI * L * ph.g.dot(t[0]));
        };
      }
  c.finalize();
  return c;
}

GerbeCocycle make_abelian_plane_gerbe() {
  auto cm = make_bs1();
  Rng rng(777);
  JetOneForm beta = JetOneForm::random(rng, cm->basis(Side::H), 3, 2, 0.3, 1.5, false);
  std::vector<TrigSeries> coef;  // components along dy^dz, dz^dx, dx^dy
  for (int a = 0; a < 3; ++a) coef.push_back(TrigSeries::random(rng, 2, 0.4, 1.5, false, 3));
  FormField z;
  z.degree = 2;
  z.eval = [coef](const Vec3& p, const Vec3* t) {
    Vec3 w(coef[0](p).v, coef[1](p).v, coef[2](p).v);
    return scalar(kI * w.dot(t[0].cross(t[1])));
  };
  // z = i * (w . (u x v)), so dz(u,v,w) = i * div(w) * det(u,v,w).
  z.deriv = [coef](const Vec3& p, const Vec3* t) {
    double div = coef[0](p).g[0] + coef[1](p).g[1] + coef[2](p).g[2];
    return scalar(kI * div * t[0].dot(t[1].cross(t[2])));
  };
  ManifoldModel space{ManifoldKind::Euclidean, 3};
  return make_single_chart_gerbe(cm, space, plane_cover(), beta, z, "abelian_plane");
}

GerbeCocycle make_heisenberg_torus4_gerbe() {
  return twisted_conjugation_gerbe("heisenberg_torus4", make_heisenberg(), torus2(), torus_cover(), 4242, true, 0.0);
}

GerbeCocycle make_heisenberg_sphere_gerbe() {
  return twisted_conjugation_gerbe("heisenberg_sphere", make_heisenberg(), punctured_space(), sphere_cover(), 5151,
                                   false, 1.5);
}

namespace {
GerbeCocycle single_chart_fixture(CrossedModulePtr cm, std::uint64_t seed, const std::string& name) {
  Rng rng(seed);
  JetOneForm beta = JetOneForm::random(rng, cm->basis(Side::H), 3, 2, 0.3, 1.5, false);
  ManifoldModel space{ManifoldKind::Euclidean, 3};
  return make_single_chart_gerbe(cm, space, plane_cover(), beta, zero_form(2, Side::H, cm->mat_size(Side::H)), name);
}
}  // namespace

GerbeCocycle make_heisenberg_plane_gerbe() { return single_chart_fixture(make_heisenberg(), 31337, "heisenberg_plane"); }
GerbeCocycle make_su2_plane_gerbe() { return single_chart_fixture(make_su2_ad(), 27182, "su2_plane"); }

GerbeCocycle make_fixture(const std::string& spec) {
  ParsedName p = parse_name(spec);
  if (p.name == "trivial") return make_trivial_gerbe(make_crossed_module(p.args.empty() ? "heisenberg" : p.args[0]));
  if (p.name == "abelian_sphere") {
    int level = 1;
    if (!p.args.empty()) {
      try {
        std::size_t used = 0;
        level = std::stoi(p.args[0], &used);
        if (used != p.args[0].size()) throw std::invalid_argument("level");
      } catch (const std::exception&) {
        throw ConfigError("abelian_sphere: level must be an integer");
      }
    }
    if (std::abs(level) > 20) throw ConfigError("abelian_sphere: level out of range [-20, 20]");
    return make_abelian_sphere_gerbe(level);
  }
  if (!p.args.empty()) throw ConfigError("fixture " + p.name + " takes no arguments");
  if (p.name == "abelian_plane") return make_abelian_plane_gerbe();
  if (p.name == "heisenberg_plane") return make_heisenberg_plane_gerbe();
  if (p.name == "heisenberg_torus4") return make_heisenberg_torus4_gerbe();
  if (p.name == "heisenberg_sphere") return make_heisenberg_sphere_gerbe();
  if (p.name == "su2_plane") return make_su2_plane_gerbe();
  throw ConfigError("unknown fixture: " + spec);
}

std::vector<std::string> fixture_names() {
  return {"trivial",          "abelian_sphere(1)", "abelian_plane", "heisenberg_plane",
          "heisenberg_torus4", "heisenberg_sphere", "su2_plane"};
}

GerbeCocycle corrupt(const GerbeCocycle& c0, const std::string& kind, double amount) {
  GerbeCocycle c = c0;
  const CrossedModule& cm = *c.cm;
  Mat Z = cm.central_h();
  const int n = c.n();
  if (kind == "f") {
    if (n < 3) throw ConfigError("corrupt f: needs at least three charts");
    Mat k;
    if (Z.size() > 0) {
      k = cm.exp(Side::H, amount * Z);
    } else {
      k = -cm.identity(Side::H);
    }
    FormField old = c.f_of(0, 1, 2);
    FormField& f = c.f_of(0, 1, 2);
    f.eval = [old, k](const Vec3& p, const Vec3* t) { return Mat(old.eval(p, t) * k); };
    f.deriv = [old, k](const Vec3& p, const Vec3* t) { return Mat(old.deriv(p, t) * k); };
  } else if (kind == "g") {
    if (n < 2) throw ConfigError("corrupt g: needs at least two charts");
    if (cm.dim(Side::G) == 0 || Z.size() == 0) throw ConfigError("corrupt g: G has no central direction to use");
    Mat k = cm.exp(Side::G, amount * cm.t_alg(Z));
    FormField old = c.g_of(0, 1);
    FormField& g = c.g_of(0, 1);
    g.eval = [old, k](const Vec3& p, const Vec3* t) { return Mat(old.eval(p, t) * k); };
    g.deriv = [old, k](const Vec3& p, const Vec3* t) { return Mat(old.deriv(p, t) * k); };
  } else if (kind == "a") {
    if (n < 2) throw ConfigError("corrupt a: needs at least two charts");
    if (Z.size() == 0) throw ConfigError("corrupt a: no central algebra direction");
    FormField shift;
    shift.degree = 1;
    shift.eval = [Z, amount](const Vec3&, const Vec3* t) { return Mat(amount * t[0][0] * Z); };
    Mat zero = Mat::Zero(Z.rows(), Z.cols());
    shift.deriv = [zero](const Vec3&, const Vec3*) { return zero; };
    FormField& a = c.a_of(0, 1);
    a = add(a, shift);
  } else if (kind == "B") {
    if (n < 2) throw ConfigError("corrupt B: needs at least two charts");
    if (Z.size() == 0) throw ConfigError("corrupt B: no central algebra direction");
    FormField shift;
    shift.degree = 2;
    shift.eval = [Z, amount](const Vec3&, const Vec3* t) {
      return Mat(amount * (t[0][0] * t[1][1] - t[0][1] * t[1][0]) * Z);
    };
    Mat zero = Mat::Zero(Z.rows(), Z.cols());
    shift.deriv = [zero](const Vec3&, const Vec3*) { return zero; };
    c.B[0] = add(c.B[0], shift);
  } else {
    throw ConfigError("unknown corruption kind: " + kind + " (expected f, g, a or B)");
  }
  c.name = c0.name + "+corrupt_" + kind;
  c.finalize();
  return c;
}

}  // namespace gerbe
