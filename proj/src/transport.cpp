#include "gerbe/transport.hpp"

#include <sstream>

#include "gerbe/lie_integrator.hpp"

namespace gerbe {

namespace {

void require_inside(const GerbeCocycle& c, int i, const Vec3& p, const char* what) {
  if (c.cover[i].depth(p) <= 0.0) {
    std::ostringstream os;
    os << what << ": point (" << p.x() << ", " << p.y() << ", " << p.z() << ") leaves chart "
       << c.cover[i].label;
    throw ContainmentError(os.str());
  }
}

Mat inv_g(const GerbeCocycle& c, const Mat& g) { return c.cm->inverse(Side::G, g); }
Mat inv_h(const GerbeCocycle& c, const Mat& h) { return c.cm->inverse(Side::H, h); }

}  // namespace

Mat PathTransport::generator(double tau) const {
  Vec3 p = path_->point(tau);
  require_inside(*c_, i_, p, "hol_path");
  return -c_->A_at(i_, p, path_->velocity(tau));
}

Mat PathTransport::step(const Mat& U, double t0, double h) const {
  auto F = [this](double t) { return generator(t); };
  return order_ == HolOrder::LeftAction ? CF4::left_step(*c_->cm, Side::G, U, t0, h, F)
                                        : CF4::right_step(*c_->cm, Side::G, U, t0, h, F);
}

void TransportConfig::validate() const {
  if (ode_steps_per_unit < 16) throw ConfigError("transport: ode_steps_per_unit must be >= 16");
  if (quadrature_points < 1) throw ConfigError("transport: quadrature_points must be positive");
  if (!(tol_target > 0.0)) throw ConfigError("transport: tol_target must be positive");
  if (!(h_fd > 0.0)) throw ConfigError("transport: h_fd must be positive");
}

Mat compose_paths(const Mat& first, const Mat& second, HolOrder order) {
  return order == HolOrder::LeftAction ? Mat(second * first) : Mat(first * second);
}

Mat hol_path_matrix(const GerbeCocycle& c, int i, const Path& path, const TransportConfig& cfg) {
  require_inside(c, i, path.point(0.0), "hol_path");
  require_inside(c, i, path.point(1.0), "hol_path");
  PathTransport st(c, i, path, cfg.order);
  const int n = cfg.ode_steps_per_unit;
  const double h = 1.0 / n;
  Mat U = c.cm->identity(Side::G);
  for (int k = 0; k < n; ++k) {
    U = st.step(U, k * h, h);
    if ((k + 1) % kReprojectEvery == 0) U = c.cm->project(Side::G, U);
  }
  return U;
}

GroupElement hol_path(const GerbeCocycle& c, int i, const Path& path, const TransportConfig& cfg) {
  return {hol_path_matrix(c, i, path, cfg), Side::G};
}

TransportedIntegral transported_line_integral(const GerbeCocycle& c, int i, const Path& path, const Mat& U0,
                                              const std::function<Mat(double)>& integrand,
                                              const TransportConfig& cfg) {
  const CrossedModule& cm = *c.cm;
  PathTransport st(c, i, path, cfg.order);
  const QuadratureRule rule = gauss_legendre(cfg.quadrature_points);
  const int n = cfg.ode_steps_per_unit;
  const double h = 1.0 / n;
  Mat U = cm.identity(Side::G);
  Mat sum = cm.zero(Side::H);
  for (int k = 0; k < n; ++k) {
    const double t0 = k * h;
    for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
      const double dt = h * rule.nodes[q];
      Mat P = compose_paths(U0, st.step(U, t0, dt), cfg.order);
      sum += (h * rule.weights[q]) * cm.alpha_gstar(cm.inverse(Side::G, P), integrand(t0 + dt));
    }
    U = st.step(U, t0, h);
    if ((k + 1) % kReprojectEvery == 0) U = cm.project(Side::G, U);
  }
  return {sum, compose_paths(U0, U, cfg.order)};
}

Mat square_boundary_word(const GerbeCocycle& c, int i, const SquareMap& sigma, const TransportConfig& cfg) {
  Mat N = hol_path_matrix(c, i, sigma.row(0.0), cfg);
  Mat E = hol_path_matrix(c, i, sigma.column(1.0), cfg);
  Mat S = hol_path_matrix(c, i, sigma.row(1.0), cfg);
  Mat W = hol_path_matrix(c, i, sigma.column(0.0), cfg);
  return inv_g(c, N) * inv_g(c, E) * S * W;
}

LocalHolonomy hol_square(const GerbeCocycle& c, int i, const SquareMap& sigma, const TransportConfig& cfg) {
  const CrossedModule& cm = *c.cm;
  const Path left = sigma.column(0.0);
  PathTransport Ls(c, i, left, cfg.order);
  auto inner = [&](double s, const Mat& L) {
    auto integrand = [&](double t) {
      Frame f = sigma.frame(t, s);
      require_inside(c, i, f.point, "hol_square");
      return c.B_at(i, f.point, f.dt, f.ds);
    };
    return transported_line_integral(c, i, sigma.row(s), L, integrand, cfg).integral;
  };

  const int n = cfg.ode_steps_per_unit;
  const double h = 1.0 / n;
  Mat L = cm.identity(Side::G);
  Mat value = cm.identity(Side::H);
  for (int k = 0; k < n; ++k) {
    const double s0 = k * h;
    Mat X1 = inner(s0 + CF4::c1 * h, Ls.step(L, s0, CF4::c1 * h));
    Mat X2 = inner(s0 + CF4::c2 * h, Ls.step(L, s0, CF4::c2 * h));
    value = value * cm.exp(Side::H, h * (CF4::b * X1 + CF4::a * X2)) *
            cm.exp(Side::H, h * (CF4::a * X1 + CF4::b * X2));
    L = Ls.step(L, s0, h);
    if ((k + 1) % kReprojectEvery == 0) {
      value = cm.project(Side::H, value);
      L = cm.project(Side::G, L);
    }
  }

  LocalHolonomy out;
  out.value = {value, Side::H};
  out.target_residual = (cm.t_group(value) - square_boundary_word(c, i, sigma, cfg)).norm();
  out.flagged = out.target_residual > cfg.tol_target;
  out.provenance = "face chart " + c.cover[i].label;
  return out;
}

Mat edge_target_word(const GerbeCocycle& c, int i, int j, const Path& path, const TransportConfig& cfg) {
  Mat hi = hol_path_matrix(c, i, path, cfg);
  Mat hj = hol_path_matrix(c, j, path, cfg);
  Mat gx = c.g_at(i, j, path.point(0.0));
  Mat gy = c.g_at(i, j, path.point(1.0));
  return inv_g(c, hi) * inv_g(c, gy) * hj * gx;
}

LocalHolonomy hol_edge(const GerbeCocycle& c, int i, int j, const Path& path, const TransportConfig& cfg) {
  const CrossedModule& cm = *c.cm;
  require_inside(c, i, path.point(0.0), "hol_edge");
  PathTransport Uj(c, j, path, cfg.order);
  const Mat gx = c.g_at(i, j, path.point(0.0));
  auto generator = [&](double t, const Mat& U) {
    Vec3 p = path.point(t);
    require_inside(c, i, p, "hol_edge");
    Mat conj = cm.inverse(Side::G, compose_paths(gx, U, cfg.order));
    return cm.alpha_gstar(conj, c.a_at(i, j, p, path.velocity(t)));
  };

  const int n = cfg.ode_steps_per_unit;
  const double h = 1.0 / n;
  Mat U = cm.identity(Side::G);
  Mat W = cm.identity(Side::H);
  for (int k = 0; k < n; ++k) {
    const double t0 = k * h;
    Mat X1 = generator(t0 + CF4::c1 * h, Uj.step(U, t0, CF4::c1 * h));
    Mat X2 = generator(t0 + CF4::c2 * h, Uj.step(U, t0, CF4::c2 * h));
    W = W * cm.exp(Side::H, h * (CF4::b * X1 + CF4::a * X2)) * cm.exp(Side::H, h * (CF4::a * X1 + CF4::b * X2));
    U = Uj.step(U, t0, h);
    if ((k + 1) % kReprojectEvery == 0) {
      W = cm.project(Side::H, W);
      U = cm.project(Side::G, U);
    }
  }

  LocalHolonomy out;
  out.value = {W, Side::H};
  out.target_residual = (cm.t_group(W) - edge_target_word(c, i, j, path, cfg)).norm();
  out.flagged = out.target_residual > cfg.tol_target;
  out.provenance = "edge " + c.cover[i].label + "|" + c.cover[j].label;
  return out;
}

Mat vertex_target_word(const GerbeCocycle& c, int i, int j, int k, int l, const Vec3& x) {
  return inv_g(c, c.g_at(i, k, x)) * inv_g(c, c.g_at(k, l, x)) * c.g_at(j, l, x) * c.g_at(i, j, x);
}

LocalHolonomy hol_vertex(const GerbeCocycle& c, int i, int j, int k, int l, const Vec3& x) {
  for (int id : {i, j, k, l}) require_inside(c, id, x, "hol_vertex");
  const CrossedModule& cm = *c.cm;
  Mat inner = cm.alpha(inv_g(c, c.g_at(k, l, x)), c.f_at(j, k, l, x)) * inv_h(c, c.f_at(i, j, k, x));
  Mat value = cm.alpha(inv_g(c, c.g_at(i, k, x)), inner);
  LocalHolonomy out;
  out.value = {value, Side::H};
  out.target_residual = (cm.t_group(value) - vertex_target_word(c, i, j, k, l, x)).norm();
  out.flagged = out.target_residual > 1e-10;
  out.provenance = "vertex " + c.cover[i].label + "," + c.cover[j].label + "," + c.cover[k].label + "," +
                   c.cover[l].label;
  return out;
}

CubeResult check_edge_cube(const GerbeCocycle& c, int i, int j, const SquareMap& sigma,
                           const TransportConfig& cfg) {
  const CrossedModule& cm = *c.cm;
  const Path top = sigma.row(0.0), bottom = sigma.row(1.0);
  const Path left = sigma.column(0.0), right = sigma.column(1.0);

  Mat front = hol_edge(c, i, j, top, cfg).value.matrix;
  Mat side_left = hol_edge(c, i, j, left, cfg).value.matrix;
  Mat face_i = hol_square(c, i, sigma, cfg).value.matrix;
  Mat back = hol_edge(c, i, j, bottom, cfg).value.matrix;
  Mat face_j = hol_square(c, j, sigma, cfg).value.matrix;
  Mat side_right = hol_edge(c, i, j, right, cfg).value.matrix;

  Mat hol_i_left = hol_path_matrix(c, i, left, cfg);
  Mat hol_i_right = hol_path_matrix(c, i, right, cfg);
  Mat hol_j_left = hol_path_matrix(c, j, left, cfg);
  Mat hol_j_right = hol_path_matrix(c, j, right, cfg);
  Mat hol_j_top = hol_path_matrix(c, j, top, cfg);
  Mat g00 = c.g_at(i, j, sigma(0.0, 0.0));
  Mat g0s = c.g_at(i, j, sigma(0.0, 1.0));
  Mat gt0 = c.g_at(i, j, sigma(1.0, 0.0));
  Mat gts = c.g_at(i, j, sigma(1.0, 1.0));

  Mat x3 = inv_g(c, g00);
  Mat x2 = x3 * inv_g(c, hol_j_left) * g0s;
  Mat x1 = x2 * hol_i_left;
  Mat x4 = x3 * inv_g(c, hol_j_top) * gt0;
  Mat x4_printed = x3 * hol_j_top * hol_j_right * gts * hol_i_right;

  auto rhs = [&](const Mat& last) {
    return Mat(side_left * cm.alpha(x1, face_i) * cm.alpha(x2, back) * cm.alpha(x3, inv_h(c, face_j)) *
               cm.alpha(last, inv_h(c, side_right)));
  };
  return {(front - rhs(x4)).norm(), (front - rhs(x4_printed)).norm()};
}

CubeResult check_vertex_cube(const GerbeCocycle& c, int i, int j, int k, int l, const Path& path,
                             const TransportConfig& cfg) {
  const CrossedModule& cm = *c.cm;
  const Vec3 x = path.point(0.0), y = path.point(1.0);
  Mat front = hol_vertex(c, i, j, k, l, x).value.matrix;
  Mat back = hol_vertex(c, i, j, k, l, y).value.matrix;
  Mat e_ij = hol_edge(c, i, j, path, cfg).value.matrix;
  Mat e_ik = hol_edge(c, i, k, path, cfg).value.matrix;
  Mat e_jl = hol_edge(c, j, l, path, cfg).value.matrix;
  Mat e_kl = hol_edge(c, k, l, path, cfg).value.matrix;

  Mat hi = hol_path_matrix(c, i, path, cfg);
  Mat hj = hol_path_matrix(c, j, path, cfg);
  Mat hk = hol_path_matrix(c, k, path, cfg);
  Mat hl = hol_path_matrix(c, l, path, cfg);

  Mat y3 = inv_g(c, c.g_at(i, j, x));
  Mat y2 = y3 * inv_g(c, hj) * c.g_at(i, j, y);
  Mat y1 = y2 * hi;
  Mat y1_printed = y3 * hj * c.g_at(i, j, y) * hi;
  Mat y4 = y3 * inv_g(c, c.g_at(j, l, x)) * inv_g(c, hl) * c.g_at(k, l, y) * hk;

  auto rhs = [&](const Mat& second) {
    return Mat(e_ij * cm.alpha(second, inv_h(c, e_ik)) * cm.alpha(y2, back) * cm.alpha(y3, e_jl) *
               cm.alpha(y4, inv_h(c, e_kl)));
  };
  return {(front - rhs(y1)).norm(), (front - rhs(y1_printed)).norm()};
}

}  // namespace gerbe
