#include "gerbe/forms.hpp"

#include <cmath>

namespace gerbe {

namespace {

void check_stencil(const FormField& f, const Vec3& q) {
  if (f.domain && !(f.domain(q) > 0.0)) throw ContainmentError("finite-difference stencil leaves the open set");
}

Mat directional(const FormField& f, const Vec3& p, const Vec3& dir, const Vec3* args, double h) {
  Vec3 qp = p + h * dir, qm = p - h * dir;
  check_stencil(f, qp);
  check_stencil(f, qm);
  return (f.eval(qp, args) - f.eval(qm, args)) / (2.0 * h);
}

// Derivative of beta's component form along x, evaluated on y.
Mat dbeta_along(const std::array<std::array<Mat, 3>, 3>& dc, const Vec3& x, const Vec3& y) {
  Mat out = Mat::Zero(dc[0][0].rows(), dc[0][0].cols());
  for (int nu = 0; nu < 3; ++nu)
    for (int mu = 0; mu < 3; ++mu)
      if (x[nu] != 0.0 && y[mu] != 0.0) out += x[nu] * y[mu] * dc[nu][mu];
  return out;
}

Mat contract(const std::array<Mat, 3>& c, const Vec3& v) { return v[0] * c[0] + v[1] * c[1] + v[2] * c[2]; }

Mat d_of(const std::array<std::array<Mat, 3>, 3>& dc, const Vec3& u, const Vec3& w) {
  return dbeta_along(dc, u, w) - dbeta_along(dc, w, u);
}

}  // namespace

Mat exterior_derivative(const FormField& f, const Vec3& p, const Vec3* t, double h, bool force_fd) {
  if (f.degree > 3) throw Error("exterior_derivative: degree must be at most 3");
  if (f.deriv && !force_fd) return f.deriv(p, t);
  if (f.degree == 0) return directional(f, p, t[0], nullptr, h);
  // Constant vector fields: d w(v_0..v_k) = sum_a (-1)^a D_{v_a} w(.. v_a omitted ..).
  Mat out;
  for (int a = 0; a <= f.degree; ++a) {
    Vec3 rest[3];
    for (int b = 0, r = 0; b <= f.degree; ++b)
      if (b != a) rest[r++] = t[b];
    Mat term = directional(f, p, t[a], rest, h);
    if (a == 0) out = term;
    else out += (a % 2 == 0 ? 1.0 : -1.0) * term;
  }
  return out;
}

Jet TrigSeries::operator()(const Vec3& p) const {
  Jet j;
  j.v = constant;
  for (const Term& t : terms) {
    double arg = t.k.dot(p) + t.phase;
    j.v += t.amp * std::sin(arg);
    j.g += t.amp * std::cos(arg) * t.k;
  }
  return j;
}

TrigSeries TrigSeries::random(Rng& rng, int n_terms, double amp, double k_scale, bool lattice, int dims) {
  TrigSeries s;
  for (int n = 0; n < n_terms; ++n) {
    Vec3 k = Vec3::Zero();
    for (int d = 0; d < dims; ++d) {
      if (lattice) {
        k[d] = 2.0 * 3.14159265358979323846 * (rng.index(3) - 1);
      } else {
        k[d] = rng.uniform(-k_scale, k_scale);
      }
    }
    s.terms.push_back({rng.uniform(-amp, amp), k, rng.uniform(0.0, 6.283185307179586)});
  }
  s.constant = rng.uniform(-amp, amp);
  return s;
}

void JetOneForm::jets(const Vec3& p, std::array<Mat, 3>& comps, std::array<std::array<Mat, 3>, 3>& dcomps) const {
  int n = size();
  for (int mu = 0; mu < 3; ++mu) {
    comps[mu] = Mat::Zero(n, n);
    for (int nu = 0; nu < 3; ++nu) dcomps[nu][mu] = Mat::Zero(n, n);
  }
  for (int mu = 0; mu < 3; ++mu) {
    for (std::size_t a = 0; a < coef[mu].size(); ++a) {
      if (coef[mu][a].terms.empty() && coef[mu][a].constant == 0.0) continue;
      Jet j = coef[mu][a](p);
      comps[mu] += j.v * basis[a];
      for (int nu = 0; nu < 3; ++nu)
        if (j.g[nu] != 0.0) dcomps[nu][mu] += j.g[nu] * basis[a];
    }
  }
}

Mat JetOneForm::value(const Vec3& p, const Vec3& v) const {
  int n = size();
  Mat out = Mat::Zero(n, n);
  for (int mu = 0; mu < 3; ++mu) {
    if (v[mu] == 0.0) continue;
    for (std::size_t a = 0; a < coef[mu].size(); ++a) {
      if (coef[mu][a].terms.empty() && coef[mu][a].constant == 0.0) continue;
      out += (v[mu] * coef[mu][a](p).v) * basis[a];
    }
  }
  return out;
}

JetOneForm JetOneForm::zero(const std::vector<Mat>& basis) {
  JetOneForm f;
  f.basis = basis;
  for (int mu = 0; mu < 3; ++mu) f.coef[mu].assign(basis.size(), TrigSeries{});
  return f;
}

JetOneForm JetOneForm::random(Rng& rng, const std::vector<Mat>& basis, int dims, int n_terms, double amp,
                              double k_scale, bool lattice) {
  JetOneForm f = zero(basis);
  for (int mu = 0; mu < dims; ++mu)
    for (std::size_t a = 0; a < basis.size(); ++a)
      f.coef[mu][a] = TrigSeries::random(rng, n_terms, amp, k_scale, lattice, dims);
  return f;
}

FormField one_form(const JetOneForm& beta, std::function<Mat(const Mat&)> map) {
  FormField f;
  f.degree = 1;
  auto apply = [map](const Mat& m) { return map ? map(m) : m; };
  f.eval = [beta, apply](const Vec3& p, const Vec3* v) { return apply(beta.value(p, v[0])); };
  f.deriv = [beta, apply](const Vec3& p, const Vec3* v) {
    std::array<Mat, 3> c;
    std::array<std::array<Mat, 3>, 3> dc;
    beta.jets(p, c, dc);
    return apply(d_of(dc, v[0], v[1]));
  };
  return f;
}

FormField curvature_form(const JetOneForm& beta) {
  FormField f;
  f.degree = 2;
  f.eval = [beta](const Vec3& p, const Vec3* v) {
    std::array<Mat, 3> c;
    std::array<std::array<Mat, 3>, 3> dc;
    beta.jets(p, c, dc);
    Mat bu = contract(c, v[0]), bw = contract(c, v[1]);
    return Mat(d_of(dc, v[0], v[1]) + bu * bw - bw * bu);
  };
  // d(d beta) = 0, so only the bracket term contributes and first derivatives suffice.
  f.deriv = [beta](const Vec3& p, const Vec3* v) {
    std::array<Mat, 3> c;
    std::array<std::array<Mat, 3>, 3> dc;
    beta.jets(p, c, dc);
    auto D = [&](const Vec3& x, const Vec3& y, const Vec3& z) {
      Mat dy = dbeta_along(dc, x, y), dz = dbeta_along(dc, x, z);
      Mat by = contract(c, y), bz = contract(c, z);
      return Mat(dy * bz - bz * dy + by * dz - dz * by);
    };
    return Mat(D(v[0], v[1], v[2]) - D(v[1], v[0], v[2]) + D(v[2], v[0], v[1]));
  };
  return f;
}

FormField zero_form(int degree, Side side, int size) {
  FormField f;
  f.degree = degree;
  f.side = side;
  f.eval = [size](const Vec3&, const Vec3*) { return Mat(Mat::Zero(size, size)); };
  f.deriv = f.eval;
  return f;
}

FormField constant_group(const Mat& value, Side side) {
  FormField f;
  f.degree = 0;
  f.side = side;
  f.group_valued = true;
  f.eval = [value](const Vec3&, const Vec3*) { return value; };
  Mat z = Mat::Zero(value.rows(), value.cols());
  f.deriv = [z](const Vec3&, const Vec3*) { return z; };
  return f;
}

FormField add(const FormField& a, const FormField& b, double scale_b) {
  FormField f = a;
  f.eval = [a, b, scale_b](const Vec3& p, const Vec3* v) { return Mat(a.eval(p, v) + scale_b * b.eval(p, v)); };
  if (a.deriv && b.deriv)
    f.deriv = [a, b, scale_b](const Vec3& p, const Vec3* v) { return Mat(a.deriv(p, v) + scale_b * b.deriv(p, v)); };
  else
    f.deriv = nullptr;
  return f;
}

}  // namespace gerbe
