#include "gerbe/crossed_module.hpp"

#include <algorithm>
#include <cmath>

#include "gerbe/conventions.hpp"
#include "gerbe/rng.hpp"

namespace gerbe {

namespace {

constexpr double kPi = 3.14159265358979323846;
const cd I_(0.0, 1.0);

Mat unit(int n, int r, int c) {
  Mat m = Mat::Zero(n, n);
  m(r, c) = 1.0;
  return m;
}

// ---------------------------------------------------------------- BS^1

class Bs1 final : public CrossedModule {
 public:
  Bs1() {
    Mat i(1, 1);
    i(0, 0) = I_;
    basis_h_.push_back(i);
  }
  std::string name() const override { return "bs1"; }
  int mat_size(Side) const override { return 1; }
  const std::vector<Mat>& basis(Side s) const override { return s == Side::G ? basis_g_ : basis_h_; }
  Mat t_group(const Mat&) const override { return Mat::Identity(1, 1); }
  Mat t_alg(const Mat&) const override { return Mat::Zero(1, 1); }
  Mat alpha(const Mat&, const Mat& h) const override { return h; }
  Mat alpha_gstar(const Mat&, const Mat& Y) const override { return Y; }
  Mat alg_act(const Mat&, const Mat&) const override { return Mat::Zero(1, 1); }
  Mat alpha_hstar(const Mat&, const Mat&) const override { return Mat::Zero(1, 1); }
  Mat exp(Side s, const Mat& X) const override {
    Mat r(1, 1);
    r(0, 0) = s == Side::G ? cd(1.0) : std::exp(X(0, 0));
    return r;
  }
  Mat log(Side s, const Mat& g) const override {
    Mat r = Mat::Zero(1, 1);
    if (s == Side::G) return r;
    double phase = std::arg(g(0, 0));
    if (std::abs(phase) > kPi - 1e-9) throw DomainError("bs1 log: phase too close to pi");
    r(0, 0) = cd(std::log(std::abs(g(0, 0))), phase);
    return r;
  }
  Mat inverse(Side s, const Mat& g) const override {
    Mat r(1, 1);
    r(0, 0) = s == Side::G ? cd(1.0) : 1.0 / g(0, 0);
    return r;
  }
  Mat project(Side s, const Mat& g) const override {
    Mat r(1, 1);
    r(0, 0) = s == Side::G ? cd(1.0) : g(0, 0) / std::abs(g(0, 0));
    return r;
  }
  double group_residual(Side s, const Mat& g) const override {
    if (s == Side::G) return std::abs(g(0, 0) - 1.0);
    return std::abs(std::abs(g(0, 0)) - 1.0);
  }
  std::vector<Mat> kernel_samples(std::uint64_t seed, int n) const override {
    Rng rng(seed);
    std::vector<Mat> out;
    for (int k = 0; k < n; ++k) out.push_back(rng.group(*this, Side::H, 3.0));
    return out;
  }
  Mat central_h() const override { return basis_h_[0]; }

 private:
  std::vector<Mat> basis_g_, basis_h_;
};

// ---------------------------------------------------------------- Heisenberg

class Heisenberg final : public CrossedModule {
 public:
  Heisenberg() { basis_ = {unit(3, 0, 1), unit(3, 1, 2), unit(3, 0, 2)}; }
  std::string name() const override { return "heisenberg"; }
  int mat_size(Side) const override { return 3; }
  const std::vector<Mat>& basis(Side) const override { return basis_; }
  Mat t_group(const Mat& h) const override { return h; }
  Mat t_alg(const Mat& Y) const override { return Y; }
  Mat alpha(const Mat& g, const Mat& h) const override { return g * h * inverse(Side::G, g); }
  Mat alpha_gstar(const Mat& g, const Mat& Y) const override { return g * Y * inverse(Side::G, g); }
  Mat alg_act(const Mat& X, const Mat& Y) const override { return X * Y - Y * X; }
  Mat alpha_hstar(const Mat& X, const Mat& h) const override { return X * h - h * X; }
  Mat exp(Side, const Mat& X) const override {
    Mat id = Mat::Identity(3, 3);
    return id + X + 0.5 * X * X;
  }
  Mat log(Side, const Mat& g) const override {
    Mat n = g - Mat::Identity(3, 3);
    return n - 0.5 * n * n;
  }
  Mat inverse(Side, const Mat& g) const override {
    Mat n = g - Mat::Identity(3, 3);
    return Mat::Identity(3, 3) - n + n * n;
  }
  Mat project(Side, const Mat& g) const override {
    Mat r = Mat::Identity(3, 3);
    r(0, 1) = g(0, 1).real();
    r(1, 2) = g(1, 2).real();
    r(0, 2) = g(0, 2).real();
    return r;
  }
  double group_residual(Side s, const Mat& g) const override { return (g - project(s, g)).norm(); }
  std::vector<Mat> kernel_samples(std::uint64_t, int) const override { return {Mat::Identity(3, 3)}; }
  Mat central_h() const override { return basis_[2]; }

 private:
  std::vector<Mat> basis_;
};

// ---------------------------------------------------------------- SU(2) -> SO(3)

class Su2Ad final : public CrossedModule {
 public:
  Su2Ad() {
    Mat s1(2, 2), s2(2, 2), s3(2, 2);
    s1 << 0.0, 1.0, 1.0, 0.0;
    s2 << 0.0, -I_, I_, 0.0;
    s3 << 1.0, 0.0, 0.0, -1.0;
    basis_h_ = {-0.5 * I_ * s1, -0.5 * I_ * s2, -0.5 * I_ * s3};
    for (int k = 0; k < 3; ++k) {
      Mat L = Mat::Zero(3, 3);
      for (int j = 0; j < 3; ++j)
        for (int l = 0; l < 3; ++l) L(j, l) = -levi(k, j, l);
      basis_g_.push_back(L);
    }
  }
  std::string name() const override { return "su2_ad"; }
  int mat_size(Side s) const override { return s == Side::G ? 3 : 2; }
  const std::vector<Mat>& basis(Side s) const override { return s == Side::G ? basis_g_ : basis_h_; }

  Mat t_group(const Mat& h) const override {
    Mat R = Mat::Zero(3, 3);
    Mat hinv = h.adjoint();
    for (int k = 0; k < 3; ++k) {
      Mat img = h * basis_h_[k] * hinv;
      for (int j = 0; j < 3; ++j) R(j, k) = coord_h(img, j);
    }
    return R;
  }
  Mat t_alg(const Mat& Y) const override {
    Mat X = Mat::Zero(3, 3);
    for (int k = 0; k < 3; ++k) X += coord_h(Y, k) * basis_g_[k];
    return X;
  }
  Mat alpha(const Mat& g, const Mat& h) const override {
    Mat q = lift(g);
    return q * h * q.adjoint();
  }
  Mat alpha_gstar(const Mat& g, const Mat& Y) const override {
    Mat out = Mat::Zero(2, 2);
    for (int j = 0; j < 3; ++j) {
      double c = 0.0;
      for (int k = 0; k < 3; ++k) c += g(j, k).real() * coord_h(Y, k);
      out += c * basis_h_[j];
    }
    return out;
  }
  Mat alg_act(const Mat& X, const Mat& Y) const override {
    Mat x = lift_alg(X);
    return x * Y - Y * x;
  }
  Mat alpha_hstar(const Mat& X, const Mat& h) const override {
    Mat x = lift_alg(X);
    return x * h - h * x;
  }
  Mat exp(Side s, const Mat& X) const override {
    if (s == Side::H) {
      double a = coord_h(X, 0), b = coord_h(X, 1), c = coord_h(X, 2);
      double th = std::sqrt(a * a + b * b + c * c);
      double f = th < 1e-8 ? 1.0 - th * th / 24.0 : 2.0 * std::sin(th / 2.0) / th;
      return std::cos(th / 2.0) * Mat::Identity(2, 2) + f * X;
    }
    double a = X(2, 1).real(), b = X(0, 2).real(), c = X(1, 0).real();
    double th = std::sqrt(a * a + b * b + c * c);
    double f1 = th < 1e-6 ? 1.0 - th * th / 6.0 : std::sin(th) / th;
    double f2 = th < 1e-6 ? 0.5 - th * th / 24.0 : (1.0 - std::cos(th)) / (th * th);
    return Mat::Identity(3, 3) + f1 * X + f2 * X * X;
  }
  Mat log(Side s, const Mat& g) const override {
    if (s == Side::H) {
      double w = 0.5 * (g(0, 0) + g(1, 1)).real();
      Mat V = 0.5 * (g - g.adjoint());
      double a = coord_h(V, 0), b = coord_h(V, 1), c = coord_h(V, 2);
      double sn = 0.5 * std::sqrt(a * a + b * b + c * c);
      if (w < -1.0 + 1e-9) throw DomainError("su2 log: element too close to -1");
      double th = 2.0 * std::atan2(sn, w);
      double f = sn < 1e-12 ? 1.0 / w : th / (2.0 * sn);
      return f * V;
    }
    double tr = g.trace().real();
    double cth = std::clamp((tr - 1.0) / 2.0, -1.0, 1.0);
    double th = std::acos(cth);
    if (th > kPi - 1e-6) throw DomainError("so3 log: rotation angle too close to pi");
    double f = th < 1e-6 ? 0.5 + th * th / 12.0 : th / (2.0 * std::sin(th));
    Mat A = f * (g - g.transpose());
    return A;
  }
  Mat inverse(Side s, const Mat& g) const override { return s == Side::H ? Mat(g.adjoint()) : Mat(g.transpose()); }
  Mat project(Side s, const Mat& g) const override {
    if (s == Side::H) {
      cd a = 0.5 * (g(0, 0) + std::conj(g(1, 1)));
      cd b = 0.5 * (g(1, 0) - std::conj(g(0, 1)));
      double n = std::sqrt(std::norm(a) + std::norm(b));
      a /= n;
      b /= n;
      Mat r(2, 2);
      r << a, -std::conj(b), b, std::conj(a);
      return r;
    }
    Eigen::Matrix3d R = g.real();
    Eigen::JacobiSVD<Eigen::Matrix3d> svd(R, Eigen::ComputeFullU | Eigen::ComputeFullV);
    Eigen::Matrix3d U = svd.matrixU(), V = svd.matrixV();
    Eigen::Matrix3d D = Eigen::Matrix3d::Identity();
    D(2, 2) = (U * V.transpose()).determinant() < 0 ? -1.0 : 1.0;
    return (U * D * V.transpose()).cast<cd>();
  }
  double group_residual(Side s, const Mat& g) const override {
    int n = mat_size(s);
    double r = (g.adjoint() * g - Mat::Identity(n, n)).norm() + std::abs(g.determinant() - 1.0);
    if (s == Side::G) r += g.imag().norm();
    return r;
  }
  std::vector<Mat> kernel_samples(std::uint64_t, int) const override { return {Mat(-Mat::Identity(2, 2))}; }
  Mat central_h() const override { return Mat(); }

  // Unit quaternion q (as an SU(2) matrix) with Ad(q) = R.
  Mat lift(const Mat& Rc) const {
    Eigen::Matrix3d R = Rc.real();
    double tr = R.trace();
    double w, x, y, z;
    if (tr > R(0, 0) && tr > R(1, 1) && tr > R(2, 2)) {
      w = 0.5 * std::sqrt(std::max(0.0, 1.0 + tr));
      x = (R(2, 1) - R(1, 2)) / (4.0 * w);
      y = (R(0, 2) - R(2, 0)) / (4.0 * w);
      z = (R(1, 0) - R(0, 1)) / (4.0 * w);
    } else if (R(0, 0) >= R(1, 1) && R(0, 0) >= R(2, 2)) {
      x = 0.5 * std::sqrt(std::max(0.0, 1.0 + 2.0 * R(0, 0) - tr));
      w = (R(2, 1) - R(1, 2)) / (4.0 * x);
      y = (R(0, 1) + R(1, 0)) / (4.0 * x);
      z = (R(0, 2) + R(2, 0)) / (4.0 * x);
    } else if (R(1, 1) >= R(2, 2)) {
      y = 0.5 * std::sqrt(std::max(0.0, 1.0 + 2.0 * R(1, 1) - tr));
      w = (R(0, 2) - R(2, 0)) / (4.0 * y);
      x = (R(0, 1) + R(1, 0)) / (4.0 * y);
      z = (R(1, 2) + R(2, 1)) / (4.0 * y);
    } else {
      z = 0.5 * std::sqrt(std::max(0.0, 1.0 + 2.0 * R(2, 2) - tr));
      w = (R(1, 0) - R(0, 1)) / (4.0 * z);
      x = (R(0, 2) + R(2, 0)) / (4.0 * z);
      y = (R(1, 2) + R(2, 1)) / (4.0 * z);
    }
    // q = w + 2 (x e1 + y e2 + z e3)
    return w * Mat::Identity(2, 2) + 2.0 * (x * basis_h_[0] + y * basis_h_[1] + z * basis_h_[2]);
  }

 private:
  static double levi(int i, int j, int k) {
    if (i == j || j == k || i == k) return 0.0;
    return ((j - i + 3) % 3 == 1) ? 1.0 : -1.0;
  }
  // Coordinate along e_k; tr(e_j e_k) = -delta_jk / 2.
  double coord_h(const Mat& Y, int k) const { return -2.0 * (basis_h_[k] * Y).trace().real(); }
  Mat lift_alg(const Mat& X) const {
    return X(2, 1).real() * basis_h_[0] + X(0, 2).real() * basis_h_[1] + X(1, 0).real() * basis_h_[2];
  }
  std::vector<Mat> basis_g_, basis_h_;
};

// ---------------------------------------------------------------- corrupted target

class CorruptedTarget final : public CrossedModule {
 public:
  CorruptedTarget(CrossedModulePtr base, double amount) : base_(std::move(base)), amount_(amount) {
    if (base_->dim(Side::G) > 0) kick_ = base_->exp(Side::G, amount_ * base_->basis(Side::G)[0]);
  }
  std::string name() const override { return base_->name() + "+corrupt_t"; }
  int mat_size(Side s) const override { return base_->mat_size(s); }
  const std::vector<Mat>& basis(Side s) const override { return base_->basis(s); }
  Mat t_group(const Mat& h) const override {
    if (kick_.size() > 0) return base_->t_group(h) * kick_;
    // Trivial G: perturb off the group so the homomorphism check fails.
    return base_->t_group(h) + amount_ * (h - base_->identity(Side::H)).real().cast<cd>().topLeftCorner(1, 1);
  }
  Mat t_alg(const Mat& Y) const override { return base_->t_alg(Y); }
  Mat alpha(const Mat& g, const Mat& h) const override { return base_->alpha(g, h); }
  Mat alpha_gstar(const Mat& g, const Mat& Y) const override { return base_->alpha_gstar(g, Y); }
  Mat alg_act(const Mat& X, const Mat& Y) const override { return base_->alg_act(X, Y); }
  Mat alpha_hstar(const Mat& X, const Mat& h) const override { return base_->alpha_hstar(X, h); }
  Mat exp(Side s, const Mat& X) const override { return base_->exp(s, X); }
  Mat log(Side s, const Mat& g) const override { return base_->log(s, g); }
  Mat inverse(Side s, const Mat& g) const override { return base_->inverse(s, g); }
  Mat project(Side s, const Mat& g) const override { return base_->project(s, g); }
  double group_residual(Side s, const Mat& g) const override { return base_->group_residual(s, g); }
  std::vector<Mat> kernel_samples(std::uint64_t seed, int n) const override { return base_->kernel_samples(seed, n); }
  Mat central_h() const override { return base_->central_h(); }

 private:
  CrossedModulePtr base_;
  double amount_;
  Mat kick_;
};

void require(const GroupElement& x, Side s, const char* what) {
  if (x.group != s) throw TagMismatch(std::string(what) + ": expected element of " + side_name(s));
}
void require(const AlgebraElement& x, Side s, const char* what) {
  if (x.algebra != s) throw TagMismatch(std::string(what) + ": expected algebra element of " + side_name(s));
}

}  // namespace

std::vector<double> CrossedModule::coords(Side s, const Mat& X) const {
  std::vector<double> c;
  for (const Mat& b : basis(s)) c.push_back((b.adjoint() * X).trace().real() / (b.adjoint() * b).trace().real());
  return c;
}

Mat CrossedModule::from_coords(Side s, const std::vector<double>& c) const {
  Mat X = zero(s);
  for (std::size_t k = 0; k < c.size(); ++k) X += c[k] * basis(s)[k];
  return X;
}

double CrossedModule::algebra_residual(Side s, const Mat& X) const { return (X - from_coords(s, coords(s, X))).norm(); }

CrossedModulePtr make_bs1() { return std::make_shared<Bs1>(); }
CrossedModulePtr make_heisenberg() { return std::make_shared<Heisenberg>(); }
CrossedModulePtr make_su2_ad() { return std::make_shared<Su2Ad>(); }

CrossedModulePtr make_crossed_module(const std::string& name) {
  if (name == "bs1") return make_bs1();
  if (name == "heisenberg") return make_heisenberg();
  if (name == "su2_ad") return make_su2_ad();
  throw ConfigError("unknown crossed module: " + name);
}

std::vector<std::string> crossed_module_names() { return {"bs1", "heisenberg", "su2_ad"}; }

CrossedModulePtr make_corrupted_target(CrossedModulePtr base, double amount) {
  return std::make_shared<CorruptedTarget>(std::move(base), amount);
}

GroupElement target_group(const CrossedModule& cm, const GroupElement& h) {
  require(h, Side::H, "target_group");
  return {cm.t_group(h.matrix), Side::G};
}
AlgebraElement target_alg(const CrossedModule& cm, const AlgebraElement& Y) {
  require(Y, Side::H, "target_alg");
  return {cm.t_alg(Y.matrix), Side::G};
}
GroupElement act(const CrossedModule& cm, const GroupElement& g, const GroupElement& h) {
  require(g, Side::G, "act");
  require(h, Side::H, "act");
  return {cm.alpha(g.matrix, h.matrix), Side::H};
}
AlgebraElement act_pushforward_g(const CrossedModule& cm, const GroupElement& g, const AlgebraElement& Y) {
  require(g, Side::G, "act_pushforward_g");
  require(Y, Side::H, "act_pushforward_g");
  return {cm.alpha_gstar(g.matrix, Y.matrix), Side::H};
}
Mat act_pushforward_h(const CrossedModule& cm, const AlgebraElement& X, const GroupElement& h) {
  require(X, Side::G, "act_pushforward_h");
  require(h, Side::H, "act_pushforward_h");
  return cm.alpha_hstar(X.matrix, h.matrix);
}
AlgebraElement alg_act(const CrossedModule& cm, const AlgebraElement& X, const AlgebraElement& Y) {
  require(X, Side::G, "alg_act");
  require(Y, Side::H, "alg_act");
  return {cm.alg_act(X.matrix, Y.matrix), Side::H};
}
GroupElement exp(const CrossedModule& cm, const AlgebraElement& X) { return {cm.exp(X.algebra, X.matrix), X.algebra}; }
AlgebraElement log(const CrossedModule& cm, const GroupElement& g) { return {cm.log(g.group, g.matrix), g.group}; }
AlgebraElement bracket(const CrossedModule& cm, const AlgebraElement& X, const AlgebraElement& Y) {
  if (X.algebra != Y.algebra) throw TagMismatch("bracket: algebras differ");
  return {cm.bracket(X.matrix, Y.matrix), X.algebra};
}
GroupElement mul(const CrossedModule&, const GroupElement& a, const GroupElement& b) {
  if (a.group != b.group) throw TagMismatch("mul: groups differ");
  return {a.matrix * b.matrix, a.group};
}
GroupElement inv(const CrossedModule& cm, const GroupElement& a) { return {cm.inverse(a.group, a.matrix), a.group}; }
GroupElement conj(const CrossedModule& cm, const GroupElement& a, const GroupElement& b) {
  if (a.group != b.group) throw TagMismatch("conj: groups differ");
  return {a.matrix * b.matrix * cm.inverse(a.group, a.matrix), a.group};
}

ChainAccumulator::ChainAccumulator(const CrossedModule& cm, Side s) : cm_(&cm), side_(s), value_(cm.identity(s)) {}

void ChainAccumulator::right_multiply(const Mat& x) {
  value_ = value_ * x;
  tick();
}
void ChainAccumulator::left_multiply(const Mat& x) {
  value_ = x * value_;
  tick();
}
void ChainAccumulator::tick() {
  if (++count_ % kReprojectEvery == 0) value_ = cm_->project(side_, value_);
}

bool AxiomReport::pass() const {
  for (const auto& [key, value] : residuals) {
    double tol = key == "alpha_gstar_fd" || key == "t_alg_fd" ? 1e-7 : tolerance;
    if (!(value <= tol)) return false;
  }
  return true;
}

AxiomReport check_axioms(const CrossedModule& cm, int n_samples, std::uint64_t seed) {
  AxiomReport rep;
  rep.instance = cm.name();
  rep.n_samples = n_samples;
  Rng rng(seed);
  auto bump = [&](const char* key, double v) {
    double& slot = rep.residuals[key];
    slot = std::max(slot, v);
  };
  for (const char* k : {"equivariance_t", "peiffer", "alg_equivariance", "alg_peiffer", "t_homomorphism",
                        "action_composition", "ker_t_central", "alpha_gstar_fd", "t_alg_fd"})
    rep.residuals[k] = 0.0;
  const double eps = 1e-5;
  auto kernel = cm.kernel_samples(seed ^ 0x9e3779b97f4a7c15ULL, 8);
  for (int n = 0; n < n_samples; ++n) {
    Mat g1 = rng.group(cm, Side::G), g2 = rng.group(cm, Side::G);
    Mat h1 = rng.group(cm, Side::H), h2 = rng.group(cm, Side::H);
    Mat X = rng.algebra(cm, Side::G), Y1 = rng.algebra(cm, Side::H), Y2 = rng.algebra(cm, Side::H);
    Mat h1inv = cm.inverse(Side::H, h1);
    bump("equivariance_t", (cm.t_group(cm.alpha(g1, h1)) - g1 * cm.t_group(h1) * cm.inverse(Side::G, g1)).norm());
    bump("peiffer", (cm.alpha(cm.t_group(h1), h2) - h1 * h2 * h1inv).norm());
    bump("alg_equivariance", (cm.t_alg(cm.alg_act(X, Y1)) - cm.bracket(X, cm.t_alg(Y1))).norm());
    bump("alg_peiffer", (cm.alg_act(cm.t_alg(Y1), Y2) - cm.bracket(Y1, Y2)).norm());
    bump("t_homomorphism", (cm.t_group(h1 * h2) - cm.t_group(h1) * cm.t_group(h2)).norm());
    bump("action_composition", (cm.alpha(g1 * g2, h1) - cm.alpha(g1, cm.alpha(g2, h1))).norm());
    const Mat& z = kernel[n % kernel.size()];
    bump("ker_t_central", (z * h1 * cm.inverse(Side::H, z) - h1).norm());
    Mat fd = (cm.alpha(g1, cm.exp(Side::H, eps * Y1)) - cm.alpha(g1, cm.exp(Side::H, -eps * Y1))) / (2.0 * eps);
    bump("alpha_gstar_fd", (fd - cm.alpha_gstar(g1, Y1)).norm());
    Mat fdt = (cm.t_group(cm.exp(Side::H, eps * Y1)) - cm.t_group(cm.exp(Side::H, -eps * Y1))) / (2.0 * eps);
    bump("t_alg_fd", (fdt - cm.t_alg(Y1)).norm());
  }
  return rep;
}

}  // namespace gerbe
