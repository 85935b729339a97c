#pragma once

#include <array>
#include <functional>
#include <vector>

#include "gerbe/crossed_module.hpp"
#include "gerbe/rng.hpp"
#include "gerbe/types.hpp"

namespace gerbe {

// A differential form with matrix values.  `eval` takes `degree` tangent vectors.
// For group-valued 0-forms (g_ij, f_ijk) `deriv` is the differential, an ambient
// tangent at the value; otherwise it is the exterior derivative.
struct FormField {
  int degree = 0;
  Side side = Side::H;
  bool group_valued = false;
  std::function<Mat(const Vec3&, const Vec3*)> eval;
  std::function<Mat(const Vec3&, const Vec3*)> deriv;
  // Depth function of the set the form lives on; used to keep FD stencils inside.
  std::function<double(const Vec3&)> domain;

  Mat operator()(const Vec3& p) const { return eval(p, nullptr); }
  Mat operator()(const Vec3& p, const Vec3& u) const { return eval(p, &u); }
  Mat operator()(const Vec3& p, const Vec3& u, const Vec3& v) const {
    Vec3 t[2] = {u, v};
    return eval(p, t);
  }
};

// Exterior derivative of a k-form evaluated on k+1 tangents (k <= 3).  Uses the
// analytic derivative when present unless force_fd; central differences of
// step h_fd otherwise.  Throws ContainmentError if a stencil point leaves the domain.
Mat exterior_derivative(const FormField& f, const Vec3& p, const Vec3* tangents, double h_fd,
                        bool force_fd = false);

// First-order jet of a scalar field: value and gradient.
struct Jet {
  double v = 0.0;
  Vec3 g = Vec3::Zero();
};

// Sum of amp * sin(k . p + phase) plus a constant, with its gradient.
struct TrigSeries {
  struct Term {
    double amp;
    Vec3 k;
    double phase;
  };
  double constant = 0.0;
  std::vector<Term> terms;
  Jet operator()(const Vec3& p) const;

  // Random series; wave numbers are integer multiples of `k_unit` when `lattice`.
  static TrigSeries random(Rng& rng, int n_terms, double amp, double k_scale, bool lattice, int dims);
};

// A Lie-algebra valued 1-form sum_mu sum_a c_{mu,a}(p) basis_a dx^mu with trig
// coefficients, so its first derivatives are analytic.
struct JetOneForm {
  std::vector<Mat> basis;
  std::array<std::vector<TrigSeries>, 3> coef;  // coef[mu][a]

  int size() const { return basis.empty() ? 1 : static_cast<int>(basis[0].rows()); }
  // comps[mu] and dcomps[nu][mu] = d_nu comps[mu].
  void jets(const Vec3& p, std::array<Mat, 3>& comps, std::array<std::array<Mat, 3>, 3>& dcomps) const;
  Mat value(const Vec3& p, const Vec3& v) const;

  static JetOneForm zero(const std::vector<Mat>& basis);
  static JetOneForm random(Rng& rng, const std::vector<Mat>& basis, int dims, int n_terms, double amp,
                           double k_scale, bool lattice);
};

// Forms built from a JetOneForm beta, with an optional Lie algebra map applied.
// one_form(beta, map):            map(beta)                 with d = map(d beta)
// curvature_form(beta, bracket):  d beta + 1/2 [beta ^ beta] with analytic d
FormField one_form(const JetOneForm& beta, std::function<Mat(const Mat&)> map = {});
FormField curvature_form(const JetOneForm& beta);
FormField zero_form(int degree, Side side, int size);
FormField constant_group(const Mat& value, Side side);

// Sums of forms of equal degree; the derivative is present only if both have one.
FormField add(const FormField& a, const FormField& b, double scale_b = 1.0);

}  // namespace gerbe
