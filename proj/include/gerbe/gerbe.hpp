#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "gerbe/crossed_module.hpp"
#include "gerbe/forms.hpp"
#include "gerbe/manifold.hpp"

namespace gerbe {

// Local cocycle data of a gerbe with connection on an open cover.
struct GerbeCocycle {
  std::string name;
  CrossedModulePtr cm;
  ManifoldModel manifold;
  std::vector<OpenSet> cover;
  std::vector<FormField> A, B;  // per chart
  std::vector<FormField> g, a;  // index i * n + j
  std::vector<FormField> f;     // index (i * n + j) * n + k
  double h_fd = 1e-4;

  int n() const { return static_cast<int>(cover.size()); }
  const FormField& g_of(int i, int j) const { return g[i * n() + j]; }
  const FormField& a_of(int i, int j) const { return a[i * n() + j]; }
  const FormField& f_of(int i, int j, int k) const { return f[(i * n() + j) * n() + k]; }
  FormField& g_of(int i, int j) { return g[i * n() + j]; }
  FormField& a_of(int i, int j) { return a[i * n() + j]; }
  FormField& f_of(int i, int j, int k) { return f[(i * n() + j) * n() + k]; }

  Mat A_at(int i, const Vec3& p, const Vec3& v) const { return A[i](p, v); }
  Mat B_at(int i, const Vec3& p, const Vec3& u, const Vec3& v) const { return B[i](p, u, v); }
  Mat g_at(int i, int j, const Vec3& p) const { return g_of(i, j)(p); }
  Mat a_at(int i, int j, const Vec3& p, const Vec3& v) const { return a_of(i, j)(p, v); }
  Mat f_at(int i, int j, int k, const Vec3& p) const { return f_of(i, j, k)(p); }

  // Minimum depth over the listed charts.
  double depth(std::initializer_list<int> ids, const Vec3& p) const;
  std::vector<int> charts_containing(const Vec3& p, double margin) const;

  // Sets the domain of every field to its intersection and checks array sizes.
  void finalize();
};

using CocyclePtr = std::shared_ptr<const GerbeCocycle>;

// R_i(u, v) = dA_i(u, v) + [A_i(u), A_i(v)].
Mat curvature_R(const GerbeCocycle& c, int i, const Vec3& p, const Vec3& u, const Vec3& v);
// dw + sum_a (-1)^a alpha_{A_i(v_a)}(w(.. v_a omitted ..)) for an h-valued k-form w.
// h <= 0 means the cocycle's h_fd.
Mat covariant_derivative(const GerbeCocycle& c, int i, const FormField& w, const Vec3& p, const Vec3* tangents,
                         bool force_fd = false, double h = 0.0);
Mat three_curvature_H(const GerbeCocycle& c, int i, const Vec3& p, const Vec3& u, const Vec3& v, const Vec3& w,
                      bool force_fd = false);

// Covariant derivative of H_i on four tangents, H_i differentiated by central
// differences of step h.  Vanishes up to O(h^2).
Mat covariant_derivative_H(const GerbeCocycle& c, int i, const Vec3& p, const Vec3* tangents, double h);

struct CurvatureReport {
  int n_points = 0;           // sampled points lying in at least two charts
  double t_of_H = 0.0;        // max ||t(H_i)||
  double equivariance = 0.0;  // max ||H_j - alpha_{g_ij}(H_i)|| over overlaps
  double bianchi = 0.0;       // max ||nabla_i H_i|| at step h_fd
  double bianchi_half = 0.0;  // the same at h_fd / 2
};
// Samples until n_points overlap points are found (or 200 n_points draws).
CurvatureReport check_curvature(const GerbeCocycle& c, int n_points, std::uint64_t seed, double h_fd = 1e-3);

struct RelationResult {
  double max_residual = 0.0;
  int n_samples = 0;
  double tolerance = 0.0;
  bool vacuous = true;
  bool informational = false;  // reported, not gated
  bool pass() const { return informational || vacuous || max_residual <= tolerance; }
};

struct ValidationReport {
  std::string fixture;
  int n_points = 0;
  std::uint64_t seed = 0;
  std::map<std::string, RelationResult> relations;
  bool pass() const;
  std::vector<std::string> failures() const;
};

struct ValidationTolerances {
  double algebraic = 1e-9;
  double differential = 1e-6;
};

// Samples points of the manifold and checks every relation on every ordered tuple
// of charts that contains the point with margin.  The triple-intersection
// a-relation is gated in the form
//   u a_ik u^-1 = alpha_{g_jk}(a_ij) + a_jk + (alpha_u)_*(A_k) u^-1 + du u^-1,  u = f_ijk^-1,
// and the same expression with u = f_ijk is reported as "a_triple_as_printed".
ValidationReport validate_gerbe(const GerbeCocycle& c, int n_points, std::uint64_t seed,
                                ValidationTolerances tol = {});

// Single chart on `cover[0]`: A = t(beta), B = d beta + 1/2 [beta ^ beta] + z.
// Throws ConstructionError when z is not valued in ker t at sampled points.
GerbeCocycle make_single_chart_gerbe(CrossedModulePtr cm, const ManifoldModel& manifold,
                                     const std::vector<OpenSet>& cover, const JetOneForm& beta,
                                     const FormField& z, const std::string& name = "single_chart");

}  // namespace gerbe
