#pragma once

#include <functional>
#include <string>

#include "gerbe/conventions.hpp"
#include "gerbe/gerbe.hpp"
#include "gerbe/surfaces.hpp"

namespace gerbe {

struct TransportConfig {
  int ode_steps_per_unit = 32;
  int quadrature_points = 3;  // Gauss points per panel of the inner t-integral
  double tol_target = 1e-6;
  double h_fd = 1e-4;
  HolOrder order = kHolOrder;

  // Throws ConfigError unless all fields are positive and ode_steps_per_unit >= 16.
  void validate() const;
};

struct LocalHolonomy {
  GroupElement value;
  double target_residual = 0.0;
  bool flagged = false;  // target_residual above cfg.tol_target
  std::string provenance;
};

// Fourth-order steps of the 1-holonomy ODE of A_i along a path; the partial
// steps give the holonomy at interior quadrature nodes.  Throws ContainmentError
// when an evaluation node leaves U_i.
class PathTransport {
 public:
  PathTransport(const GerbeCocycle& c, int i, const Path& path, HolOrder order = kHolOrder)
      : c_(&c), i_(i), path_(&path), order_(order) {}
  Mat generator(double tau) const;
  Mat step(const Mat& U, double t0, double h) const;

 private:
  const GerbeCocycle* c_;
  int i_;
  const Path* path_;
  HolOrder order_;
};

// 1-holonomy of A_i along a path, U(0) = 1.  Throws ContainmentError if a node of
// the path leaves U_i.
Mat hol_path_matrix(const GerbeCocycle& c, int i, const Path& path, const TransportConfig& cfg = {});
GroupElement hol_path(const GerbeCocycle& c, int i, const Path& path, const TransportConfig& cfg = {});

// U(first then second) under cfg.order.
Mat compose_paths(const Mat& first, const Mat& second, HolOrder order);

struct TransportedIntegral {
  Mat integral;  // in the algebra of H
  Mat hol;       // compose(U0, U(path))
};

// Integral over [0, 1] of (alpha_{P(tau)^-1})_*(integrand(tau)) where P(tau) is
// the 1-holonomy of U0 followed by path|[0, tau].  Composite Gauss-Legendre with
// cfg.quadrature_points per panel; P at the nodes comes from partial steps.
TransportedIntegral transported_line_integral(const GerbeCocycle& c, int i, const Path& path, const Mat& U0,
                                              const std::function<Mat(double)>& integrand,
                                              const TransportConfig& cfg = {});

// Boundary word N^-1 E^-1 S W of a square in chart i.
Mat square_boundary_word(const GerbeCocycle& c, int i, const SquareMap& sigma, const TransportConfig& cfg = {});

// 2-holonomy of (A_i, B_i) over a square.  Outer right-action ODE in s whose
// generator is the t-integral of B_i(dt, ds) pulled back along the left edge to
// height s and then along the row at height s.
LocalHolonomy hol_square(const GerbeCocycle& c, int i, const SquareMap& sigma, const TransportConfig& cfg = {});

// Edge transport between charts i (upper/left) and j (lower/right).
// W' = W alpha_{(hol_j(t) g_ij(x))^-1}(a_ij(gamma')), target hol_i^-1 g_ij(y)^-1 hol_j g_ij(x).
LocalHolonomy hol_edge(const GerbeCocycle& c, int i, int j, const Path& path, const TransportConfig& cfg = {});
Mat edge_target_word(const GerbeCocycle& c, int i, int j, const Path& path, const TransportConfig& cfg = {});

// Vertex element for charts i (upper-left), j (lower-left), k (upper-right), l (lower-right).
LocalHolonomy hol_vertex(const GerbeCocycle& c, int i, int j, int k, int l, const Vec3& x);
Mat vertex_target_word(const GerbeCocycle& c, int i, int j, int k, int l, const Vec3& x);

struct CubeResult {
  double residual = 0.0;             // with the corrected conjugator
  double as_printed_residual = 0.0;  // with the conjugator exactly as printed
};

// Edge cube over a square in U_ij: the front edge face Hol_ij(-,0) against the
// product of the other five faces.  The last conjugator is g_ij(0,0)^-1 hol_j(-,0)^-1 g_ij(t,0).
CubeResult check_edge_cube(const GerbeCocycle& c, int i, int j, const SquareMap& sigma,
                           const TransportConfig& cfg = {});
// Vertex cube along a path in U_ijkl.  The second conjugator is
// g_ij(x)^-1 hol_j^-1 g_ij(y) hol_i.
CubeResult check_vertex_cube(const GerbeCocycle& c, int i, int j, int k, int l, const Path& path,
                             const TransportConfig& cfg = {});

}  // namespace gerbe
