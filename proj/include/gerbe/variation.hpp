#pragma once

#include <array>
#include <vector>

#include "gerbe/glue.hpp"

namespace gerbe {

// Boundary sides in loop order.  The boundary loop starts at the basepoint and
// runs down the west edge, right along the south edge, up the east edge and
// back along the north edge.
enum BoundarySide { kWest = 0, kSouth = 1, kEast = 2, kNorth = 3 };
inline const char* boundary_side_name(int s) {
  static const char* names[] = {"W", "S", "E", "N"};
  return names[s];
}

struct DerivativeBreakdown {
  Mat hol;          // Hol at r = 0
  Mat corner_term;  // -(alpha_Hol)_*(A_{i(1,1)}(dSigma/dr(0,0)))
  Mat bulk_term;    // in the algebra of H
  std::vector<Mat> bulk_per_cell;  // cell (k, l) at l * n + k
  Mat boundary_B;
  std::array<Mat, 4> boundary_B_sides;
  Mat boundary_a;
  std::array<Mat, 4> boundary_a_sides;
  Mat total;        // corner_term + hol (bulk + boundary_B + boundary_a)
  Mat total_printed_a_signs;  // the same with every a-term negated
  double loop_residual = 0.0;  // ||boundary loop holonomy - t(hol)||
};

struct FDConfig {
  std::vector<double> steps{0.04, 0.02, 0.01, 0.005};
  bool richardson = true;
  // Throws ConfigError unless steps are positive and strictly decreasing.
  void validate() const;
};

enum class InCellPath { DownThenRight, RightThenDown };

// Sum over cells of the integral of H_i(dt, ds, dr) pulled back along the
// staircase into the cell and then along the in-cell path.
Mat bulk_integral_H(const GerbeCocycle& c, const SquareFamily& fam, const GridAssignment& grid,
                    const TransportConfig& cfg = {}, InCellPath rule = InCellPath::DownThenRight,
                    std::vector<Mat>* per_cell = nullptr);

struct BoundaryTerms {
  Mat B, a;
  std::array<Mat, 4> B_sides, a_sides;
  Mat loop;  // holonomy of the whole boundary loop
};
// Both boundary contributions from one sweep around the loop.  Each B-term is
// the integral of B_i(loop velocity, dr) pulled back along the loop; each
// transition point contributes -alpha_{(g_PQ U)^-1}(a_PQ(dr)) when the loop
// crosses from P (upper/left) into Q and +alpha_{U^-1}(a_PQ(dr)) when it crosses
// back, U being the loop holonomy up to the crossing.
BoundaryTerms boundary_terms(const GerbeCocycle& c, const SquareFamily& fam, const GridAssignment& grid,
                             const TransportConfig& cfg = {});
Mat boundary_integral_B(const GerbeCocycle& c, const SquareFamily& fam, const GridAssignment& grid,
                        const TransportConfig& cfg = {});
Mat boundary_sum_a(const GerbeCocycle& c, const SquareFamily& fam, const GridAssignment& grid,
                   const TransportConfig& cfg = {});

// Checks the assignment at r = -r_check, 0, r_check (GridDrift otherwise) and
// assembles the formula.
DerivativeBreakdown d_hol_formula(const GerbeCocycle& c, const SquareFamily& fam, const GridAssignment& grid,
                                  const TransportConfig& cfg = {}, double r_check = 0.04);

struct ConvergenceRow {
  double step = 0.0;
  double fd_norm = 0.0, formula_norm = 0.0, abs_err = 0.0, rel_err = 0.0;
  double est_order = 0.0;  // from successive differences; 0 when not available
};

struct FDResult {
  Mat derivative;  // Richardson-extrapolated at the two finest steps when enabled
  std::vector<Mat> central;  // per step
  std::vector<Mat> extrapolated;  // per consecutive pair
  double central_order = 0.0;     // slope from successive central differences
  double richardson_order = 0.0;  // slope from successive extrapolations (needs 4 steps)
  std::vector<ConvergenceRow> table;  // filled by compare_derivative
};

// Central differences of Hol(Sigma_r) on the fixed assignment.
FDResult d_hol_finite_difference(const GerbeCocycle& c, const SquareFamily& fam, const GridAssignment& grid,
                                 const TransportConfig& cfg = {}, const FDConfig& fd = {});

// ||FD - formula|| / max(||FD||, 1e-8).
double relative_error(const Mat& fd, const Mat& formula);

struct DerivativeCheck {
  DerivativeBreakdown formula;
  FDResult fd;
  double rel_err = 0.0;               // best FD against the formula
  double rel_err_printed_a = 0.0;     // against the formula with printed a-signs
  double rel_err_finest_central = 0.0;
};
DerivativeCheck check_derivative(const GerbeCocycle& c, const SquareFamily& fam, const GridAssignment& grid,
                                 const TransportConfig& cfg = {}, const FDConfig& fd = {});

// Single chart: the 1x1 grid on chart i.  Returns the relative error against FD.
double check_local_lemma(const GerbeCocycle& c, int i, const SquareFamily& fam, const TransportConfig& cfg = {},
                         const FDConfig& fd = {});

struct SphereDerivative {
  DerivativeCheck check;
  double boundary_cancellation = 0.0;  // ||boundary_B + boundary_a||
  Mat reduced_total;                   // corner + Hol * bulk
  double reduced_rel_err = 0.0;        // FD against reduced_total
  double center_residual = 0.0;        // max ||[Hol, h]|| over sampled h
};
// Throws DomainError if the family is not in sphere mode at r = 0.
SphereDerivative d_hol_sphere(const GerbeCocycle& c, const SquareFamily& fam, const GridAssignment& grid,
                              const TransportConfig& cfg = {}, const FDConfig& fd = {}, int center_samples = 20,
                              std::uint64_t seed = 7);

struct HTransformReport {
  double transform_residual = 0.0;  // ||bulk^B - alpha_{g00}(bulk^A)||, g00 = g_{ii'}(Sigma(0,0))
  double printed_residual = 0.0;    // ||bulk^A - alpha_{g00}(bulk^B)||
  double plain_residual = 0.0;      // ||bulk^A - bulk^B||
  double pointwise_H_residual = 0.0;  // max ||H_j - alpha_{g_ij}(H_i)|| on sampled overlaps
  bool central_valued = false;        // every sampled H lies in the centre
  double pointwise_equal_residual = 0.0;  // max ||H_j - H_i||, meaningful when central_valued
};
HTransformReport check_H_transform_and_center(const GerbeCocycle& c, const SquareFamily& fam,
                                              const GridAssignment& a, const GridAssignment& b,
                                              const TransportConfig& cfg = {}, int n_points = 50,
                                              std::uint64_t seed = 11);

}  // namespace gerbe
