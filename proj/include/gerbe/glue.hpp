#pragma once

#include <vector>

#include "gerbe/transport.hpp"

namespace gerbe {

// An H-valued 2-cell with its four edge labels in G.  Edges run left-to-right
// (top, bottom) and top-to-bottom (left, right); the basepoint is the upper-left corner.
struct DecoratedSquare {
  Mat value;
  Mat top, right, bottom, left;
  int anchor_col = 0, anchor_row = 0;
};

// top^-1 right^-1 bottom left.
Mat square_target(const CrossedModule& cm, const DecoratedSquare& s);
double target_residual(const CrossedModule& cm, const DecoratedSquare& s);
// The square with the given value, top, left and bottom whose right edge makes the target hold.
DecoratedSquare make_valid_square(const CrossedModule& cm, const Mat& value, const Mat& top, const Mat& left,
                                  const Mat& bottom);

// value = L.value alpha_{L.left^-1 L.bottom^-1 L.right}(R.value).  Throws EdgeMismatch
// when L.right and R.left differ by more than tol.
DecoratedSquare compose_h(const CrossedModule& cm, const DecoratedSquare& left, const DecoratedSquare& right,
                          double tol = 1e-9);
// value = T.value alpha_{T.left^-1}(B.value).  Throws EdgeMismatch when T.bottom != B.top.
DecoratedSquare compose_v(const CrossedModule& cm, const DecoratedSquare& top, const DecoratedSquare& bottom,
                          double tol = 1e-9);
// || v(h(tl,tr), h(bl,br)) - h(v(tl,bl), v(tr,br)) ||.
double check_interchange(const CrossedModule& cm, const DecoratedSquare& tl, const DecoratedSquare& tr,
                         const DecoratedSquare& bl, const DecoratedSquare& br);

// Max interchange residual over n_samples random 2x2 blocks of valid squares
// with matching shared edges.
double sample_interchange(const CrossedModule& cm, int n_samples, std::uint64_t seed);

// The (2n-1) x (2m-1) array of local 2-cells of a grid: faces at even/even
// positions, edges between cells at mixed positions, vertices at odd/odd.
// Edges between horizontally adjacent cells carry the inverse edge transport.
struct DecoratedGrid {
  int cols = 0, rows = 0;
  std::vector<DecoratedSquare> squares;  // squares[row * cols + col]
  const DecoratedSquare& at(int col, int row) const { return squares[row * cols + col]; }
  DecoratedSquare& at(int col, int row) { return squares[row * cols + col]; }
};

struct LocalDiagnostics {
  std::vector<double> face_residuals, edge_residuals, vertex_residuals;
  double max_residual = 0.0;
  int flagged = 0;
};

DecoratedGrid build_decorated_grid(const GerbeCocycle& c, const SquareMap& sigma, const GridAssignment& grid,
                                   const TransportConfig& cfg = {}, LocalDiagnostics* diag = nullptr);

// 1-holonomy of the staircase from the upper-left corner of the array down its
// left side, right along its bottom and up to the upper-left corner of (col, row).
Mat staircase_holonomy(const CrossedModule& cm, const DecoratedGrid& g, int col, int row);
// alpha_{P^-1}(X) for the staircase holonomy P; the algebra version pushes forward.
Mat overline(const CrossedModule& cm, const DecoratedGrid& g, int col, int row, const Mat& X);
Mat overline_algebra(const CrossedModule& cm, const DecoratedGrid& g, int col, int row, const Mat& Y);

struct GlobalHolonomy {
  Mat value;
  GridAssignment grid;
  int basepoint_chart = 0;
  DecoratedSquare composite;     // value with the boundary labels of the whole square
  double target_residual = 0.0;  // ||t(value) - boundary word||
  double overline_residual = 0.0;  // glued value vs explicit product of overlined cells
  LocalDiagnostics locals;
};

// Glues each column top to bottom, then the columns left to right.  Throws
// ContainmentError if the assignment is not admissible for sigma.
GlobalHolonomy assemble_global_hol(const GerbeCocycle& c, const SquareMap& sigma, const GridAssignment& grid,
                                   const TransportConfig& cfg = {});

// ||Hol(grid) - Hol(refined)||.
double check_subdivision(const GerbeCocycle& c, const SquareMap& sigma, const GridAssignment& grid,
                         const GridAssignment& refined, const TransportConfig& cfg = {});

// Change of assignment.  Both grids are refined to a common grid; the four
// boundary walls are edge-transport strips between the two assignments, glued
// with vertex elements, and
//   Hol^B = alpha_{g00}( alpha_{x4}(E^-1) N^-1 W alpha_{x1}(Hol^A) alpha_{x2}(S) )
// with g00 = g_{ii'} at the basepoint and the conjugators of the edge cube.
struct TransformationResult {
  double residual = 0.0;               // against the wall formula
  double conjugation_residual = 0.0;   // ||Hol^B - alpha_{g00}(Hol^A)||, the sphere reduction
  double plain_residual = 0.0;         // ||Hol^B - Hol^A||
  Mat hol_a, hol_b, g00;
};
TransformationResult check_transformation(const GerbeCocycle& c, const SquareMap& sigma, const GridAssignment& a,
                                          const GridAssignment& b, const TransportConfig& cfg = {});

// Edge-transport strip along consecutive boundary pieces between two charts per
// piece, glued left to right with vertex elements at the junctions.
DecoratedSquare transition_strip(const GerbeCocycle& c, const std::vector<Path>& pieces,
                                 const std::vector<int>& charts_a, const std::vector<int>& charts_b,
                                 const TransportConfig& cfg = {});

}  // namespace gerbe
