#pragma once

// Orientation and ordering conventions shared by transport, glue and variation.
// Tests pin each of these against a target relation; changing one breaks them.

namespace gerbe {

// Which way the 1-holonomy ODE multiplies.
//   LeftAction:  dU/dt = -A(gamma') U,  so U(first then second) = U(second) U(first).
//   RightAction: dU/dt = -U A(gamma'), so U(first then second) = U(first) U(second).
enum class HolOrder { LeftAction, RightAction };

inline constexpr HolOrder kHolOrder = HolOrder::LeftAction;

// Re-project accumulated group products every this many multiplications.
inline constexpr int kReprojectEvery = 64;

// Boundary edge labels of a decorated square are the 1-holonomies of the edges
// oriented left-to-right (top, bottom) and top-to-bottom (left, right).  With the
// basepoint at the upper-left corner the target of the square is
//   top^-1 * right^-1 * bottom * left.

}  // namespace gerbe
