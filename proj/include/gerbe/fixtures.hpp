#pragma once

#include <string>
#include <vector>

#include "gerbe/gerbe.hpp"

namespace gerbe {

// All-zero data on the four-square torus cover.
GerbeCocycle make_trivial_gerbe(CrossedModulePtr cm);
// BS^1 gerbe on R^3 minus the origin over the six-cone cover.  B is
// (i level / 2)(x dy^dz + y dz^dx + z dx^dy) twisted per chart by exact forms and
// transition functions, all scaled by level.
GerbeCocycle make_abelian_sphere_gerbe(int level, bool twisted = true);
// BS^1 gerbe on R^3 from a single chart with a non-closed B, so H is not constant.
GerbeCocycle make_abelian_plane_gerbe();
// Heisenberg gerbes built from random per-chart connections A_i and transition
// functions g_ij = exp(xi_ij): B_i, a_ij and f_ijk follow from the relations.
GerbeCocycle make_heisenberg_torus4_gerbe();
GerbeCocycle make_heisenberg_sphere_gerbe();
// Single-chart gerbes on R^3 with A = t(beta), B = d beta + 1/2 [beta ^ beta].
GerbeCocycle make_heisenberg_plane_gerbe();
GerbeCocycle make_su2_plane_gerbe();

// Registry by "name(args)": trivial(cm), abelian_sphere(level), abelian_plane,
// heisenberg_plane, heisenberg_torus4, heisenberg_sphere, su2_plane.
GerbeCocycle make_fixture(const std::string& spec);
std::vector<std::string> fixture_names();

// Negative controls.  Each breaks one relation on one index tuple:
//   "f": f_012 times a constant central element       -> f_quadruple
//   "g": g_01 times a constant central element of G    -> g_triple
//   "a": a_01 plus a constant central 1-form           -> a_triple
//   "B": B_0 plus a constant central 2-form            -> B_transition
// Throws ConfigError when the fixture has no room for the requested corruption.
GerbeCocycle corrupt(const GerbeCocycle& c, const std::string& kind, double amount = 0.3);

}  // namespace gerbe
