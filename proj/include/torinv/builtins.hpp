#pragma once

#include "torinv/bundle_cocycles.hpp"
#include "torinv/twisted_complex.hpp"

namespace torinv {

// Chart nerve of the real projective plane: antipodal quotient of an
// icosahedral good cover of the sphere, refined with interior chart splits so
// that re-gluing surgery can reach a wide range of Chern classes.  36 charts,
// 105 double overlaps, 70 triple overlaps; fundamental group <a | a^2>.
CoverNerve rp2_nerve();

// Integral affine atlas over that nerve descending from the standard affine
// structure on punctured 3-space modulo x -> -x: each chart transition is
// +-identity with zero translation.
std::vector<AffReal> rp2_atlas();

// Torus-bundle transition data of the induced trivial fiberwise-dual
// fibration; monodromy a -> -I_3, Chern class zero.
TransitionData rp2_bundle();

// Tetrahedral good cover of the sphere (4 charts, n = 1) with half-unit
// translations placed so the obstruction cocycle has total class 1 -- the
// classic nontrivial circle-fiber bundle over punctured 3-space.
CoverNerve s2_tetra_nerve();
TransitionData s2_tetra_bundle();

// Three-chart circle nerve with one declared loop carrying the unipotent
// linear part [[1,1],[0,1]] (n = 2), zero translations.
CoverNerve circle_loop_nerve();
TransitionData circle_loop_bundle();

// Cellular chain complex of the projective plane with one cell per dimension
// (boundary_2 = 1 + t, boundary_1 = 1 - t over Z[<a | a^2>]) and the two
// coefficient representations on Z^3: t -> -I_3 (the monodromy twisting) and
// the trivial one.
TwistedComplex rp2_cellular_complex();
Representation rp2_twisted_rep();
Representation rp2_trivial_rep();

}  // namespace torinv
