#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "torinv/affine_groups.hpp"
#include "torinv/twisted_complex.hpp"

namespace torinv {

// Combinatorial record of a chart cover: vertices are charts, edges are double
// overlaps, triangles/tetrahedra are higher overlaps.  Simplices are stored as
// ordered tuples; a tetrahedron's four boundary faces must appear in the
// triangle list exactly as the induced ordered triples.  The spanning tree is
// given by edge indices; non-tree edges may declare which fundamental-group
// generator their induced loop represents.
struct CoverNerve {
    std::size_t vertex_count = 0;
    std::vector<std::array<std::size_t, 2>> edges;
    std::vector<std::array<std::size_t, 3>> triangles;
    std::vector<std::array<std::size_t, 4>> tetrahedra;
    std::vector<std::size_t> spanning_tree;              // indices into edges
    std::map<std::size_t, std::string> loop_generators;  // edge index -> generator name
    GroupPresentation presentation;
    bool operator==(const CoverNerve& other) const = default;
};

// Structural validation: index ranges, duplicate edges, triangle/tetrahedron
// faces present, spanning tree acyclic and spanning, loop declarations on
// non-tree edges with known generator names.  Throws NerveMismatch.
void validate_nerve(const CoverNerve& nerve);

// Torus-bundle transition data: labels[e] is the toral affine map from chart
// edges[e][0] to chart edges[e][1]; the opposite direction is its inverse.
struct TransitionData {
    CoverNerve nerve;
    std::vector<AffToral> labels;
};

struct VerificationReport {
    bool ok = true;
    std::vector<std::string> violations;
};

// Checks the cocycle condition label(b->c) * label(a->b) = label(a->c) on
// every triangle with exact toral arithmetic; report-style, never throws on
// bad data.
VerificationReport verify_cocycle(const TransitionData& td);

// Obstruction 2-cocycle with coefficients twisted by the monodromy.  Values
// are stored in the spanning-tree-trivialized frame, so the nerve and the
// twisting representation alone determine the coboundary operators used for
// cohomology comparisons.
struct ChernCocycle {
    CoverNerve nerve;
    std::vector<IntVec> values;  // one integer vector per listed triangle
    Representation twisting;
};

// Holonomy representation: for each declared loop generator, the product of
// linear parts along tree-path, edge, reverse tree-path.  Edges declaring the
// same generator must agree and undeclared non-tree loops must be trivial
// (RelatorViolated otherwise); relators are validated.
Representation monodromy_of(const TransitionData& td);

// Chern obstruction cocycle from the canonical rational lifts in [0,1)^n of
// the toral translations: on triangle (a,b,c) the chart-frame value is
// lift(b->c) + A(b->c) lift(a->b) - lift(a->c), an integer vector by the
// cocycle condition, then moved into the tree-trivialized frame.
ChernCocycle chern_cocycle(const TransitionData& td);

// Same, with the stored-direction lift of edge e displaced by the integer
// vector offsets[e] (the reversed direction moves by minus its transport, so
// the perturbation is a well-formed integer 1-cochain).  Used to exercise the
// lift-independence property.
ChernCocycle chern_cocycle_with_lift_offsets(const TransitionData& td,
                                             const std::vector<IntVec>& offsets);

// Equality in twisted degree-2 cohomology.  Equal carries a 1-cochain witness
// w (one integer vector per edge, stored direction) with delta w = c1 - c2.
struct CohomologousResult {
    bool equal = false;
    std::optional<std::vector<IntVec>> witness;
};
CohomologousResult cohomologous(const ChernCocycle& c1, const ChernCocycle& c2);

// Degree-k cohomology of the twisted Cech complex of the nerve, with
// coefficients Z^n twisted through the representation (transports are taken
// in the tree-trivialized frame: identity on tree edges, the declared
// generator image on declared loop edges).
AbelianGroup cech_cohomology(const CoverNerve& nerve, const Representation& rep,
                             std::size_t degree);

// Twisted Cech coboundary of a 1-cochain (one Z^n vector per stored edge,
// expressed in the tree-trivialized frame); returns one vector per triangle.
// Substituting a witness from cohomologous() here reproduces the difference
// of the two cocycle value lists exactly.
std::vector<IntVec> cech_coboundary1(const CoverNerve& nerve, const Representation& rep,
                                     const std::vector<IntVec>& w);

// Coordinates of a 2-cocycle's class: free coordinates in a fixed basis of
// the free part plus torsion coordinates reduced mod the listed moduli (> 1).
// Two cocycles are cohomologous exactly when all coordinates agree.
struct ClassCoordinates {
    IntVec free;
    IntVec torsion;
    std::vector<Int> torsion_moduli;
    bool operator==(const ClassCoordinates& other) const = default;
};
ClassCoordinates chern_class_coordinates(const ChernCocycle& c);

// A cocycle whose class has the given free coordinates and zero torsion
// coordinates; inverse to chern_class_coordinates on the free part.
// Throws DimensionMismatch if free_coords has the wrong length and
// Unrealizable if no cocycle represents those coordinates.
ChernCocycle reference_cocycle(const CoverNerve& nerve, const Representation& rep,
                               const IntVec& free_coords);

// Re-gluing surgery: returns data with identical linear parts whose Chern
// cocycle class is shifted by exactly the class of the given integer
// 2-cochain (one vector per triangle, tree-trivialized frame).  Shift zero
// returns the input unchanged.  Throws Unrealizable when the shift is not a
// 2-cocycle on this nerve or lies outside the constructive search range.
TransitionData twist_by_class(const TransitionData& td,
                              const std::vector<IntVec>& shift);

// Induced torus-bundle data of a trivial fiberwise-dual fibration over an
// integral affine atlas: chart transitions x -> A x + c on each edge give
// linear part (A^-1)^T and zero toral translation.  Throws CocycleViolation
// if the atlas fails the affine cocycle condition.
TransitionData trivial_fstar_fibration(const CoverNerve& nerve,
                                       const std::vector<AffReal>& atlas);

// Transition data over the nerve whose monodromy equals rep (matrix-exact)
// and whose Chern cocycle is cohomologous to target.  Throws RelatorViolated
// when the nerve and representation are inconsistent, NerveMismatch when the
// target belongs to a different nerve/twisting, and Unrealizable when the
// constructive search cannot reach the class.
TransitionData realize_class(const CoverNerve& nerve, const Representation& rep,
                             const ChernCocycle& target);

}  // namespace torinv
