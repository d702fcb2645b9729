#pragma once

#include <vector>

#include "torinv/affine_groups.hpp"

namespace torinv {

// Element of the integral group ring Z[pi]: a formal sum of words with
// integer coefficients.  Words need not be reduced; evaluation handles that.
struct GroupRingElement {
    struct Term {
        Int coeff;
        Word word;
        bool operator==(const Term& other) const = default;
    };
    std::vector<Term> terms;
    bool operator==(const GroupRingElement& other) const = default;

    static GroupRingElement zero() { return {}; }
    static GroupRingElement one() { return {{{1, {}}}}; }
};

// Chain complex of free Z[pi]-modules in degrees 0..d.  boundaries[k] is the
// matrix of boundary_{k+1} : C_{k+1} -> C_k, of shape ranks[k] x ranks[k+1],
// entries in Z[pi].
struct TwistedComplex {
    GroupPresentation presentation;
    std::vector<std::size_t> ranks;
    std::vector<std::vector<std::vector<GroupRingElement>>> boundaries;
};

// Integer cochain complex obtained by applying a representation.  dims[k] is
// the rank of C^k; deltas[k] is the matrix of delta_{k+1} : C^k -> C^{k+1}.
struct CochainComplex {
    std::vector<std::size_t> dims;
    std::vector<IntMatrix> deltas;
};

// Sum of coeff * rho(word) over the element's terms: an n x m... n x n
// integer matrix for an n-dimensional representation.
IntMatrix apply_representation(const GroupRingElement& elem, const Representation& rep);

// Dualizes: delta_k = rho applied entrywise to the transpose of boundary_k,
// assembled blockwise.  Verifies delta delta = 0 exactly; throws NotAComplex
// otherwise.
CochainComplex to_cochain_complex(const TwistedComplex& cx, const Representation& rep);

// Isomorphism type of ker(delta_{k+1}) / im(delta_k): the image is expressed
// in a basis of the kernel lattice and the quotient read off a Smith form.
AbelianGroup cohomology(const CochainComplex& cc, std::size_t k);

}  // namespace torinv
