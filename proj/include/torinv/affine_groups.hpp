#pragma once

#include <optional>
#include <string>
#include <vector>

#include "torinv/exact_linalg.hpp"

namespace torinv {

// Element of GL(n, Z); construction checks |det| = 1 exactly.
class GLnZ {
public:
    explicit GLnZ(IntMatrix m);
    static GLnZ identity(std::size_t n) { return GLnZ(IntMatrix::identity(n)); }

    std::size_t n() const { return matrix_.rows(); }
    const IntMatrix& matrix() const { return matrix_; }

    GLnZ inverse() const;
    GLnZ operator*(const GLnZ& other) const;
    bool operator==(const GLnZ& other) const = default;

private:
    IntMatrix matrix_;
};

// Affine automorphism x -> A x + c of R^n with A in GL(n, Z) and rational c.
struct AffReal {
    GLnZ linear;
    RatVec translation;
};

// Affine automorphism of the torus T^n = R^n / Z^n; the translation is stored
// as the canonical representative with components in [0, 1).
struct AffToral {
    GLnZ linear;
    RatVec translation;
};

AffToral make_aff_toral(GLnZ linear, RatVec translation);  // reduces mod 1

// Group law (A, x) * (B, y) = (A B, A y + x); toral results reduced mod 1.
AffReal aff_mul(const AffReal& x, const AffReal& y);
AffToral aff_mul(const AffToral& x, const AffToral& y);
AffReal aff_inverse(const AffReal& x);
AffToral aff_inverse(const AffToral& x);
bool aff_equal(const AffReal& a, const AffReal& b);
bool aff_equal(const AffToral& a, const AffToral& b);

// Group words: nonzero letters, |letter| - 1 is the generator index and the
// sign is the exponent (so {1, -2} means g0 * g1^-1).
using Word = std::vector<int>;

struct GroupPresentation {
    std::vector<std::string> generator_names;
    std::vector<Word> relators;
    bool operator==(const GroupPresentation& other) const = default;
};

struct Representation {
    GroupPresentation presentation;
    std::vector<GLnZ> images;
    // Records the matrix size for presentations with no generators, where it
    // cannot be read off the images.
    std::size_t dim = 0;
    std::size_t n() const { return images.empty() ? dim : images[0].n(); }
    bool operator==(const Representation& other) const = default;
};

GLnZ evaluate_word(const Representation& rep, const Word& word);

// Checks every image is unimodular (NotUnimodular) and every relator maps to
// the identity (RelatorViolated, naming the offending relator).  dim is only
// consulted when the presentation has no generators.
Representation validate_representation(const GroupPresentation& pres,
                                       const std::vector<IntMatrix>& images,
                                       std::size_t dim = 0);

// Same-presentation conjugacy test.  Conjugate carries a verified witness P
// with P r1(g) P^-1 = r2(g) for every generator; NotConjugate carries a
// distinguishing invariant; Unknown reports an exhausted bounded search.
struct ConjugacyResult {
    enum class Verdict { Conjugate, NotConjugate, Unknown };
    Verdict verdict;
    std::optional<GLnZ> witness;  // set iff Conjugate
    std::string reason;
};

ConjugacyResult conjugacy_check(const Representation& r1, const Representation& r2,
                                const Int& bound);

}  // namespace torinv
