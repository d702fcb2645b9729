#include "torinv/affine_groups.hpp"

#include <algorithm>
#include <sstream>

namespace torinv {

GLnZ::GLnZ(IntMatrix m) : matrix_(std::move(m)) {
    if (matrix_.rows() != matrix_.cols())
        throw NotUnimodular("GL(n,Z) element must be square");
    Int det = matrix_.determinant();
    if (det != 1 && det != -1)
        throw NotUnimodular("matrix has determinant " + det.str());
}

GLnZ GLnZ::inverse() const { return GLnZ(inverse_unimodular(matrix_)); }

GLnZ GLnZ::operator*(const GLnZ& other) const {
    if (n() != other.n())
        throw DimensionMismatch("GL(n,Z) product of different sizes");
    return GLnZ(matrix_ * other.matrix_);
}

static RatVec reduce_mod1(RatVec v) {
    for (Rat& r : v) r = frac(r);
    return v;
}

AffToral make_aff_toral(GLnZ linear, RatVec translation) {
    if (linear.n() != translation.size())
        throw DimensionMismatch("affine element: linear part is " +
                                std::to_string(linear.n()) + "-dimensional, translation has " +
                                std::to_string(translation.size()) + " components");
    return AffToral{std::move(linear), reduce_mod1(std::move(translation))};
}

template <typename Aff>
static Aff aff_mul_impl(const Aff& x, const Aff& y, bool toral) {
    if (x.linear.n() != y.linear.n() || x.translation.size() != y.translation.size())
        throw DimensionMismatch("affine product of different dimensions");
    RatVec t = mat_vec(x.linear.matrix(), y.translation);
    for (std::size_t i = 0; i < t.size(); ++i) t[i] += x.translation[i];
    if (toral) t = reduce_mod1(std::move(t));
    return Aff{x.linear * y.linear, std::move(t)};
}

AffReal aff_mul(const AffReal& x, const AffReal& y) { return aff_mul_impl(x, y, false); }
AffToral aff_mul(const AffToral& x, const AffToral& y) { return aff_mul_impl(x, y, true); }

template <typename Aff>
static Aff aff_inverse_impl(const Aff& x, bool toral) {
    GLnZ inv = x.linear.inverse();
    RatVec t = mat_vec(inv.matrix(), x.translation);
    for (Rat& r : t) r = -r;
    if (toral) t = reduce_mod1(std::move(t));
    return Aff{std::move(inv), std::move(t)};
}

AffReal aff_inverse(const AffReal& x) { return aff_inverse_impl(x, false); }
AffToral aff_inverse(const AffToral& x) { return aff_inverse_impl(x, true); }

bool aff_equal(const AffReal& a, const AffReal& b) {
    return a.linear == b.linear && a.translation == b.translation;
}
bool aff_equal(const AffToral& a, const AffToral& b) {
    return a.linear == b.linear && a.translation == b.translation;
}

GLnZ evaluate_word(const Representation& rep, const Word& word) {
    std::size_t n = rep.n();
    GLnZ acc = GLnZ::identity(n);
    for (int letter : word) {
        if (letter == 0 || static_cast<std::size_t>(std::abs(letter)) > rep.images.size())
            throw DimensionMismatch("word letter " + std::to_string(letter) +
                                    " references no generator");
        const GLnZ& g = rep.images[std::abs(letter) - 1];
        acc = acc * (letter > 0 ? g : g.inverse());
    }
    return acc;
}

static std::string format_word(const GroupPresentation& pres, const Word& word) {
    if (word.empty()) return "1";
    std::ostringstream os;
    for (std::size_t i = 0; i < word.size(); ++i) {
        int letter = word[i];
        if (i) os << " ";
        os << pres.generator_names[std::abs(letter) - 1];
        if (letter < 0) os << "^-1";
    }
    return os.str();
}

Representation validate_representation(const GroupPresentation& pres,
                                       const std::vector<IntMatrix>& images,
                                       std::size_t dim) {
    if (images.size() != pres.generator_names.size())
        throw DimensionMismatch("representation needs " +
                                std::to_string(pres.generator_names.size()) +
                                " images, got " + std::to_string(images.size()));
    Representation rep;
    rep.presentation = pres;
    for (const IntMatrix& m : images) {
        rep.images.emplace_back(m);  // throws NotUnimodular
        if (rep.images.back().n() != rep.images.front().n())
            throw DimensionMismatch("representation images of different sizes");
    }
    rep.dim = rep.images.empty() ? dim : rep.images.front().n();
    for (const Word& rel : pres.relators)
        if (!evaluate_word(rep, rel).matrix().is_identity())
            throw RelatorViolated("relator " + format_word(pres, rel) +
                                  " does not map to the identity");
    return rep;
}

namespace {

// Exact rational solve of (B^T B) X = B^T for full-column-rank B; returns
// C = (B^T B)^-1 B^T, the left pseudo-inverse of B.
std::vector<RatVec> left_pseudo_inverse(const IntMatrix& B) {
    std::size_t k = B.cols();
    std::vector<RatVec> aug(k, RatVec(k + B.rows()));
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = 0; j < k; ++j) {
            Int s = 0;
            for (std::size_t r = 0; r < B.rows(); ++r) s += B.at(r, i) * B.at(r, j);
            aug[i][j] = Rat(s);
        }
        for (std::size_t r = 0; r < B.rows(); ++r) aug[i][k + r] = Rat(B.at(r, i));
    }
    for (std::size_t col = 0; col < k; ++col) {  // Gauss-Jordan, exact
        std::size_t piv = col;
        while (piv < k && aug[piv][col] == 0) ++piv;
        std::swap(aug[col], aug[piv]);  // B^T B is invertible for full-rank B
        Rat p = aug[col][col];
        for (Rat& v : aug[col]) v /= p;
        for (std::size_t i = 0; i < k; ++i) {
            if (i == col || aug[i][col] == 0) continue;
            Rat f = aug[i][col];
            for (std::size_t j = 0; j < aug[i].size(); ++j) aug[i][j] -= f * aug[col][j];
        }
    }
    std::vector<RatVec> C(k, RatVec(B.rows()));
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t r = 0; r < B.rows(); ++r) C[i][r] = aug[i][k + r];
    return C;
}

std::string polynomial_string(const std::vector<Int>& coeffs) {
    std::ostringstream os;
    os << "[";
    for (std::size_t i = 0; i < coeffs.size(); ++i) os << (i ? "," : "") << coeffs[i];
    os << "]";
    return os.str();
}

}  // namespace

ConjugacyResult conjugacy_check(const Representation& r1, const Representation& r2,
                                const Int& bound) {
    if (!(r1.presentation == r2.presentation))
        throw PresentationMismatch("representations are over different presentations");
    if (r1.n() != r2.n())
        throw DimensionMismatch("representations of different dimensions");
    std::size_t n = r1.n();
    std::size_t g = r1.images.size();

    bool identical = true;
    for (std::size_t i = 0; i < g; ++i)
        if (!(r1.images[i] == r2.images[i])) identical = false;
    if (identical)
        return {ConjugacyResult::Verdict::Conjugate, GLnZ::identity(n), "images identical"};

    // Stage 1: conjugacy invariants -- characteristic polynomials of all words
    // of length <= 3 in the generators and their inverses.
    {
        std::vector<int> letters;
        for (std::size_t i = 1; i <= g; ++i) {
            letters.push_back(static_cast<int>(i));
            letters.push_back(-static_cast<int>(i));
        }
        std::vector<Word> words;
        for (int len = 1; len <= 3; ++len) {
            std::vector<std::size_t> idx(len, 0);
            for (;;) {
                Word w(len);
                for (int p = 0; p < len; ++p) w[p] = letters[idx[p]];
                words.push_back(w);
                int p = len - 1;
                while (p >= 0 && ++idx[p] == letters.size()) {
                    idx[p] = 0;
                    --p;
                }
                if (p < 0) break;
            }
        }
        for (const Word& w : words) {
            auto p1 = characteristic_polynomial(evaluate_word(r1, w).matrix());
            auto p2 = characteristic_polynomial(evaluate_word(r2, w).matrix());
            if (p1 != p2)
                return {ConjugacyResult::Verdict::NotConjugate, std::nullopt,
                        "characteristic polynomial of word " +
                            format_word(r1.presentation, w) + " differs: " +
                            polynomial_string(p1) + " vs " + polynomial_string(p2)};
        }
    }

    // Stage 2: the intertwiner lattice {P : P r1(g) = r2(g) P for all g}.
    // Row-major vec: P A -> (I (x) A^T) vec P, B P -> (B (x) I) vec P.
    IntMatrix sys(g * n * n, n * n);
    for (std::size_t gi = 0; gi < g; ++gi) {
        const IntMatrix& A = r1.images[gi].matrix();
        const IntMatrix& B = r2.images[gi].matrix();
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                std::size_t row = gi * n * n + i * n + j;
                for (std::size_t l = 0; l < n; ++l) {
                    sys.at(row, i * n + l) += A.at(l, j);   // (P A)_{ij}
                    sys.at(row, l * n + j) -= B.at(i, l);   // -(B P)_{ij}
                }
            }
    }
    std::vector<IntVec> kernel = kernel_basis(sys);
    if (kernel.empty())
        return {ConjugacyResult::Verdict::NotConjugate, std::nullopt,
                "no nonzero intertwiner between the representations"};

    // Any conjugator with entries in [-bound, bound] is an integer combination
    // of the kernel basis whose coefficients satisfy |c_i| <= ||row_i of
    // pseudo-inverse||_1 * bound; enumerate that covering box by max-norm
    // shells so small witnesses are found first.
    std::size_t k = kernel.size();
    IntMatrix B(n * n, k);
    for (std::size_t j = 0; j < k; ++j)
        for (std::size_t i = 0; i < n * n; ++i) B.at(i, j) = kernel[j][i];
    std::vector<RatVec> C = left_pseudo_inverse(B);
    std::vector<Int> box(k);
    Int max_shell = 0;
    for (std::size_t i = 0; i < k; ++i) {
        Rat l1 = 0;
        for (const Rat& v : C[i]) l1 += abs(v);
        Rat reach = l1 * Rat(bound);
        box[i] = floor_div(numerator(reach), denominator(reach));
        max_shell = std::max(max_shell, box[i]);
    }

    const long long budget = 4'000'000;  // candidate tuples examined before giving up
    long long examined = 0;
    std::vector<Int> c(k);
    for (Int shell = 1; shell <= max_shell; ++shell) {
        // Odometer over the box clipped to [-shell, shell].
        std::vector<Int> lim(k);
        for (std::size_t i = 0; i < k; ++i) lim[i] = std::min(box[i], shell);
        for (std::size_t i = 0; i < k; ++i) c[i] = -lim[i];
        for (;;) {
            if (++examined > budget)
                return {ConjugacyResult::Verdict::Unknown, std::nullopt,
                        "search budget exhausted before covering conjugator entries in [-" +
                            bound.str() + ", " + bound.str() + "]"};
            Int maxabs = 0;
            for (const Int& v : c) maxabs = std::max(maxabs, Int(abs(v)));
            if (maxabs == shell) {
                IntMatrix P(n, n);
                bool in_range = true;
                for (std::size_t i = 0; i < n && in_range; ++i)
                    for (std::size_t j = 0; j < n && in_range; ++j) {
                        Int v = 0;
                        for (std::size_t b = 0; b < k; ++b)
                            v += c[b] * B.at(i * n + j, b);
                        if (abs(v) > bound) in_range = false;
                        P.at(i, j) = v;
                    }
                if (in_range) {
                    Int det = P.determinant();
                    if (det == 1 || det == -1) {
                        GLnZ witness(P);
                        GLnZ winv = witness.inverse();
                        bool ok = true;
                        for (std::size_t gi = 0; gi < g && ok; ++gi)
                            ok = (witness.matrix() * r1.images[gi].matrix() * winv.matrix()) ==
                                 r2.images[gi].matrix();
                        if (ok)
                            return {ConjugacyResult::Verdict::Conjugate, witness,
                                    "witness found by bounded search"};
                    }
                }
            }
            std::size_t p = 0;
            while (p < k && ++c[p] > lim[p]) {
                c[p] = -lim[p];
                ++p;
            }
            if (p == k) break;
        }
    }
    return {ConjugacyResult::Verdict::Unknown, std::nullopt,
            "bounded search over conjugator entries in [-" + bound.str() + ", " +
                bound.str() + "] exhausted; no invariant separates the representations"};
}

}  // namespace torinv
